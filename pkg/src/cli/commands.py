"""
Command implementations behind the `verify` and `list` subcommands.
"""

import logging
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, TextIO

import yaml

from config.settings import CLI_DEFAULTS, NUMERICS, QUADRATURE, REPORT_CONFIG, SAMPLING
from src.errors import ConfigError, GeometryEngineError, ModelError
from src.models.model_library import build_model, list_models
from src.services.identity_catalog import CATALOG, get_identity
from src.services.identity_suite import ERROR, FAIL, run_catalog
from src.utils.export_utils import ExportUtils, render
from src.utils.text_processing import parse_id_list, parse_param, parse_scalar

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one verify run."""

    model: str = CLI_DEFAULTS["model"]
    params: Dict[str, object] = field(default_factory=dict)
    ids: Optional[List[str]] = None
    points: int = SAMPLING["points"]
    seed: int = SAMPLING["seed"]
    tolerance: float = NUMERICS["tolerance"]
    format: str = CLI_DEFAULTS["format"]
    out: Optional[str] = None
    quadrature_resolution: int = QUADRATURE["resolution"]

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be > 0, got {self.tolerance}")
        if self.points < 1:
            raise ConfigError(f"point count must be >= 1, got {self.points}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.quadrature_resolution < 1:
            raise ConfigError(f"quadrature resolution must be >= 1, got {self.quadrature_resolution}")
        if self.format not in CLI_DEFAULTS["formats"]:
            raise ConfigError(
                f"unknown format '{self.format}' (choose from {', '.join(CLI_DEFAULTS['formats'])})"
            )


_FIELD_NAMES = {f.name for f in fields(RunConfig)}
_NUMERIC_FIELDS = {"points": int, "seed": int, "tolerance": float, "quadrature_resolution": int}


def _read_config_file(path: str) -> Dict[str, object]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    unknown = sorted(set(data) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    if isinstance(data.get("ids"), str):
        data["ids"] = parse_id_list(data["ids"])
    return data


def load_run_config(
    overrides: Mapping[str, object], config_path: Optional[str] = None
) -> RunConfig:
    """
    Resolve a RunConfig: defaults, then the YAML file, then flags.

    Args:
        overrides: Flag values; None entries are treated as not given
        config_path: Optional YAML file with a flat mapping of RunConfig keys

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Unreadable file, unknown key or invalid value
    """
    settings: Dict[str, object] = {}
    if config_path:
        settings.update(_read_config_file(config_path))
    file_params = dict(settings.pop("params", None) or {})
    flag_params = dict(overrides.get("params") or {})
    settings.update({k: v for k, v in overrides.items() if v is not None and k != "params"})
    settings["params"] = {**file_params, **flag_params}
    try:
        for key, cast in _NUMERIC_FIELDS.items():
            if key in settings:
                settings[key] = cast(parse_scalar(str(settings[key])))
        config = replace(RunConfig(), **settings)
    except ValueError as exc:
        raise ConfigError(f"invalid numeric setting: {exc}") from exc
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    logger.debug("run config: %s", config)
    return config


def parse_params(assignments: Optional[List[str]]) -> Dict[str, object]:
    return dict(parse_param(a) for a in assignments or [])


def cmd_verify(config: RunConfig, stream: Optional[TextIO] = None) -> int:
    """
    Build the model, run the selected identities and write the report.

    Returns:
        0 when every evaluated identity passes, 1 on a failed or errored
        identity, 2 on configuration or model errors
    """
    try:
        if config.ids:
            for identity_id in config.ids:
                get_identity(identity_id)
        model = build_model(config.model, config.params)
        reports = run_catalog(
            model,
            seed=config.seed,
            count=config.points,
            tolerance=config.tolerance,
            ids=config.ids,
            quadrature_resolution=config.quadrature_resolution,
        )
    except (ConfigError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryEngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    results = ExportUtils.format_results_for_export(reports, model.params)
    text = render(results, config.format)
    if config.out:
        target = Path(config.out)
        if target.is_dir():
            extension = REPORT_CONFIG["extensions"][config.format]
            target = target / ExportUtils.generate_filename(model.name, extension)
        target.write_text(text, encoding="utf-8")
        logger.info("report written to %s", target)
    else:
        (stream or sys.stdout).write(text)

    bad = [r.identity for r in reports if r.verdict in (FAIL, ERROR)]
    if bad:
        print(f"failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_list(stream: Optional[TextIO] = None) -> int:
    """Print every model with its property table and every identity with its anchor."""
    stream = stream or sys.stdout
    stream.write("Models:\n")
    for spec in list_models():
        model = build_model(spec.name, validate=False)
        stream.write(f"  {spec.name}: {spec.description}\n")
        stream.write(
            f"    n={model.dimension} p={model.leaf_dimension} q={model.codimension} "
            f"defaults={dict(sorted(spec.defaults.items()))}\n"
        )
        for key, value in model.properties.as_table().items():
            stream.write(f"    {key}: {value}\n")
    stream.write("Identities:\n")
    for identity in CATALOG:
        stream.write(f"  {identity.id:<20} {identity.anchor}\n")
    return EXIT_OK
