"""
Evaluation of catalog identities on sampled points.

Produces one ResidualReport per (model, identity) with the verdict rule:
fail when the largest residual exceeds the tolerance, vacuous when a
normalized identity's normalizer stays below the floor at every point, pass
otherwise. Points whose evaluation hits a chart or frame degeneracy are
skipped and counted.
"""

import itertools
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from typing_extensions import Literal

from config.settings import NUMERICS, QUADRATURE, SAMPLING
from src.errors import (
    DegenerateMetricError,
    EvaluationError,
    FrameError,
    GeometryEngineError,
    JetDivisionError,
    OutOfChartError,
    PreconditionError,
)
from src.fields.smooth_fields import ChartPoint
from src.geometry.foliation import FoliatedModel, horizontal_divergence
from src.models.model_library import sample_points
from src.services.identity_catalog import (
    CATALOG,
    COR26,
    INTEGRAL,
    EvaluationContext,
    Identity,
    Sample,
    catalog_index,
    classify_contact,
    contact_value,
    get_identity,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
INAPPLICABLE = "inapplicable"
ERROR = "error"

Verdict = Literal["pass", "fail", "vacuous", "inapplicable", "error"]

SKIPPABLE = (OutOfChartError, DegenerateMetricError, FrameError, JetDivisionError)


@dataclass
class ResidualReport:
    """Outcome of one identity on one model."""

    model: str
    identity: str
    anchor: str
    points: int
    max_residual: Optional[float]
    tolerance: float
    verdict: Verdict
    skipped: int = 0
    relative_residual: Optional[float] = None
    detail: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, VACUOUS)

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def _inapplicable(model: FoliatedModel, identity: Identity, tolerance: float, reasons: List[str]) -> ResidualReport:
    logger.info("%s/%s inapplicable: %s", model.name, identity.id, "; ".join(reasons))
    return ResidualReport(
        model=model.name,
        identity=identity.id,
        anchor=identity.anchor,
        points=0,
        max_residual=None,
        tolerance=tolerance,
        verdict=INAPPLICABLE,
        detail={"reasons": reasons},
    )


def _collect(
    identity: Identity, ctx: EvaluationContext, points: Sequence[ChartPoint], seed: int
) -> tuple:
    index = catalog_index(identity.id)
    samples: List[Sample] = []
    skipped = 0
    for i, x in enumerate(points):
        rng = np.random.default_rng([seed, index, i])
        try:
            samples.append(identity.residual(ctx, x, rng))
        except SKIPPABLE as exc:
            skipped += 1
            logger.debug("%s/%s: skipped %s (%s)", ctx.model.name, identity.id, x.coords, exc)
    if skipped > SAMPLING["max_skip_fraction"] * len(points) or not samples:
        raise EvaluationError(
            f"{ctx.model.name}/{identity.id}: skipped {skipped} of {len(points)} points"
        )
    return samples, skipped


def _verdict(max_residual: float, tolerance: float, normalizers: Optional[List[float]]) -> str:
    if not max_residual <= tolerance:
        return FAIL
    if normalizers is not None and all(abs(v) < NUMERICS["vacuous_floor"] for v in normalizers):
        return VACUOUS
    return PASS


def _relative(max_residual: float, scale: float) -> Optional[float]:
    if scale > NUMERICS["division_floor"]:
        return max_residual / scale
    return None


def _pointwise(
    model: FoliatedModel,
    identity: Identity,
    points: Sequence[ChartPoint],
    tolerance: float,
    seed: int,
) -> ResidualReport:
    ctx = EvaluationContext(model, points, seed, tolerance)
    samples, skipped = _collect(identity, ctx, points, seed)
    max_residual = max(s.residual for s in samples)
    normalizers = [s.normalizer for s in samples] if identity.normalized else None
    verdict = _verdict(max_residual, tolerance, normalizers)
    if verdict == VACUOUS:
        logger.warning("%s/%s holds vacuously: g(tau,tau) vanishes", model.name, identity.id)
    detail = identity.summarize(ctx, samples) if identity.summarize else {}
    return ResidualReport(
        model=model.name,
        identity=identity.id,
        anchor=identity.anchor,
        points=len(samples),
        max_residual=max_residual,
        tolerance=tolerance,
        verdict=verdict,
        skipped=skipped,
        relative_residual=_relative(max_residual, max(s.scale for s in samples)),
        detail=detail,
    )


def evaluate_identity(
    model: FoliatedModel,
    identity_id: str,
    points: Sequence[ChartPoint],
    tolerance: float = NUMERICS["tolerance"],
    seed: int = SAMPLING["seed"],
    enforce_gate: bool = True,
    quadrature_resolution: int = QUADRATURE["resolution"],
) -> ResidualReport:
    """
    Evaluate one catalog identity on a model.

    Args:
        model: Validated foliated model
        identity_id: Catalog id
        points: Sample points inside the shrunk chart box
        tolerance: Absolute residual tolerance
        seed: Base seed of the per-point argument generators
        enforce_gate: Report inapplicable when the model lacks a hypothesis
        quadrature_resolution: Grid size per axis for the integral identity

    Returns:
        ResidualReport for the identity

    Raises:
        ConfigError: Unknown identity id
        EvaluationError: Too many points had to be skipped
    """
    identity = get_identity(identity_id)
    unmet = identity.requires.unmet(model)
    if unmet and enforce_gate:
        return _inapplicable(model, identity, tolerance, unmet)
    if unmet:
        logger.warning("%s/%s evaluated without: %s", model.name, identity.id, "; ".join(unmet))

    if identity.kind == INTEGRAL:
        return integral_check_136(model, quadrature_resolution, tolerance)
    if identity.kind == COR26:
        return cor26_verdict(model, points, tolerance, seed).to_report()
    return _pointwise(model, identity, points, tolerance, seed)


def run_catalog(
    model: FoliatedModel,
    seed: int = SAMPLING["seed"],
    count: int = SAMPLING["points"],
    tolerance: float = NUMERICS["tolerance"],
    ids: Optional[Sequence[str]] = None,
    quadrature_resolution: int = QUADRATURE["resolution"],
) -> List[ResidualReport]:
    """Evaluate the selected identities (all by default) in catalog order."""
    points = sample_points(model, count, seed)
    selected = [get_identity(i) for i in ids] if ids else list(CATALOG)
    selected_ids = {identity.id for identity in selected}
    reports = []
    for identity in CATALOG:
        if identity.id not in selected_ids:
            continue
        try:
            report = evaluate_identity(
                model, identity.id, points, tolerance, seed, quadrature_resolution=quadrature_resolution
            )
        except GeometryEngineError as exc:
            logger.error("%s/%s: %s", model.name, identity.id, exc)
            report = ResidualReport(
                model=model.name,
                identity=identity.id,
                anchor=identity.anchor,
                points=0,
                max_residual=None,
                tolerance=tolerance,
                verdict=ERROR,
                detail={"error": str(exc)},
            )
        logger.info("%s/%s: %s", model.name, identity.id, report.verdict)
        reports.append(report)
    return reports


@dataclass
class Cor26Verdict:
    """Comparison of g(τ,τ) with −pqc and −p²qc."""

    model: str
    applicable: bool
    reason: str = ""
    g_tau_tau: Optional[float] = None
    minus_pqc: Optional[float] = None
    minus_p2qc: Optional[float] = None
    matches: str = "neither"
    max_residual: Optional[float] = None
    tolerance: float = NUMERICS["tolerance"]
    points: int = 0
    skipped: int = 0
    vacuous: bool = False

    def to_report(self) -> ResidualReport:
        identity = get_identity("COR26_VERDICT")
        detail = {
            "g_tau_tau": self.g_tau_tau,
            "minus_pqc": self.minus_pqc,
            "minus_p2qc": self.minus_p2qc,
            "matches": self.matches,
        }
        if not self.applicable:
            verdict = INAPPLICABLE
            detail = {"reasons": [self.reason]}
        elif self.max_residual is not None and not self.max_residual <= self.tolerance:
            verdict = FAIL
        else:
            verdict = VACUOUS if self.vacuous else PASS
        return ResidualReport(
            model=self.model,
            identity=identity.id,
            anchor=identity.anchor,
            points=self.points,
            max_residual=self.max_residual,
            tolerance=self.tolerance,
            verdict=verdict,
            skipped=self.skipped,
            relative_residual=_relative(self.max_residual, abs(self.g_tau_tau))
            if self.max_residual is not None and self.g_tau_tau is not None
            else None,
            detail=detail,
        )


def cor26_verdict(
    model: FoliatedModel,
    points: Optional[Sequence[ChartPoint]] = None,
    tolerance: float = NUMERICS["tolerance"],
    seed: int = SAMPLING["seed"],
) -> Cor26Verdict:
    """
    Decide whether g(τ,τ) equals −p²qc, −pqc, both or neither.

    Applies to bundle-like constant-curvature models with umbilical leaves,
    vanishing A and div_H τ = 0 on the sample.
    """
    identity = get_identity("COR26_VERDICT")
    unmet = identity.requires.unmet(model)
    if unmet:
        return Cor26Verdict(model.name, False, "; ".join(unmet), tolerance=tolerance)
    if points is None:
        points = sample_points(model, SAMPLING["points"], seed)
    ctx = EvaluationContext(model, points, seed, tolerance)
    samples, skipped = _collect(identity, ctx, points, seed)

    div_h = max(abs(s.extras["div_h_tau"]) for s in samples)
    if div_h > tolerance:
        return Cor26Verdict(
            model.name, False, f"div_H tau does not vanish ({div_h:.3e})", tolerance=tolerance
        )

    p, q = model.leaf_dimension, model.codimension
    c = model.properties.curvature
    values = [s.extras["g_tau_tau"] for s in samples]
    minus_pqc, minus_p2qc = -p * q * c, -p * p * q * c
    off_pqc = max(abs(v - minus_pqc) for v in values)
    off_p2qc = max(abs(v - minus_p2qc) for v in values)
    matches = {
        (True, True): "both",
        (True, False): "-pqc",
        (False, True): "-p^2qc",
        (False, False): "neither",
    }[(off_pqc <= tolerance, off_p2qc <= tolerance)]
    if matches == "-p^2qc":
        logger.warning(
            "%s: g(tau,tau)=%.6g matches -p^2qc=%.6g, not -pqc=%.6g",
            model.name, values[0], minus_p2qc, minus_pqc,
        )
    return Cor26Verdict(
        model=model.name,
        applicable=True,
        g_tau_tau=float(np.mean(values)),
        minus_pqc=float(minus_pqc),
        minus_p2qc=float(minus_p2qc),
        matches=matches,
        max_residual=min(off_pqc, off_p2qc),
        tolerance=tolerance,
        points=len(samples),
        skipped=skipped,
        vacuous=all(abs(v) < NUMERICS["vacuous_floor"] for v in values),
    )


def _quadrature_nodes(model: FoliatedModel, resolution: int):
    lower = np.array(model.domain.lower)
    upper = np.array(model.domain.upper)
    center = model.domain.center().array()
    lo, hi = model.domain.shrunk()
    axes = model.quadrature_axes
    steps = (upper - lower) / resolution
    cell = float(np.prod([steps[a] for a in axes]))
    cell *= float(np.prod([upper[k] - lower[k] for k in range(model.dimension) if k not in axes]))
    for index in itertools.product(range(resolution), repeat=len(axes)):
        coords = center.copy()
        for a, k in zip(axes, index):
            coords[a] = np.clip(lower[a] + (k + 0.5) * steps[a], lo[a], hi[a])
        yield ChartPoint(tuple(coords)), cell


def integral_check_136(
    model: FoliatedModel,
    resolution: int = QUADRATURE["resolution"],
    tolerance: float = NUMERICS["tolerance"],
) -> ResidualReport:
    """
    Compare ∫ g(τ,τ) dV with ∫ div_H τ dV over a periodic chart box.

    The integrands are constant along the axes outside `quadrature_axes`, so
    only those axes are gridded; the midpoint rule on a periodic box is the
    periodic trapezoid rule.

    Raises:
        PreconditionError: The model's chart is not a periodic box
    """
    if not model.periodic:
        raise PreconditionError(f"{model.name} is not periodic; the integral identity needs a closed chart")
    if resolution < 1:
        raise PreconditionError(f"quadrature resolution must be >= 1, got {resolution}")
    g = model.metric
    tau = model.mean_curvature
    first = second = 0.0
    nodes = 0
    for x, cell in _quadrature_nodes(model, resolution):
        volume = float(np.sqrt(np.linalg.det(g.matrix(x)))) * cell
        first += g.inner_at(tau, tau, x) * volume
        second += horizontal_divergence(model, tau, x) * volume
        nodes += 1
    difference = abs(first - second)
    scale = max(abs(first), abs(second))
    relative = _relative(difference, scale)
    residual = relative if relative is not None else difference
    identity = get_identity("INTEGRAL_136")
    return ResidualReport(
        model=model.name,
        identity=identity.id,
        anchor=identity.anchor,
        points=nodes,
        max_residual=residual,
        tolerance=tolerance,
        verdict=PASS if residual <= tolerance else FAIL,
        relative_residual=relative,
        detail={
            "resolution": resolution,
            "integral_g_tau_tau": first,
            "integral_div_h_tau": second,
            "absolute_difference": difference,
        },
    )


@dataclass
class ContactClassification:
    model: str
    classification: str
    values: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)


def contact_classify(
    model: FoliatedModel,
    points: Optional[Sequence[ChartPoint]] = None,
    tolerance: float = NUMERICS["tolerance"],
) -> ContactClassification:
    """Classify ℋ of a 3-dimensional flow as contact, integrable or mixed on the sample."""
    unmet = get_identity("CONTACT_CLASS").requires.unmet(model)
    if unmet:
        return ContactClassification(model.name, INAPPLICABLE)
    if points is None:
        points = sample_points(model, SAMPLING["points"], SAMPLING["seed"])
    ctx = EvaluationContext(model, points, tolerance=tolerance)
    values, ratios = [], []
    for x in points:
        value, _, volume = contact_value(ctx, x)
        values.append(value)
        ratios.append(value / volume)
    return ContactClassification(model.name, classify_contact(values, tolerance), values, ratios)
