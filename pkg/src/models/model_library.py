"""
Built-in foliated models with closed-form geometry
"""

import logging
import math
import numbers
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from config.settings import MODEL_DEFAULTS, NUMERICS, SAMPLING
from src.errors import ModelError, PreconditionError
from src.fields.smooth_fields import ChartDomain, ChartPoint, ScalarField, VectorField, cos, exp, sin
from src.geometry.exterior_calculus import mean_curvature_one_form
from src.geometry.foliation import (
    Distribution,
    FoliatedModel,
    ModelProperties,
    basic_form_defect,
    is_bundle_like,
    tensor_A,
    umbilical_defect,
)
from src.geometry.riemannian_core import MetricField, constant_curvature_residual

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelSpec:
    """Registry entry: how to build a model and which parameters it takes."""

    name: str
    builder: Callable[[Dict[str, object]], FoliatedModel]
    description: str
    parameter_types: Dict[str, type] = field(default_factory=dict)

    @property
    def defaults(self) -> Dict[str, object]:
        return dict(MODEL_DEFAULTS.get(self.name, {}))


def _coordinates(n: int, domain: ChartDomain) -> List[ScalarField]:
    return [ScalarField.coordinate(k, n, domain) for k in range(n)]


def _diagonal(entries: List[ScalarField], domain: ChartDomain, label: str) -> MetricField:
    n = len(entries)
    zero = ScalarField.constant(0.0, n)
    rows = [[entries[i] if i == j else zero for j in range(n)] for i in range(n)]
    return MetricField(rows, domain, label)


def _build_flat_torus_flow(params: Dict[str, object]) -> FoliatedModel:
    n = 3
    domain = ChartDomain((0.0,) * n, (TWO_PI,) * n)
    one = ScalarField.constant(1.0, n)
    metric = _diagonal([one] * n, domain, "euclidean")
    return FoliatedModel(
        "flat_torus_flow",
        metric,
        Distribution([VectorField.coordinate(2, n)]),
        domain,
        properties=ModelProperties(
            curvature=0.0,
            bundle_like=True,
            umbilical=True,
            kappa_basic=True,
            a_vanishes=True,
            tau_vanishes=True,
        ),
        params=params,
        periodic=True,
        quadrature_axes=(),
    )


def _build_hopf_s3(params: Dict[str, object]) -> FoliatedModel:
    n = 3
    domain = ChartDomain((0.1, 0.0, 0.0), (0.5 * math.pi - 0.1, TWO_PI, TWO_PI))
    eta = _coordinates(n, domain)[0]
    metric = _diagonal(
        [ScalarField.constant(1.0, n), cos(eta) ** 2, sin(eta) ** 2], domain, "round"
    )
    fibre = VectorField.coordinate(1, n) + VectorField.coordinate(2, n)
    fibre.label = "d1+d2"
    return FoliatedModel(
        "hopf_s3",
        metric,
        Distribution([fibre]),
        domain,
        properties=ModelProperties(
            curvature=1.0,
            bundle_like=True,
            umbilical=True,
            kappa_basic=True,
            a_vanishes=False,
            tau_vanishes=True,
        ),
        params=params,
    )


def _build_horosphere(params: Dict[str, object]) -> FoliatedModel:
    p = params["p"]
    if p < 1:
        raise ModelError(f"horosphere: leaf dimension p must be >= 1, got {p}")
    n = p + 1
    domain = ChartDomain((-1.0,) * p + (0.5,), (1.0,) * p + (2.0,))
    y = _coordinates(n, domain)[p]
    conformal = y ** -2
    metric = _diagonal([conformal] * n, domain, "hyperbolic")
    return FoliatedModel(
        "horosphere",
        metric,
        Distribution([VectorField.coordinate(i, n) for i in range(p)]),
        domain,
        properties=ModelProperties(
            curvature=-1.0,
            bundle_like=True,
            umbilical=True,
            kappa_basic=True,
            a_vanishes=True,
            tau_vanishes=False,
        ),
        params=params,
    )


def _build_conformal_torus(params: Dict[str, object]) -> FoliatedModel:
    amplitude = params["amplitude"]
    n = 4
    domain = ChartDomain((0.0,) * n, (TWO_PI,) * n)
    x = _coordinates(n, domain)[2]
    # f = exp(amplitude * sin x), so f^2 = exp(2 amplitude sin x)
    warp = exp(sin(x) * (2.0 * amplitude))
    one = ScalarField.constant(1.0, n)
    metric = _diagonal([warp, warp, one, one], domain, "conformal")
    flat = amplitude == 0.0
    return FoliatedModel(
        "conformal_torus",
        metric,
        Distribution([VectorField.coordinate(0, n), VectorField.coordinate(1, n)]),
        domain,
        properties=ModelProperties(
            curvature=0.0 if flat else None,
            bundle_like=True,
            umbilical=True,
            kappa_basic=True,
            a_vanishes=True,
            tau_vanishes=flat,
        ),
        params=params,
        periodic=True,
        quadrature_axes=(2,),
    )


def _build_twisted_flow(params: Dict[str, object]) -> FoliatedModel:
    psi_z, psi_xz = params["psi_z"], params["psi_xz"]
    twist, warp = params["twist"], params["warp"]
    n = 3
    domain = ChartDomain((-1.0, -1.0, -1.0), (1.0, 2.0, 1.0))
    x, y, z = _coordinates(n, domain)
    psi = z * psi_z + x * z * psi_xz
    a = y * twist
    fibre = exp(psi * 2.0)
    base = exp(z * (2.0 * warp))
    zero = ScalarField.constant(0.0, n)
    metric = MetricField(
        [
            [base + fibre * a * a, zero, fibre * a],
            [zero, base, zero],
            [zero, zero, fibre],
        ],
        domain,
        "twisted",
    )
    flat = psi_z == 0.0 and psi_xz == 0.0 and twist == 0.0 and warp == 0.0
    return FoliatedModel(
        "twisted_flow",
        metric,
        Distribution([VectorField.coordinate(2, n)]),
        domain,
        properties=ModelProperties(
            curvature=0.0 if flat else None,
            bundle_like=warp == 0.0,
            umbilical=True,
            kappa_basic=psi_xz == 0.0,
            a_vanishes=twist == 0.0 and warp == 0.0,
            tau_vanishes=psi_xz == 0.0 and (twist == 0.0 or psi_z == 0.0),
        ),
        params=params,
    )


MODEL_REGISTRY: Dict[str, ModelSpec] = {
    spec.name: spec
    for spec in (
        ModelSpec(
            "flat_torus_flow",
            _build_flat_torus_flow,
            "flat 3-torus chart foliated by the z-circles; every invariant vanishes",
        ),
        ModelSpec(
            "hopf_s3",
            _build_hopf_s3,
            "round S^3 in Hopf coordinates with the Hopf flow; c=1, tau=0, A!=0",
        ),
        ModelSpec(
            "horosphere",
            _build_horosphere,
            "upper half-space foliated by horospheres y=const; c=-1, umbilical",
            {"p": int},
        ),
        ModelSpec(
            "conformal_torus",
            _build_conformal_torus,
            "f^2(dt1^2+dt2^2)+dx^2+dy^2 with f=exp(amplitude sin x); bundle-like, umbilical",
            {"amplitude": float},
        ),
        ModelSpec(
            "twisted_flow",
            _build_twisted_flow,
            "exp(2 warp z)(dx^2+dy^2)+exp(2 psi)(dz+twist y dx)^2, psi=psi_z z+psi_xz x z",
            {"psi_z": float, "psi_xz": float, "twist": float, "warp": float},
        ),
    )
}


def list_models() -> List[ModelSpec]:
    """Registered models in a stable order."""
    return [MODEL_REGISTRY[name] for name in sorted(MODEL_REGISTRY)]


def _resolve_params(spec: ModelSpec, params: Optional[Mapping[str, object]]) -> Dict[str, object]:
    resolved = spec.defaults
    for key, value in (params or {}).items():
        if key not in spec.parameter_types:
            known = ", ".join(sorted(spec.parameter_types)) or "none"
            raise ModelError(f"{spec.name}: unknown parameter '{key}' (accepted: {known})")
        expected = spec.parameter_types[key]
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ModelError(f"{spec.name}: parameter '{key}' must be numeric, got {value!r}")
        if expected is int:
            if float(value) != int(value):
                raise ModelError(f"{spec.name}: parameter '{key}' must be an integer, got {value!r}")
            value = int(value)
        else:
            value = float(value)
            if not math.isfinite(value):
                raise ModelError(f"{spec.name}: parameter '{key}' must be finite")
        resolved[key] = value
    return resolved


def build_model(
    name: str, params: Optional[Mapping[str, object]] = None, validate: bool = True
) -> FoliatedModel:
    """
    Build a registered model and check its property table.

    Args:
        name: Registry name of the model
        params: Parameter overrides on top of the model defaults
        validate: Check every claimed property on sample points

    Returns:
        The foliated model

    Raises:
        ModelError: Unknown name, bad parameters, or a property claim that fails
    """
    spec = MODEL_REGISTRY.get(name)
    if spec is None:
        raise ModelError(f"unknown model '{name}' (known: {', '.join(sorted(MODEL_REGISTRY))})")
    model = spec.builder(_resolve_params(spec, params))
    logger.info("built %s with params %s", name, model.params)
    if validate:
        validate_properties(model)
    return model


def sample_points(model: FoliatedModel, count: int, seed: int = SAMPLING["seed"]) -> List[ChartPoint]:
    """Uniform points in the shrunk chart box from numpy's PCG64 generator."""
    if count < 1:
        raise PreconditionError(f"point count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    lower, upper = model.domain.shrunk()
    samples = rng.uniform(lower, upper, size=(count, model.dimension))
    return [ChartPoint(tuple(row)) for row in samples]


def _a_defect(model: FoliatedModel, x: ChartPoint) -> float:
    frame = model.frames(x).full
    g = model.metric
    return max(g.norm_at(tensor_A(model, E, F, x), x) for E in frame for F in frame)


def _compare(name: str, claim: bool, defect: float, tolerance: float, failures: List[str]) -> None:
    holds = defect <= tolerance
    if holds != claim:
        failures.append(f"{name} claimed {claim} but defect is {defect:.3e}")


def validate_properties(
    model: FoliatedModel,
    points: Optional[List[ChartPoint]] = None,
    tolerance: float = NUMERICS["tolerance"],
) -> Dict[str, float]:
    """
    Check every claim in the model's property table on sample points.

    Returns:
        Defect per checked property

    Raises:
        ModelError: A claim does not match the computed defect
    """
    if points is None:
        points = sample_points(model, SAMPLING["validation_points"], SAMPLING["seed"])
    claims = model.properties
    failures: List[str] = []
    defects: Dict[str, float] = {}

    defects["integrability"] = model.distribution.integrability_defect(model, points)
    if defects["integrability"] > tolerance:
        failures.append(f"distribution is not integrable (defect {defects['integrability']:.3e})")

    if claims.curvature is not None:
        defects["constant_curvature"] = max(
            constant_curvature_residual(model, x, SAMPLING["trials"], SAMPLING["seed"]) for x in points
        )
        _compare("constant curvature", True, defects["constant_curvature"], tolerance, failures)

    bundle = is_bundle_like(model, points)
    if bundle.holds is None:
        logger.warning("%s: bundle-like claim could not be checked", model.name)
    else:
        defects["bundle_like"] = bundle.defect
        _compare("bundle_like", claims.bundle_like, bundle.defect, tolerance, failures)

    defects["umbilical"] = max(umbilical_defect(model, x) for x in points)
    _compare("umbilical", claims.umbilical, defects["umbilical"], tolerance, failures)

    defects["kappa_basic"] = basic_form_defect(model, mean_curvature_one_form(model), points)
    _compare("kappa_basic", claims.kappa_basic, defects["kappa_basic"], tolerance, failures)

    defects["a_vanishes"] = max(_a_defect(model, x) for x in points)
    _compare("a_vanishes", claims.a_vanishes, defects["a_vanishes"], tolerance, failures)

    g = model.metric
    defects["tau_vanishes"] = max(g.norm_at(model.mean_curvature.at(x), x) for x in points)
    _compare("tau_vanishes", claims.tau_vanishes, defects["tau_vanishes"], tolerance, failures)

    if failures:
        raise ModelError(f"{model.name} fails its property table: " + "; ".join(failures))
    logger.info("%s: property table validated on %d points", model.name, len(points))
    return defects
