"""
Catalog of pointwise foliation identities.

Each entry pairs an applicability gate with a residual evaluated at one point.
Residual functions receive an EvaluationContext (model plus lazily built forms
and basic fields), the point, and a per-point random generator used to draw
argument families as constant combinations of frame fields.
"""

import functools
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config.settings import NUMERICS, SAMPLING
from src.errors import ConfigError
from src.fields.smooth_fields import ChartPoint, VectorField, lie_bracket, linear_combination
from src.geometry.exterior_calculus import (
    DifferentialForm,
    basic_codifferential,
    characteristic_form,
    codifferential,
    exterior_derivative,
    horizontal_volume_form,
    mean_curvature_one_form,
    wedge,
)
from src.geometry.foliation import (
    VERTICAL,
    FoliatedModel,
    a_field,
    basic_candidates,
    basic_form_defect,
    horizontal_divergence,
    leaf_divergence,
    mean_curvature_form_bracket,
    project,
    tensor_A,
    tensor_T,
)
from src.geometry.riemannian_core import (
    covariant_derivative_at,
    curvature_quad,
    divergence_full,
    ricci,
)
from src.geometry.splitting import (
    a_derivative,
    leaf_curvature,
    t_derivative,
    transverse_curvature,
    transverse_ricci,
)

logger = logging.getLogger(__name__)

POINTWISE = "pointwise"
INTEGRAL = "integral"
COR26 = "cor26"


class Sample(NamedTuple):
    """Residual at one point, with the size of the compared quantity."""

    residual: float
    scale: float = 0.0
    normalizer: Optional[float] = None
    extras: Optional[Dict[str, float]] = None


@dataclass(frozen=True)
class Requirements:
    """Hypotheses an identity needs; checked against the validated property table."""

    bundle_like: bool = False
    umbilical: bool = False
    constant_curvature: bool = False
    kappa_basic: bool = False
    a_vanishes: bool = False
    periodic: bool = False
    dimension: Optional[int] = None
    leaf_dimension: Optional[int] = None
    min_leaf_dimension: int = 1
    codimension: Optional[int] = None
    min_codimension: int = 1

    def unmet(self, model: FoliatedModel) -> List[str]:
        claims = model.properties
        reasons = []
        if self.bundle_like and not claims.bundle_like:
            reasons.append("metric is not bundle-like")
        if self.umbilical and not claims.umbilical:
            reasons.append("leaves are not totally umbilical")
        if self.constant_curvature and claims.curvature is None:
            reasons.append("no constant curvature")
        if self.kappa_basic and not claims.kappa_basic:
            reasons.append("kappa is not basic")
        if self.a_vanishes and not claims.a_vanishes:
            reasons.append("A does not vanish")
        if self.periodic and not model.periodic:
            reasons.append("chart is not a periodic box")
        if self.dimension is not None and model.dimension != self.dimension:
            reasons.append(f"needs n={self.dimension}")
        if self.leaf_dimension is not None and model.leaf_dimension != self.leaf_dimension:
            reasons.append(f"needs p={self.leaf_dimension}")
        if model.leaf_dimension < self.min_leaf_dimension:
            reasons.append(f"needs p>={self.min_leaf_dimension}")
        if self.codimension is not None and model.codimension != self.codimension:
            reasons.append(f"needs q={self.codimension}")
        if model.codimension < self.min_codimension:
            reasons.append(f"needs q>={self.min_codimension}")
        return reasons


class EvaluationContext:
    """Per-evaluation cache of the forms and fields an identity reuses across points."""

    def __init__(
        self,
        model: FoliatedModel,
        points: Sequence[ChartPoint],
        seed: int = SAMPLING["seed"],
        tolerance: float = NUMERICS["tolerance"],
    ) -> None:
        self.model = model
        self.points = list(points)
        self.seed = seed
        self.tolerance = tolerance

    @property
    def predicate_points(self) -> List[ChartPoint]:
        return self.points[: SAMPLING["predicate_points"]]

    @functools.cached_property
    def kappa(self) -> DifferentialForm:
        return mean_curvature_one_form(self.model)

    @functools.cached_property
    def d_kappa(self) -> DifferentialForm:
        return exterior_derivative(self.kappa)

    @functools.cached_property
    def chi(self) -> DifferentialForm:
        return characteristic_form(self.model)

    @functools.cached_property
    def d_chi(self) -> DifferentialForm:
        return exterior_derivative(self.chi)

    @functools.cached_property
    def kappa_chi(self) -> DifferentialForm:
        return wedge(self.kappa, self.chi)

    @functools.cached_property
    def d_kappa_chi(self) -> DifferentialForm:
        return exterior_derivative(self.kappa_chi)

    @functools.cached_property
    def delta_kappa_chi(self) -> DifferentialForm:
        return codifferential(self.model, self.kappa_chi)

    @functools.cached_property
    def delta_kappa(self) -> DifferentialForm:
        return codifferential(self.model, self.kappa)

    @functools.cached_property
    def tilde_delta_kappa(self) -> DifferentialForm:
        return basic_codifferential(self.model, self.kappa, self.predicate_points, self.tolerance)

    @functools.cached_property
    def basics(self) -> List[VectorField]:
        found = basic_candidates(self.model, self.predicate_points, self.tolerance)
        logger.debug("%s: %d basic fields in the argument family", self.model.name, len(found))
        return found


ResidualFn = Callable[[EvaluationContext, ChartPoint, np.random.Generator], Sample]
SummaryFn = Callable[[EvaluationContext, List[Sample]], Dict[str, object]]


@dataclass(frozen=True)
class Identity:
    """A catalog entry: id, anchor quote, gate, argument family and residual."""

    id: str
    anchor: str
    family: str
    requires: Requirements = field(default_factory=Requirements)
    residual: Optional[ResidualFn] = None
    kind: str = POINTWISE
    normalized: bool = False
    summarize: Optional[SummaryFn] = None


# argument families


def _random_combination(frame: Sequence[VectorField], rng: np.random.Generator) -> VectorField:
    return linear_combination(rng.standard_normal(len(frame)), frame)


def _random_vertical(model: FoliatedModel, x: ChartPoint, rng, count: int) -> List[VectorField]:
    frame = model.frames(x).vertical
    return [_random_combination(frame, rng) for _ in range(count)]


def _random_horizontal(model: FoliatedModel, x: ChartPoint, rng, count: int) -> List[VectorField]:
    frame = model.frames(x).horizontal
    return [_random_combination(frame, rng) for _ in range(count)]


def _horizontal_pairs(model: FoliatedModel, x: ChartPoint, rng) -> List[Tuple[VectorField, VectorField]]:
    frame = model.frames(x).horizontal
    pairs = list(combinations(frame, 2))
    pairs.append(tuple(_random_horizontal(model, x, rng, 2)))
    return pairs


def _g(model: FoliatedModel, u, v, x: ChartPoint) -> float:
    return model.metric.inner_at(u, v, x)


def _norm(model: FoliatedModel, u, x: ChartPoint) -> float:
    return model.metric.norm_at(u, x)


def _tau_terms(model: FoliatedModel, x: ChartPoint) -> Tuple[float, float]:
    """(g(τ,τ), div_H τ) at x."""
    tau = model.mean_curvature
    return _g(model, tau, tau, x), horizontal_divergence(model, tau, x)


# generic foliations


def _dkappa_leafdiv(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model, basics = ctx.model, ctx.basics
    pairs = list(combinations(basics, 2))
    if len(basics) >= 2:
        pairs.append((_random_combination(basics, rng), _random_combination(basics, rng)))
    worst = scale = 0.0
    for X, Y in pairs:
        lhs = ctx.d_kappa.at((X, Y), x)
        bracket = project(model, lie_bracket(X, Y), VERTICAL)
        worst = max(worst, abs(lhs + leaf_divergence(model, bracket, x)))
        scale = max(scale, abs(lhs))
    return Sample(worst, scale)


def _rummler(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    frames = model.frames(x)
    sign = (-1.0) ** (model.leaf_dimension + 1)
    volume = ctx.chi.at(frames.vertical, x)
    worst = scale = 0.0
    for X in list(frames.horizontal) + _random_horizontal(model, x, rng, 1):
        lhs = ctx.d_chi.at(frames.vertical + (X,), x)
        worst = max(worst, abs(lhs - sign * ctx.kappa.at((X,), x) * volume))
        scale = max(scale, abs(lhs))
    return Sample(worst, scale)


def _main_113(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    vertical = model.frames(x).vertical
    worst = scale = 0.0
    for X, Y in _horizontal_pairs(model, x, rng):
        lhs = ctx.d_kappa_chi.at(vertical + (X, Y), x)
        rhs = ctx.d_kappa.at((X, Y), x)
        worst = max(worst, abs(lhs - rhs))
        scale = max(scale, abs(rhs))
    return Sample(worst, scale)


def _kappa_bracket(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    fields = list(ctx.basics) + list(model.frames(x).horizontal)
    worst = scale = 0.0
    for X in fields:
        direct = ctx.kappa.at((X,), x)
        worst = max(worst, abs(direct - mean_curvature_form_bracket(model, X, x)))
        scale = max(scale, abs(direct))
    return Sample(worst, scale)


def _t_symmetry(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    frame = list(model.frames(x).vertical)
    pairs = [(U, W) for U in frame for W in frame] + [tuple(_random_vertical(model, x, rng, 2))]
    worst = 0.0
    for U, W in pairs:
        worst = max(worst, _norm(model, tensor_T(model, U, W, x) - tensor_T(model, W, U, x), x))
    return Sample(worst)


def _delta_kappa_remark(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    g_tau, div_h = _tau_terms(ctx.model, x)
    delta = ctx.delta_kappa.at((), x)
    return Sample(abs(delta - g_tau + div_h), abs(g_tau - div_h))


def _div_split(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    g_tau, div_h = _tau_terms(model, x)
    div_m = divergence_full(model, model.mean_curvature, x)
    return Sample(abs(div_m + g_tau - div_h), abs(div_h))


# codifferentials of kappa ^ chi


def _coclosed_vertical(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    _, div_h = _tau_terms(model, x)
    value = ctx.delta_kappa_chi.at(model.frames(x).vertical, x)
    return Sample(abs(value + div_h), abs(div_h))


def _coclosed_mixed(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    frames = ctx.model.frames(x)
    vertical = frames.vertical
    worst = 0.0
    for X in frames.horizontal:
        for j in range(len(vertical)):
            args = (X,) + vertical[:j] + vertical[j + 1:]
            worst = max(worst, abs(ctx.delta_kappa_chi.at(args, x)))
    return Sample(worst)


def _coclosed_hh(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    frames = ctx.model.frames(x)
    rest = frames.vertical[: ctx.model.leaf_dimension - 2]
    worst = 0.0
    for X, Y in combinations(frames.horizontal, 2):
        worst = max(worst, abs(ctx.delta_kappa_chi.at((X, Y) + rest, x)))
    return Sample(worst)


def _tilde_delta(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    _, div_h = _tau_terms(ctx.model, x)
    value = ctx.tilde_delta_kappa.at((), x)
    return Sample(abs(value + div_h), abs(div_h))


# Ricci identities for flows


def _flow_terms(model: FoliatedModel, x: ChartPoint) -> Tuple[np.ndarray, float, float, float]:
    frames = model.frames(x)
    V = frames.vertical[0]
    ric = ricci(model.metric, V, V, x)
    a_sum = sum(_g(model, a, a, x) for a in (tensor_A(model, X, V, x) for X in frames.horizontal))
    t_sum = sum(_g(model, t, t, x) for t in (tensor_T(model, V, X, x) for X in frames.horizontal))
    return V, ric, a_sum, t_sum


def _flow_ricci(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    _, ric, a_sum, _ = _flow_terms(model, x)
    div_m = divergence_full(model, model.mean_curvature, x)
    return Sample(abs(ric - div_m - a_sum), abs(ric))


def _flow_ricci_t(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    _, ric, a_sum, t_sum = _flow_terms(model, x)
    _, div_h = _tau_terms(model, x)
    return Sample(abs(ric - div_h + t_sum - a_sum), abs(ric))


# O'Neill equations


def _oneill_i(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    U, V, W, W2 = _random_vertical(model, x, rng, 4)
    R = curvature_quad(model.metric, U, V, W, W2, x)
    rhs = (
        leaf_curvature(model, U, V, W, W2, x)
        - _g(model, tensor_T(model, U, W, x), tensor_T(model, V, W2, x), x)
        + _g(model, tensor_T(model, V, W, x), tensor_T(model, U, W2, x), x)
    )
    return Sample(abs(R - rhs), abs(R))


def _oneill_ii(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    U, V, W = _random_vertical(model, x, rng, 3)
    (X,) = _random_horizontal(model, x, rng, 1)
    R = curvature_quad(model.metric, U, V, W, X, x)
    rhs = _g(model, t_derivative(model, V, U, W, x), X, x) - _g(
        model, t_derivative(model, U, V, W, x), X, x
    )
    return Sample(abs(R - rhs), abs(R))


def _oneill_iii(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    U, V = _random_vertical(model, x, rng, 2)
    X, Y = _random_horizontal(model, x, rng, 2)
    R = curvature_quad(model.metric, X, U, Y, V, x)
    rhs = (
        _g(model, t_derivative(model, X, U, V, x), Y, x)
        - _g(model, tensor_T(model, U, X, x), tensor_T(model, V, Y, x), x)
        + _g(model, a_derivative(model, U, X, Y, x), V, x)
        + _g(model, tensor_A(model, X, U, x), tensor_A(model, Y, V, x), x)
    )
    return Sample(abs(R - rhs), abs(R))


def _oneill_iv(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    (U,) = _random_vertical(model, x, rng, 1)
    X, Y, Z = _random_horizontal(model, x, rng, 3)
    R = curvature_quad(model.metric, X, Y, Z, U, x)
    rhs = (
        _g(model, a_derivative(model, Z, X, Y, x), U, x)
        + _g(model, tensor_A(model, X, Y, x), tensor_T(model, U, Z, x), x)
        - _g(model, tensor_A(model, Y, Z, x), tensor_T(model, U, X, x), x)
        - _g(model, tensor_A(model, Z, X, x), tensor_T(model, U, Y, x), x)
    )
    return Sample(abs(R - rhs), abs(R))


def _oneill_v(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    X, Y, Z, H = _random_horizontal(model, x, rng, 4)
    A = functools.partial(tensor_A, model)
    R = curvature_quad(model.metric, X, Y, Z, H, x)
    rhs = (
        transverse_curvature(model, X, Y, Z, H, x)
        - 2.0 * _g(model, A(X, Y, x), A(Z, H, x), x)
        + _g(model, A(Y, Z, x), A(X, H, x), x)
        - _g(model, A(X, Z, x), A(Y, H, x), x)
    )
    return Sample(abs(R - rhs), abs(R))


# umbilical leaves


def _lemma_a(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    p = model.leaf_dimension
    U, V = _random_vertical(model, x, rng, 2)
    g_tau, _ = _tau_terms(model, x)
    R = curvature_quad(model.metric, U, V, U, V, x)
    gram = _g(model, U, V, x) ** 2 - _g(model, U, U, x) * _g(model, V, V, x)
    rhs = leaf_curvature(model, U, V, U, V, x) + gram * g_tau / p**2
    return Sample(abs(R - rhs), abs(R))


def _lemma_b(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    g = model.metric
    p = model.leaf_dimension
    (U,) = _random_vertical(model, x, rng, 1)
    (X,) = _random_horizontal(model, x, rng, 1)
    tau = model.mean_curvature
    R = curvature_quad(g, X, U, X, U, x)
    shape = _g(model, covariant_derivative_at(g, X, tau, x), X, x) / p - _g(model, X, tau, x) ** 2 / p**2
    A_XU = tensor_A(model, X, U, x)
    rhs = _g(model, U, U, x) * shape + _g(model, A_XU, A_XU, x)
    return Sample(abs(R - rhs), abs(R))


def _lemma_c(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    X, Y = _random_horizontal(model, x, rng, 2)
    R = curvature_quad(model.metric, X, Y, X, Y, x)
    A_XY = tensor_A(model, X, Y, x)
    rhs = transverse_curvature(model, X, Y, X, Y, x) - 3.0 * _g(model, A_XY, A_XY, x)
    return Sample(abs(R - rhs), abs(R))


def _killing(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    """
    g(D_U A_XY, V) + g(D_V A_XY, U) = −g(U,V) dκ(X,Y)/p for basic X, Y.

    The distance to the anchor's right side g(U,V)dκ(X,Y) is kept as a detail.
    """
    model, basics = ctx.model, ctx.basics
    if len(basics) < 2:
        return Sample(0.0)
    g = model.metric
    p = model.leaf_dimension
    U, V = _random_vertical(model, x, rng, 2)
    pairs = list(combinations(basics, 2))
    pairs.append((_random_combination(basics, rng), _random_combination(basics, rng)))
    worst = scale = off_anchor = 0.0
    for X, Y in pairs:
        A_XY = a_field(model, X, Y)
        lhs = _g(model, covariant_derivative_at(g, U, A_XY, x), V, x) + _g(
            model, covariant_derivative_at(g, V, A_XY, x), U, x
        )
        g_dk = _g(model, U, V, x) * ctx.d_kappa.at((X, Y), x)
        worst = max(worst, abs(lhs + g_dk / p))
        scale = max(scale, abs(lhs))
        off_anchor = max(off_anchor, abs(lhs - g_dk))
    return Sample(worst, scale, extras={"anchor_residual": off_anchor})


def _summarize_killing(ctx: EvaluationContext, samples: List[Sample]) -> Dict[str, object]:
    values = [s.extras["anchor_residual"] for s in samples if s.extras]
    return {"anchor_residual": max(values)} if values else {}


def _horizontal_part(model: FoliatedModel, w: np.ndarray, x: ChartPoint) -> np.ndarray:
    for V in model.frames(x).vertical:
        v = V.at(x)
        w = w - _g(model, w, v, x) * v
    return w


def _prop24_a(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    tau = model.mean_curvature
    directions = list(model.frames(x).vertical) + _random_vertical(model, x, rng, 1)
    worst = 0.0
    for V in directions:
        w = covariant_derivative_at(model.metric, V, tau, x)
        worst = max(worst, _norm(model, _horizontal_part(model, w, x), x))
    return Sample(worst)


def _prop24_b(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    return Sample(basic_form_defect(ctx.model, ctx.kappa, [x]))


def _prop24_c(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    arguments = list(model.frames(x).full)
    arguments += _random_vertical(model, x, rng, 1) + _random_horizontal(model, x, rng, 1)
    worst = max(_norm(model, tensor_A(model, model.mean_curvature, E, x), x) for E in arguments)
    return Sample(worst)


def _a_sum(model: FoliatedModel, U: VectorField, x: ChartPoint) -> float:
    values = [tensor_A(model, X, U, x) for X in model.frames(x).horizontal]
    return sum(_g(model, a, a, x) for a in values)


def _divh_24(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    p, q = model.leaf_dimension, model.codimension
    c = model.properties.curvature
    (U,) = _random_vertical(model, x, rng, 1)
    g_tau, div_h = _tau_terms(model, x)
    rhs = c * p * q + g_tau / p - p / _g(model, U, U, x) * _a_sum(model, U, x)
    return Sample(abs(div_h - rhs), abs(div_h))


def _const_curvature(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    c = model.properties.curvature
    (U,) = _random_vertical(model, x, rng, 1)
    total = sum(curvature_quad(model.metric, X, U, X, U, x) for X in model.frames(x).horizontal)
    expected = model.codimension * c * _g(model, U, U, x)
    return Sample(abs(total - expected), abs(expected))


def _cor26_sample(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    p, q = model.leaf_dimension, model.codimension
    c = model.properties.curvature
    g_tau, div_h = _tau_terms(model, x)
    return Sample(
        abs(g_tau + p * p * q * c),
        abs(g_tau),
        g_tau,
        {"g_tau_tau": g_tau, "div_h_tau": div_h},
    )


def _einstein(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    q = model.codimension
    c = model.properties.curvature
    frame = model.frames(x).horizontal
    (Y,) = _random_horizontal(model, x, rng, 1)
    lhs = transverse_ricci(model, Y, Y, x)
    a_terms = [tensor_A(model, Y, X, x) for X in frame]
    rhs = (q - 1) * c * _g(model, Y, Y, x) + 3.0 * sum(_g(model, a, a, x) for a in a_terms)
    matrix = np.array([[transverse_ricci(model, E, F, x) for F in frame] for E in frame])
    lam = float(matrix[0, 0])
    einstein_defect = float(np.max(np.abs(matrix - lam * np.eye(q))))
    g_tau, _ = _tau_terms(model, x)
    core = abs((lam - (q - 1) * c) * g_tau)
    return Sample(
        max(abs(lhs - rhs), core),
        abs(lhs),
        g_tau,
        {"lambda": lam, "einstein_defect": einstein_defect, "core_residual": core},
    )


def _summarize_einstein(ctx: EvaluationContext, samples: List[Sample]) -> Dict[str, object]:
    lambdas = [s.extras["lambda"] for s in samples]
    return {
        "lambda_min": min(lambdas),
        "lambda_max": max(lambdas),
        "einstein_defect": max(s.extras["einstein_defect"] for s in samples),
        "core_residual": max(s.extras["core_residual"] for s in samples),
    }


# contact structure of 3-dimensional flows


def contact_value(ctx: EvaluationContext, x: ChartPoint) -> Tuple[float, float, float]:
    """((α∧dα)(V,X_1,X_2), g(V,[X_1,X_2]), (α∧μ)(V,X_1,X_2)) with α = χ_F."""
    model = ctx.model
    frames = model.frames(x)
    (V,) = frames.vertical
    X1, X2 = frames.horizontal
    alpha = ctx.chi
    value = wedge(alpha, ctx.d_chi).at((V, X1, X2), x)
    bracket = _g(model, V, lie_bracket(X1, X2), x)
    volume = wedge(alpha, horizontal_volume_form(model)).at((V, X1, X2), x)
    return value, bracket, volume


def classify_contact(values: Sequence[float], tolerance: float) -> str:
    large = [abs(v) > tolerance for v in values]
    if all(large):
        return "contact"
    if not any(large):
        return "integrable"
    return "mixed"


def _contact(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    value, bracket, volume = contact_value(ctx, x)
    return Sample(abs(value + bracket), abs(value), None, {"value": value, "ratio": value / volume})


def _summarize_contact(ctx: EvaluationContext, samples: List[Sample]) -> Dict[str, object]:
    values = [s.extras["value"] for s in samples]
    return {
        "classification": classify_contact(values, ctx.tolerance),
        "min_abs_value": min(abs(v) for v in values),
        "max_abs_value": max(abs(v) for v in values),
        "max_abs_ratio": max(abs(s.extras["ratio"]) for s in samples),
    }


def _a_skew(ctx: EvaluationContext, x: ChartPoint, rng) -> Sample:
    model = ctx.model
    worst = 0.0
    for X, Y in _horizontal_pairs(model, x, rng):
        A_XY = tensor_A(model, X, Y, x)
        half_bracket = 0.5 * project(model, lie_bracket(X, Y), VERTICAL).at(x)
        worst = max(
            worst,
            _norm(model, A_XY + tensor_A(model, Y, X, x), x),
            _norm(model, A_XY - half_bracket, x),
        )
    return Sample(worst)


def _bundle_umbilical(**extra) -> Requirements:
    return Requirements(bundle_like=True, umbilical=True, **extra)


CATALOG: Tuple[Identity, ...] = (
    Identity(
        "DKAPPA_LEAFDIV",
        '(1.7) "dκ(X,Y) = − div_F 𝒱[X,Y]"',
        "pairs of validated basic fields and one random basic pair",
        Requirements(min_codimension=2),
        _dkappa_leafdiv,
    ),
    Identity(
        "RUMMLER",
        '(1.8) "dχ_F(V_1,…,V_p,X) = (−1)^{p+1}κ(X)χ_F(V_1,…, V_p)"',
        "vertical frame with each horizontal frame field and one random horizontal field",
        Requirements(),
        _rummler,
    ),
    Identity(
        "MAIN_113",
        '(1.13) "d(κ∧χ_F)(V_1,…,V_p,X,Y) = dκ(X,Y)"',
        "vertical frame with horizontal frame pairs and one random horizontal pair",
        Requirements(min_codimension=2),
        _main_113,
    ),
    Identity(
        "COCLOSED_V",
        '(1.16) "δ(κ∧χ_F)(V_1,…,V_p) = − div_Hτ"',
        "vertical frame",
        Requirements(bundle_like=True, kappa_basic=True, codimension=2),
        _coclosed_vertical,
    ),
    Identity(
        "COCLOSED_MIXED",
        '(1.21) "because κ is closed for the Dominguez metric"',
        "one horizontal frame field with the vertical frame minus one field",
        Requirements(bundle_like=True, kappa_basic=True, codimension=2),
        _coclosed_mixed,
    ),
    Identity(
        "COCLOSED_HH",
        '(1.26) "g(T_{V_{p-1}}X_j,V_p) = g(T_{V_p}X_j,V_{p-1})"',
        "two horizontal frame fields with the first p-2 vertical frame fields",
        Requirements(bundle_like=True, kappa_basic=True, codimension=2, min_leaf_dimension=2),
        _coclosed_hh,
    ),
    Identity(
        "CODIM1_COCLOSED",
        '(1.28) "δ(κ∧χ_F)(V_1,…,V_{n−1}) = −Xκ(X) = −div_Hτ"',
        "vertical frame",
        Requirements(bundle_like=True, kappa_basic=True, codimension=1),
        _coclosed_vertical,
    ),
    Identity(
        "TILDE_DELTA",
        '(1.33) "δ̃κ = − div_Hτ"',
        "scalar identity at each point",
        Requirements(kappa_basic=True),
        _tilde_delta,
    ),
    Identity(
        "DELTA_KAPPA_REMARK",
        'remark "δκ = κ(τ) − div_H τ"',
        "scalar identity at each point",
        Requirements(),
        _delta_kappa_remark,
    ),
    Identity(
        "DIV_SPLIT",
        '(1.35) "div_Mτ + g(τ,τ) = div_Hτ"',
        "scalar identity at each point",
        Requirements(),
        _div_split,
    ),
    Identity(
        "INTEGRAL_136",
        '(1.36) "∫_M g(τ,τ) dV = ∫_M div_Hτ dV"',
        "periodic trapezoidal grid over the varying chart axes",
        Requirements(periodic=True),
        kind=INTEGRAL,
    ),
    Identity(
        "FLOW_RICCI",
        '(1.5 proof) "Ric^M(V,V) = div_Mτ + Σ_{i=1}^{q} g(A_{X_i}V, A_{X_i}V)"',
        "unit vertical field with the horizontal frame",
        Requirements(bundle_like=True, leaf_dimension=1),
        _flow_ricci,
    ),
    Identity(
        "FLOW_RICCI_T",
        '(1.5 proof) "Ric^M(V,V) = div_Hτ − Σ g(T_VX_i,T_VX_i) + Σ g(A_{X_i}V,A_{X_i}V)"',
        "unit vertical field with the horizontal frame",
        Requirements(bundle_like=True, leaf_dimension=1),
        _flow_ricci_t,
    ),
    Identity(
        "ONEILL_I",
        '(2.1 i) "R(U,V,W,W′)=R̂(U,V,W,W′)−g(T_UW,T_VW′)+g(T_VW,T_UW′)"',
        "four random vertical combinations",
        Requirements(),
        _oneill_i,
    ),
    Identity(
        "ONEILL_II",
        '(2.1 ii) "R(U,V,W,X)=g((D_VT)_UW,X)−g((D_UT)_VW,X)"',
        "three random vertical and one random horizontal combination",
        Requirements(),
        _oneill_ii,
    ),
    Identity(
        "ONEILL_III",
        '(2.1 iii) "R(X,U,Y,V)=g((D_XT)_UV,Y)−g(T_UX,T_VY)+g((D_UA)_XY,V)+g(A_XU,A_YV)"',
        "two random vertical and two random horizontal combinations",
        Requirements(bundle_like=True),
        _oneill_iii,
    ),
    Identity(
        "ONEILL_IV",
        '(2.1 iv) "R(X,Y,Z,U)=g((D_ZA)_XY,U)+g(A_XY,T_UZ)−g(A_YZ,T_UX)−g(A_ZX,T_UY)"',
        "three random horizontal and one random vertical combination",
        Requirements(bundle_like=True),
        _oneill_iv,
    ),
    Identity(
        "ONEILL_V",
        '(2.1 v) "R(X,Y,Z,Z′)=R*(X,Y,Z,Z′) −2g(A_XY,A_ZZ′)+g(A_YZ,A_XZ′)−g(A_XZ,A_YZ′)"',
        "four random horizontal combinations (basic on bundle-like models)",
        Requirements(bundle_like=True),
        _oneill_v,
    ),
    Identity(
        "LEMMA22_A",
        '(2.2 a) "R(U,V,U,V) = R̂(U,V,U,V) +[g(U,V)^2−g(U,U)g(V,V)]g(τ/p,τ/p)"',
        "two random vertical combinations",
        Requirements(umbilical=True),
        _lemma_a,
    ),
    Identity(
        "LEMMA22_B",
        '(2.2 b) "R(X,U,X,U) = g(U,U)[g(D_X τ/p,X)−g(X,τ/p)^2]+g(A_XU,A_XU)"',
        "one random horizontal and one random vertical combination",
        _bundle_umbilical(),
        _lemma_b,
    ),
    Identity(
        "LEMMA22_C",
        '(2.2 c) "R(X,Y,X,Y) = R*(X,Y,X,Y) − 3g(A_XY,A_XY)"',
        "two random horizontal combinations",
        _bundle_umbilical(),
        _lemma_c,
    ),
    Identity(
        "KILLING_21",
        '(2.1) "g(D_U(A_XY),V)+g(D_V(A_XY),U)=g(U,V)dκ(X,Y)"',
        "two random vertical combinations against pairs of basic fields and one random basic pair",
        _bundle_umbilical(),
        _killing,
        summarize=_summarize_killing,
    ),
    Identity(
        "PROP24_A",
        '(2.4 a) "τ is parallel in the transversal distribution"',
        "vertical frame and one random vertical combination",
        _bundle_umbilical(constant_curvature=True, min_leaf_dimension=2),
        _prop24_a,
    ),
    Identity(
        "PROP24_B",
        '(2.4 b) "τ is basic, which implies that κ is basic"',
        "vertical spanning fields against the full frame",
        _bundle_umbilical(constant_curvature=True),
        _prop24_b,
    ),
    Identity(
        "PROP24_C",
        '(2.4 c) "A_τ=0"',
        "full frame and one random combination of each kind",
        _bundle_umbilical(constant_curvature=True),
        _prop24_c,
    ),
    Identity(
        "DIVH_24",
        '(2.4) "div_Hτ = cpq + (1/p)g(τ,τ) − p (1/g(U,U)) Σ g(A_{X_a}U,A_{X_a}U)"',
        "one random vertical combination with the horizontal frame",
        _bundle_umbilical(constant_curvature=True),
        _divh_24,
    ),
    Identity(
        "COR26_VERDICT",
        '(2.6) "g(τ,τ)=−pqc"',
        "scalar comparison against -pqc and -p^2qc",
        _bundle_umbilical(constant_curvature=True, a_vanishes=True),
        _cor26_sample,
        kind=COR26,
        normalized=True,
    ),
    Identity(
        "EINSTEIN_25_26",
        '(2.5)-(2.6) "Ric*(Y,Y)=Σ R*(Y,X_a,Y,X_a)=λg(Y,Y)"',
        "one random horizontal combination and the horizontal frame",
        Requirements(bundle_like=True, constant_curvature=True),
        _einstein,
        normalized=True,
        summarize=_summarize_einstein,
    ),
    Identity(
        "CONTACT_CLASS",
        '(1.3) "ℋ is always a contact structure"',
        "vertical unit field with the horizontal frame",
        Requirements(dimension=3, leaf_dimension=1),
        _contact,
        summarize=_summarize_contact,
    ),
    Identity(
        "KAPPA_BRACKET",
        '(1.5) "κ(X) = Σ g([X,V_i], V_i)"',
        "validated basic fields and the horizontal frame",
        Requirements(),
        _kappa_bracket,
    ),
    Identity(
        "A_SKEW",
        '(1.3) "A_XY ≠ −A_YX, in general"',
        "horizontal frame pairs and one random horizontal pair",
        Requirements(bundle_like=True),
        _a_skew,
    ),
    Identity(
        "T_SYMMETRY",
        '(1.1) "T_EF = 𝒱D_{𝒱E}ℋF + ℋD_{𝒱E}𝒱F"',
        "vertical frame pairs and one random vertical pair",
        Requirements(),
        _t_symmetry,
    ),
    Identity(
        "CONST_CURVATURE",
        '(2.4 proof) "Σ R(X_a,U,X_a,U)=qcg(U,U)"',
        "one random vertical combination with the horizontal frame",
        Requirements(constant_curvature=True),
        _const_curvature,
    ),
)

_INDEX: Dict[str, int] = {identity.id: k for k, identity in enumerate(CATALOG)}


def identity_ids() -> List[str]:
    return [identity.id for identity in CATALOG]


def catalog_index(identity_id: str) -> int:
    return _INDEX[get_identity(identity_id).id]


def get_identity(identity_id: str) -> Identity:
    """Catalog entry by id; unknown ids are a configuration error."""
    try:
        return CATALOG[_INDEX[identity_id]]
    except KeyError:
        raise ConfigError(f"unknown identity '{identity_id}'") from None
