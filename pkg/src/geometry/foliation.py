"""
Foliated models: vertical/horizontal splitting, adapted orthonormal frames,
the O'Neill tensors T and A, mean curvature, leafwise and transverse
divergences, and the structural predicates (basic, bundle-like, umbilical).
"""

import functools
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.settings import NUMERICS, SAMPLING
from src.errors import FrameError, ModelError
from src.fields.smooth_fields import (
    FIELD_CACHE_SIZE,
    ChartDomain,
    ChartPoint,
    Jet2,
    JetStack,
    VectorField,
    directional_derivative,
    lie_bracket,
    linear_combination,
    reciprocal,
    sqrt,
)
from src.geometry.riemannian_core import MetricField, covariant_derivative, covariant_derivative_at

logger = logging.getLogger(__name__)

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class ModelProperties:
    """Claimed structure of a model; every claim is checked when the model is built."""

    curvature: Optional[float] = None
    bundle_like: bool = False
    umbilical: bool = False
    kappa_basic: bool = False
    a_vanishes: bool = False
    tau_vanishes: bool = False

    def as_table(self) -> Dict[str, object]:
        return {
            "constant_curvature": self.curvature,
            "bundle_like": self.bundle_like,
            "umbilical": self.umbilical,
            "kappa_basic": self.kappa_basic,
            "a_vanishes": self.a_vanishes,
            "tau_vanishes": self.tau_vanishes,
        }


@dataclass(frozen=True)
class PredicateResult:
    """Outcome of a sampled structural predicate."""

    holds: Optional[bool]
    defect: float
    status: str = "checked"

    def __bool__(self) -> bool:
        return bool(self.holds)


class Distribution:
    """The vertical distribution, given by p spanning fields in declaration order."""

    def __init__(self, spanning: Sequence[VectorField]) -> None:
        if not spanning:
            raise ModelError("a distribution needs at least one spanning field")
        self.spanning: Tuple[VectorField, ...] = tuple(spanning)

    @property
    def rank(self) -> int:
        return len(self.spanning)

    def integrability_defect(self, model: "FoliatedModel", points: Sequence[ChartPoint]) -> float:
        """Largest ‖ℋ[W_i, W_j]‖ over spanning pairs (zero for a foliation)."""
        worst = 0.0
        for x in points:
            for i, Wi in enumerate(self.spanning):
                for Wj in self.spanning[i + 1:]:
                    h = project(model, lie_bracket(Wi, Wj), HORIZONTAL).at(x)
                    worst = max(worst, model.metric.norm_at(h, x))
        return worst


@dataclass(frozen=True)
class FramePair:
    """Orthonormal vertical and horizontal frames valid near an anchor point."""

    anchor: ChartPoint
    vertical: Tuple[VectorField, ...]
    horizontal: Tuple[VectorField, ...]

    @property
    def full(self) -> Tuple[VectorField, ...]:
        return self.vertical + self.horizontal

    def gram(self, metric: MetricField) -> np.ndarray:
        values = [f.at(self.anchor) for f in self.full]
        G = metric.matrix(self.anchor)
        return np.array([[u @ G @ v for v in values] for u in values])


class FoliatedModel:
    """A chart with a metric and a foliation given by its vertical distribution."""

    def __init__(
        self,
        name: str,
        metric: MetricField,
        distribution: Distribution,
        domain: ChartDomain,
        orientation: int = 1,
        properties: ModelProperties = ModelProperties(),
        params: Optional[Mapping[str, object]] = None,
        periodic: bool = False,
        quadrature_axes: Tuple[int, ...] = (),
    ) -> None:
        n = metric.dimension
        p = distribution.rank
        if domain.dimension != n:
            raise ModelError(f"{name}: chart box has dimension {domain.dimension}, metric {n}")
        if not 1 <= p < n:
            raise ModelError(f"{name}: leaf dimension {p} must satisfy 1 <= p < n = {n}")
        if orientation not in (1, -1):
            raise ModelError(f"{name}: orientation must be +1 or -1")
        self.name = name
        self.metric = metric
        self.distribution = distribution
        self.domain = domain
        self.orientation = orientation
        self.properties = properties
        self.params: Dict[str, object] = dict(params or {})
        self.periodic = periodic
        self.quadrature_axes = quadrature_axes
        self._frames = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(self._build_frames)

    @property
    def dimension(self) -> int:
        return self.metric.dimension

    @property
    def leaf_dimension(self) -> int:
        return self.distribution.rank

    @property
    def codimension(self) -> int:
        return self.dimension - self.leaf_dimension

    def frames(self, x: ChartPoint) -> FramePair:
        self.domain.check(x)
        return self._frames(x)

    def _build_frames(self, x: ChartPoint) -> FramePair:
        g = self.metric
        vertical = _orthonormalize(g, self.distribution.spanning, x, skip=False)
        if self.orientation < 0:
            vertical[0] = -vertical[0]
        candidates = [
            _horizontal_field(g, VectorField.coordinate(k, self.dimension), vertical)
            for k in range(self.dimension)
        ]
        horizontal = _orthonormalize(g, candidates, x, skip=True)
        if len(horizontal) != self.codimension:
            raise FrameError(
                f"{self.name}: found {len(horizontal)} horizontal directions at {x.coords}, "
                f"expected {self.codimension}"
            )
        return FramePair(x, tuple(vertical), tuple(horizontal))

    @functools.cached_property
    def mean_curvature(self) -> VectorField:
        """τ = Σ_i ℋD_{V_i}V_i as a field (unnormalized)."""
        g = self.metric

        def rule(x: ChartPoint) -> List[Jet2]:
            frames = self.frames(x)
            total = None
            for V in frames.vertical:
                jets = covariant_derivative(g, V, V).jets(x)
                h = _horizontal_jets(g, jets, frames.vertical, x)
                total = h if total is None else [a + b for a, b in zip(total, h)]
            return total

        return VectorField.from_rule(rule, self.dimension, "tau")

    def respan(self, matrix: Sequence[Sequence[float]]) -> "FoliatedModel":
        """Same foliation, spanned by W'_i = Σ_j M_ij W_j."""
        spanning = [
            linear_combination(row, self.distribution.spanning) for row in np.asarray(matrix)
        ]
        return self._replace(distribution=Distribution(spanning))

    def with_metric(self, metric: MetricField) -> "FoliatedModel":
        return self._replace(metric=metric)

    def _replace(self, **changes) -> "FoliatedModel":
        kwargs = dict(
            name=self.name,
            metric=self.metric,
            distribution=self.distribution,
            domain=self.domain,
            orientation=self.orientation,
            properties=self.properties,
            params=self.params,
            periodic=self.periodic,
            quadrature_axes=self.quadrature_axes,
        )
        kwargs.update(changes)
        return FoliatedModel(**kwargs)

    def __repr__(self) -> str:
        return f"FoliatedModel({self.name}, n={self.dimension}, p={self.leaf_dimension})"


def _vertical_jets(
    g: MetricField, jets: Sequence[Jet2], vertical: Sequence[VectorField], x: ChartPoint
) -> List[Jet2]:
    stack = JetStack.of(jets)
    total = None
    for V in vertical:
        v_jets = V.jets(x)
        c = g.inner_jet(stack, JetStack.of(v_jets), x)
        term = [c * j for j in v_jets]
        total = term if total is None else [a + b for a, b in zip(total, term)]
    return total


def _horizontal_jets(
    g: MetricField, jets: Sequence[Jet2], vertical: Sequence[VectorField], x: ChartPoint
) -> List[Jet2]:
    return [e - v for e, v in zip(jets, _vertical_jets(g, jets, vertical, x))]


def _horizontal_field(g: MetricField, E: VectorField, vertical: Sequence[VectorField]) -> VectorField:
    return VectorField.from_rule(
        lambda x: _horizontal_jets(g, E.jets(x), vertical, x), g.dimension, f"H{E.label}"
    )


def _orthonormalize(
    g: MetricField, candidates: Sequence[VectorField], x: ChartPoint, skip: bool
) -> List[VectorField]:
    basis: List[VectorField] = []
    for w in candidates:
        r = w
        for e in basis:
            r = r - e * g.inner(r, e)
        norm_sq = g.inner(r, r)
        norm = math.sqrt(max(norm_sq.jet(x).value, 0.0))
        if norm < NUMERICS["gram_schmidt_skip"]:
            if skip:
                logger.debug("skipping candidate %s at %s (residual %.3e)", w.label, x.coords, norm)
                continue
            raise FrameError(f"spanning field {w.label} is dependent at {x.coords}")
        basis.append(r * reciprocal(sqrt(norm_sq)))
    return basis


def project(model: FoliatedModel, E: VectorField, part: str) -> VectorField:
    """𝒱E or ℋE, using the frames at each evaluation point."""
    if part not in (VERTICAL, HORIZONTAL):
        raise ValueError(f"part must be '{VERTICAL}' or '{HORIZONTAL}', got {part!r}")
    g = model.metric

    def rule(x: ChartPoint) -> List[Jet2]:
        vertical = model.frames(x).vertical
        if part == VERTICAL:
            return _vertical_jets(g, E.jets(x), vertical, x)
        return _horizontal_jets(g, E.jets(x), vertical, x)

    prefix = "V" if part == VERTICAL else "H"
    return VectorField.from_rule(rule, model.dimension, f"{prefix}{E.label}")


def orthonormal_frames(model: FoliatedModel, x: ChartPoint) -> FramePair:
    return model.frames(x)


def t_field(model: FoliatedModel, E: VectorField, F: VectorField) -> VectorField:
    """T_E F = 𝒱D_{𝒱E}ℋF + ℋD_{𝒱E}𝒱F."""
    g = model.metric
    VE = project(model, E, VERTICAL)
    first = project(model, covariant_derivative(g, VE, project(model, F, HORIZONTAL)), VERTICAL)
    second = project(model, covariant_derivative(g, VE, project(model, F, VERTICAL)), HORIZONTAL)
    return first + second


def a_field(model: FoliatedModel, E: VectorField, F: VectorField) -> VectorField:
    """A_E F = 𝒱D_{ℋE}ℋF + ℋD_{ℋE}𝒱F."""
    g = model.metric
    HE = project(model, E, HORIZONTAL)
    first = project(model, covariant_derivative(g, HE, project(model, F, HORIZONTAL)), VERTICAL)
    second = project(model, covariant_derivative(g, HE, project(model, F, VERTICAL)), HORIZONTAL)
    return first + second


def tensor_T(model: FoliatedModel, E: VectorField, F: VectorField, x: ChartPoint) -> np.ndarray:
    return t_field(model, E, F).at(x)


def tensor_A(model: FoliatedModel, E: VectorField, F: VectorField, x: ChartPoint) -> np.ndarray:
    return a_field(model, E, F).at(x)


def mean_curvature_vector(model: FoliatedModel, x: ChartPoint) -> np.ndarray:
    return model.mean_curvature.at(x)


def mean_curvature_form(model: FoliatedModel, E: VectorField, x: ChartPoint) -> float:
    """κ(E) = g(E, τ)."""
    return model.metric.inner_at(E, model.mean_curvature, x)


def mean_curvature_form_bracket(model: FoliatedModel, X: VectorField, x: ChartPoint) -> float:
    """κ(X) = Σ_i g([X, V_i], V_i), for horizontal X."""
    g = model.metric
    return sum(
        g.inner_at(lie_bracket(X, V), V, x) for V in model.frames(x).vertical
    )


def leaf_divergence(model: FoliatedModel, W: VectorField, x: ChartPoint) -> float:
    """div_F W = Σ_i g(D_{V_i}W, V_i)."""
    g = model.metric
    return sum(
        g.inner_at(covariant_derivative_at(g, V, W, x), V, x) for V in model.frames(x).vertical
    )


def horizontal_divergence(model: FoliatedModel, W: VectorField, x: ChartPoint) -> float:
    """div_H W = Σ_a g(D_{X_a}W, X_a)."""
    g = model.metric
    return sum(
        g.inner_at(covariant_derivative_at(g, X, W, x), X, x) for X in model.frames(x).horizontal
    )


def is_basic(
    model: FoliatedModel,
    X: VectorField,
    points: Sequence[ChartPoint],
    tolerance: float = NUMERICS["tolerance"],
) -> PredicateResult:
    """X is basic iff it is horizontal and [W, X] is vertical for every spanning W."""
    g = model.metric
    horizontal = project(model, X, HORIZONTAL)
    brackets = [project(model, lie_bracket(W, X), HORIZONTAL) for W in model.distribution.spanning]
    worst = 0.0
    for x in points:
        off = g.norm_at(horizontal.at(x) - X.at(x), x)
        worst = max(worst, off + max(g.norm_at(b.at(x), x) for b in brackets))
    return PredicateResult(worst <= tolerance, worst)


def basic_candidates(
    model: FoliatedModel,
    points: Sequence[ChartPoint],
    tolerance: float = NUMERICS["tolerance"],
) -> List[VectorField]:
    """Projected coordinate fields ℋ∂_k that are nonzero and basic on the points."""
    found = []
    for k in range(model.dimension):
        candidate = project(model, VectorField.coordinate(k, model.dimension), HORIZONTAL)
        if any(
            model.metric.norm_at(candidate.at(x), x) < NUMERICS["gram_schmidt_skip"] for x in points
        ):
            continue
        if is_basic(model, candidate, points, tolerance):
            found.append(candidate)
    logger.debug("%s: %d basic candidates", model.name, len(found))
    return found


def is_bundle_like(
    model: FoliatedModel,
    points: Sequence[ChartPoint],
    trials: int = SAMPLING["trials"],
    seed: int = SAMPLING["seed"],
    tolerance: float = NUMERICS["tolerance"],
) -> PredicateResult:
    """Largest |W g(X, X)| over vertical W and sampled basic X."""
    basics = basic_candidates(model, points, tolerance)
    if not basics:
        logger.warning("%s: no basic field constructible, bundle-like check inconclusive", model.name)
        return PredicateResult(None, float("nan"), "inconclusive")
    rng = np.random.default_rng(seed)
    samples = list(basics) + [
        linear_combination(rng.standard_normal(len(basics)), basics) for _ in range(trials)
    ]
    g = model.metric
    worst = 0.0
    for X in samples:
        length = g.inner(X, X)
        for W in model.distribution.spanning:
            change = directional_derivative(length, W)
            for x in points:
                worst = max(worst, abs(change.jet(x).value))
    return PredicateResult(worst <= tolerance, worst)


def umbilical_defect(
    model: FoliatedModel, x: ChartPoint, trials: int = SAMPLING["trials"], seed: int = SAMPLING["seed"]
) -> float:
    """Largest ‖T_U V − (1/p) g(U, V) τ‖ over random vertical U, V."""
    g = model.metric
    p = model.leaf_dimension
    vertical = model.frames(x).vertical
    rng = np.random.default_rng(seed)
    tau = model.mean_curvature.at(x)
    worst = 0.0
    for _ in range(trials):
        U = linear_combination(rng.standard_normal(p), vertical)
        V = linear_combination(rng.standard_normal(p), vertical)
        residual = tensor_T(model, U, V, x) - g.inner_at(U, V, x) / p * tau
        worst = max(worst, g.norm_at(residual, x))
    return worst


def a_antisymmetry_defect(
    model: FoliatedModel, X: VectorField, Y: VectorField, x: ChartPoint
) -> float:
    """‖A_X Y + A_Y X‖; zero for horizontal X, Y when the metric is bundle-like."""
    return model.metric.norm_at(tensor_A(model, X, Y, x) + tensor_A(model, Y, X, x), x)


def basic_form_defect(model: FoliatedModel, omega, points: Sequence[ChartPoint]) -> float:
    """Largest |i(W)ω| and |θ(W)ω| over spanning W and frame arguments."""
    from src.geometry.exterior_calculus import interior_product, lie_derivative

    worst = 0.0
    for x in points:
        frame = model.frames(x).full
        for W in model.distribution.spanning:
            for form in (interior_product(W, omega), lie_derivative(W, omega)):
                for args in _index_tuples(frame, form.degree):
                    worst = max(worst, abs(form.at(args, x)))
    return worst


def _index_tuples(frame: Sequence[VectorField], degree: int):
    return [tuple(frame[i] for i in idx) for idx in combinations(range(len(frame)), degree)]
