"""
Metric, Levi-Civita connection, curvature and Ricci on a chart.

Curvature follows R(E,F)G = D_E D_F G − D_F D_E G − D_[E,F] G and the
quartic form R(E,F,G,G') = −g(R(E,F)G, G'); with this sign a round unit
sphere has R(E,F,E,F) = 1 on orthonormal pairs.
"""

import functools
import logging
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence, Union

import numpy as np

from config.settings import NUMERICS
from src.errors import DegenerateMetricError, FrameError, JetOrderError, PreconditionError
from src.fields.smooth_fields import (
    FIELD_CACHE_SIZE,
    ChartDomain,
    ChartPoint,
    Jet2,
    JetStack,
    ScalarField,
    VectorField,
)

if TYPE_CHECKING:
    from src.geometry.foliation import FoliatedModel

logger = logging.getLogger(__name__)

VectorLike = Union[VectorField, np.ndarray, Sequence[float]]


class MetricJet(NamedTuple):
    """Metric components and their first and second partials at a point.

    `first[a, i, j]` is ∂_a g_ij and `second[a, b, i, j]` is ∂_a ∂_b g_ij.
    """

    value: np.ndarray
    first: np.ndarray
    second: np.ndarray


class MetricField:
    """Symmetric matrix of ScalarField entries g_ij; only i <= j is read."""

    def __init__(
        self,
        components: Sequence[Sequence[ScalarField]],
        domain: Optional[ChartDomain] = None,
        label: str = "g",
    ) -> None:
        n = len(components)
        self.dimension = n
        self.domain = domain
        self.label = label
        self._entries = [
            [components[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)
        ]
        self._jets = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(self._compute_jets)
        self._connection = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(
            self._compute_connection
        )
        self._riemann = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(self._compute_riemann)

    def entry(self, i: int, j: int) -> ScalarField:
        return self._entries[i][j]

    def scaled(self, factor: float) -> "MetricField":
        """The metric factor² · g."""
        square = float(factor) ** 2
        n = self.dimension
        return MetricField(
            [[self._entries[i][j] * square for j in range(n)] for i in range(n)],
            self.domain,
            f"{factor}^2*{self.label}",
        )

    def _compute_jets(self, x: ChartPoint) -> MetricJet:
        n = self.dimension
        value = np.empty((n, n))
        first = np.empty((n, n, n))
        second = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                jet = self._entries[i][j].jet(x)
                if jet.order < 2:
                    raise JetOrderError(f"metric entry g_{i}{j} must carry second derivatives")
                value[i, j] = value[j, i] = jet.value
                first[:, i, j] = first[:, j, i] = jet.gradient
                second[:, :, i, j] = second[:, :, j, i] = jet.hessian
        smallest = float(np.linalg.eigvalsh(value)[0])
        if smallest <= NUMERICS["positive_definite_floor"]:
            raise DegenerateMetricError(
                f"metric at {x.coords} has smallest eigenvalue {smallest:.3e}"
            )
        return MetricJet(value, first, second)

    def jets(self, x: ChartPoint) -> MetricJet:
        return self._jets(x)

    def matrix(self, x: ChartPoint) -> np.ndarray:
        return self._jets(x).value

    def inverse(self, x: ChartPoint) -> np.ndarray:
        return np.linalg.inv(self.matrix(x))

    def inner_jet(self, xs: JetStack, ys: JetStack, x: ChartPoint) -> Jet2:
        """Jet of g(X, Y) from the stacked component jets of X and Y."""
        G, dG, ddG = self._jets(x)
        xv, yv = xs.values, ys.values
        value = float(xv @ G @ yv)
        order = min(xs.order, ys.order)
        if order == 0:
            return Jet2(value)
        xg, yg = xs.gradients, ys.gradients
        gradient = (
            np.einsum("aij,i,j->a", dG, xv, yv)
            + np.einsum("ij,ia,j->a", G, xg, yv)
            + np.einsum("ij,i,ja->a", G, xv, yg)
        )
        if order == 1:
            return Jet2(value, gradient)
        mixed = np.einsum("aij,ib,j->ab", dG, xg, yv) + np.einsum("aij,i,jb->ab", dG, xv, yg)
        cross = np.einsum("ij,ia,jb->ab", G, xg, yg)
        hessian = (
            np.einsum("abij,i,j->ab", ddG, xv, yv)
            + mixed
            + mixed.T
            + np.einsum("ij,iab,j->ab", G, xs.hessians, yv)
            + np.einsum("ij,i,jab->ab", G, xv, ys.hessians)
            + cross
            + cross.T
        )
        return Jet2(value, gradient, hessian)

    def inner(self, X: VectorField, Y: VectorField) -> ScalarField:
        """The field g(X, Y)."""
        return ScalarField(
            lambda x: self.inner_jet(X.stack(x), Y.stack(x), x),
            self.dimension,
            f"g({X.label},{Y.label})",
            self.domain,
        )

    def inner_at(self, u: VectorLike, v: VectorLike, x: ChartPoint) -> float:
        return float(_values(u, x) @ self.matrix(x) @ _values(v, x))

    def norm_at(self, u: VectorLike, x: ChartPoint) -> float:
        return float(np.sqrt(max(self.inner_at(u, u, x), 0.0)))

    def _compute_connection(self, x: ChartPoint):
        G, dG, ddG = self._jets(x)
        ginv = np.linalg.inv(G)
        lowered = (
            np.einsum("ijl->lij", dG) + np.einsum("jil->lij", dG) - dG
        )
        gamma = 0.5 * np.einsum("kl,lij->kij", ginv, lowered)
        dginv = -np.einsum("km,amn,nl->akl", ginv, dG, ginv)
        dlowered = (
            np.einsum("aijl->alij", ddG) + np.einsum("ajil->alij", ddG) - ddG
        )
        dgamma = 0.5 * (
            np.einsum("akl,lij->akij", dginv, lowered)
            + np.einsum("kl,alij->akij", ginv, dlowered)
        )
        return gamma, dgamma

    def connection(self, x: ChartPoint):
        """(Γ[k, i, j], ∂Γ[a, k, i, j]) at a point."""
        return self._connection(x)

    def _compute_riemann(self, x: ChartPoint) -> np.ndarray:
        gamma, dgamma = self._connection(x)
        return (
            np.einsum("iljk->lkij", dgamma)
            - np.einsum("jlik->lkij", dgamma)
            + np.einsum("lim,mjk->lkij", gamma, gamma)
            - np.einsum("ljm,mik->lkij", gamma, gamma)
        )


def _values(v: VectorLike, x: ChartPoint) -> np.ndarray:
    if isinstance(v, VectorField):
        return v.at(x)
    return np.asarray(v, dtype=float)


def christoffel(g: MetricField, x: ChartPoint) -> np.ndarray:
    """Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij), indexed [k, i, j]."""
    return g.connection(x)[0]


def riemann_tensor(g: MetricField, x: ChartPoint) -> np.ndarray:
    """Components R[l, k, i, j] with R(∂_i, ∂_j)∂_k = R[l, k, i, j] ∂_l."""
    return g._riemann(x)


def covariant_derivative(g: MetricField, X: VectorField, Y: VectorField) -> VectorField:
    """The field D_X Y, with components X(Y^k) + Γ^k_ij X^i Y^j."""

    def rule(x: ChartPoint):
        xs, ys = X.stack(x), Y.stack(x)
        if ys.order < 1:
            raise JetOrderError(f"D_{X.label}{Y.label} needs a differentiable {Y.label}")
        gamma, dgamma = g.connection(x)
        xv, yv = xs.values, ys.values
        values = ys.gradients @ xv + np.einsum("kij,i,j->k", gamma, xv, yv)
        if min(1, xs.order, ys.order - 1) < 1:
            return JetStack(values).unstack()
        gradients = (
            np.einsum("kia,i->ka", ys.hessians, xv)
            + ys.gradients @ xs.gradients
            + np.einsum("akij,i,j->ka", dgamma, xv, yv)
            + np.einsum("kij,ia,j->ka", gamma, xs.gradients, yv)
            + np.einsum("kij,i,ja->ka", gamma, xv, ys.gradients)
        )
        return JetStack(values, gradients).unstack()

    return VectorField.from_rule(rule, g.dimension, f"D_{X.label}{Y.label}")


def covariant_derivative_at(
    g: MetricField, direction: VectorLike, Y: VectorField, x: ChartPoint
) -> np.ndarray:
    """Value of D_e Y at a point for a direction given only by its value."""
    e = _values(direction, x)
    ys = Y.stack(x)
    if ys.order < 1:
        raise JetOrderError(f"D_e{Y.label} needs a differentiable {Y.label}")
    gamma = christoffel(g, x)
    return ys.gradients @ e + np.einsum("kij,i,j->k", gamma, e, ys.values)


def curvature_quad(
    g: MetricField,
    E: VectorLike,
    F: VectorLike,
    G: VectorLike,
    G_prime: VectorLike,
    x: ChartPoint,
) -> float:
    """R(E, F, G, G') = −g(R(E, F)G, G')."""
    lowered = np.einsum("ml,lkij->mkij", g.matrix(x), riemann_tensor(g, x))
    return -float(
        np.einsum(
            "mkij,i,j,k,m->",
            lowered,
            _values(E, x),
            _values(F, x),
            _values(G, x),
            _values(G_prime, x),
        )
    )


def orthonormal_basis(
    g: MetricField, x: ChartPoint, candidates: Optional[np.ndarray] = None
) -> np.ndarray:
    """Rows form a g-orthonormal basis, by Gram-Schmidt on the candidates.

    Candidates default to the coordinate basis in index order.
    """
    G = g.matrix(x)
    vectors = np.eye(g.dimension) if candidates is None else np.asarray(candidates, dtype=float)
    basis = []
    for w in vectors:
        r = w.copy()
        for e in basis:
            r = r - (e @ G @ r) * e
        norm = float(np.sqrt(max(r @ G @ r, 0.0)))
        if norm < NUMERICS["gram_schmidt_skip"]:
            raise FrameError(f"dependent candidate at {x.coords} (residual {norm:.3e})")
        basis.append(r / norm)
    return np.array(basis)


def ricci(
    g: MetricField,
    E: VectorLike,
    F: VectorLike,
    x: ChartPoint,
    frame: Optional[np.ndarray] = None,
) -> float:
    """Ric(E, F) = Σ_a R(E, e_a, F, e_a) over an orthonormal frame."""
    basis = orthonormal_basis(g, x) if frame is None else frame
    return sum(curvature_quad(g, E, e, F, e, x) for e in basis)


def constant_curvature_residual(
    model: "FoliatedModel", x: ChartPoint, trials: int, seed: Optional[int] = None
) -> float:
    """Largest |R(E,F,E,F) − c(g(E,E)g(F,F) − g(E,F)²)| over random orthonormal pairs."""
    c = model.properties.curvature
    if c is None:
        raise PreconditionError(f"model {model.name} declares no constant curvature")
    g = model.metric
    rng = np.random.default_rng(seed)
    n = g.dimension
    worst = 0.0
    for _ in range(trials):
        e, f = orthonormal_basis(g, x, rng.standard_normal((2, n)))
        expected = c * (
            g.inner_at(e, e, x) * g.inner_at(f, f, x) - g.inner_at(e, f, x) ** 2
        )
        worst = max(worst, abs(curvature_quad(g, e, f, e, f, x) - expected))
    return worst


def divergence_full(model: "FoliatedModel", W: VectorField, x: ChartPoint) -> float:
    """div_M W = Σ g(D_e W, e) over a full orthonormal frame."""
    g = model.metric
    return sum(
        g.inner_at(covariant_derivative_at(g, e, W, x), e, x)
        for e in orthonormal_basis(g, x)
    )
