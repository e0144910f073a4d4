"""
Alternating forms evaluated on vector fields.

Conventions: the wedge product is the plain shuffle sum and the exterior
derivative is

    dω(E_0..E_k) = Σ_i (−1)^i E_i(ω(..Ê_i..))
                   + Σ_{i<j} (−1)^{i+j} ω([E_i,E_j], ..Ê_i..Ê_j..)

with no normalizing factors. Codifferentials are frame contractions of a
covariant derivative; no Hodge star is used.
"""

import logging
from itertools import combinations
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

from config.settings import NUMERICS
from src.errors import FormDegreeError, PreconditionError
from src.fields.smooth_fields import (
    ChartPoint,
    Jet2,
    ScalarField,
    VectorField,
    directional_derivative,
    jet_determinant,
    lie_bracket,
)
from src.geometry.foliation import (
    HORIZONTAL,
    VERTICAL,
    FoliatedModel,
    basic_form_defect,
    project,
)
from src.geometry.riemannian_core import covariant_derivative

logger = logging.getLogger(__name__)

FormRule = Callable[[Tuple[VectorField, ...]], ScalarField]


class DifferentialForm:
    """A k-form: maps k vector fields to a scalar field."""

    def __init__(self, degree: int, rule: FormRule, dimension: int, label: str = "w") -> None:
        if degree < 0 or degree > dimension:
            raise FormDegreeError(f"degree {degree} on a {dimension}-dimensional chart")
        self.degree = degree
        self.dimension = dimension
        self.label = label
        self._rule = rule

    def __call__(self, *args: VectorField) -> ScalarField:
        if len(args) != self.degree:
            raise FormDegreeError(f"{self.label} takes {self.degree} arguments, got {len(args)}")
        return self._rule(tuple(args))

    def at(self, args: Sequence[VectorField], x: ChartPoint) -> float:
        return self(*args).jet(x).value

    @classmethod
    def from_scalar(cls, f: ScalarField) -> "DifferentialForm":
        return cls(0, lambda args: f, f.dimension, f.label)

    @classmethod
    def from_components(
        cls, components: Mapping[Tuple[int, ...], ScalarField], degree: int, dimension: int
    ) -> "DifferentialForm":
        """Σ_I ω_I dx^I over increasing index tuples I."""
        for index in components:
            if len(index) != degree or list(index) != sorted(set(index)):
                raise FormDegreeError(f"component index {index} is not an increasing {degree}-tuple")

        def rule(args: Tuple[VectorField, ...]) -> ScalarField:
            def value(x: ChartPoint) -> Jet2:
                arg_jets = [E.jets(x) for E in args]
                total = Jet2.constant(0.0, dimension)
                for index, coefficient in components.items():
                    if not degree:
                        total = total + coefficient.jet(x)
                        continue
                    minor = [[arg_jets[j][i] for j in range(degree)] for i in index]
                    total = total + coefficient.jet(x) * jet_determinant(minor)
                return total

            return ScalarField(value, dimension, "w(...)")

        return cls(degree, rule, dimension, "w")

    def __repr__(self) -> str:
        return f"DifferentialForm({self.label}, degree={self.degree})"


def coordinate_differential(index: int, dimension: int) -> DifferentialForm:
    """dx^index."""
    form = DifferentialForm.from_components(
        {(index,): ScalarField.constant(1.0, dimension)}, 1, dimension
    )
    form.label = f"dx{index}"
    return form


def _signed_sum(terms: List[Tuple[float, ScalarField]], dimension: int, label: str) -> ScalarField:
    def rule(x: ChartPoint) -> Jet2:
        total = Jet2.constant(0.0, dimension)
        for sign, f in terms:
            total = total + f.jet(x) * sign
        return total

    return ScalarField(rule, dimension, label)


def _shuffle_sign(first: Sequence[int], total: int) -> float:
    inversions = sum(i - position for position, i in enumerate(first))
    return -1.0 if inversions % 2 else 1.0


def wedge(alpha: DifferentialForm, beta: DifferentialForm) -> DifferentialForm:
    """(α∧β)(E_1..E_{k+l}) = Σ over (k,l)-shuffles of sign · α(..) β(..)."""
    k, l = alpha.degree, beta.degree
    n = alpha.dimension
    if k + l > n:
        raise FormDegreeError(f"wedge of degrees {k} and {l} exceeds dimension {n}")

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        terms = []
        for chosen in combinations(range(k + l), k):
            rest = [i for i in range(k + l) if i not in chosen]
            a = alpha(*(args[i] for i in chosen))
            b = beta(*(args[i] for i in rest))
            terms.append((_shuffle_sign(chosen, k + l), a * b))
        return _signed_sum(terms, n, f"({alpha.label}^{beta.label})(...)")

    return DifferentialForm(k + l, rule, n, f"{alpha.label}^{beta.label}")


def exterior_derivative(omega: DifferentialForm) -> DifferentialForm:
    k = omega.degree
    n = omega.dimension
    if k + 1 > n:
        raise FormDegreeError(f"d of a {k}-form on a {n}-dimensional chart")

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        terms = []
        for i, Ei in enumerate(args):
            rest = args[:i] + args[i + 1:]
            terms.append(((-1.0) ** i, directional_derivative(omega(*rest), Ei)))
        for i, j in combinations(range(k + 1), 2):
            rest = tuple(E for m, E in enumerate(args) if m not in (i, j))
            terms.append(((-1.0) ** (i + j), omega(lie_bracket(args[i], args[j]), *rest)))
        return _signed_sum(terms, n, f"d{omega.label}(...)")

    return DifferentialForm(k + 1, rule, n, f"d{omega.label}")


def interior_product(W: VectorField, omega: DifferentialForm) -> DifferentialForm:
    """(i(W)ω)(E_2..E_k) = ω(W, E_2..E_k)."""
    if omega.degree == 0:
        raise FormDegreeError("interior product of a 0-form")
    return DifferentialForm(
        omega.degree - 1, lambda args: omega(W, *args), omega.dimension, f"i({W.label}){omega.label}"
    )


def lie_derivative(W: VectorField, omega: DifferentialForm) -> DifferentialForm:
    """θ(W) = i(W)d + d i(W)."""
    d_omega = interior_product(W, exterior_derivative(omega))
    if omega.degree == 0:
        return d_omega
    inner = exterior_derivative(interior_product(W, omega))

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        return d_omega(*args) + inner(*args)

    return DifferentialForm(omega.degree, rule, omega.dimension, f"L({W.label}){omega.label}")


def mean_curvature_one_form(model: FoliatedModel) -> DifferentialForm:
    """κ(E) = g(E, τ)."""
    return DifferentialForm(
        1, lambda args: model.metric.inner(args[0], model.mean_curvature), model.dimension, "kappa"
    )


def _frame_determinant_form(model: FoliatedModel, part: str, label: str) -> DifferentialForm:
    g = model.metric
    degree = model.leaf_dimension if part == VERTICAL else model.codimension

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        def value(x: ChartPoint) -> Jet2:
            frames = model.frames(x)
            frame = frames.vertical if part == VERTICAL else frames.horizontal
            frame_stacks = [F.stack(x) for F in frame]
            matrix = []
            for E in args:
                es = E.stack(x)
                matrix.append([g.inner_jet(es, fs, x) for fs in frame_stacks])
            return jet_determinant(matrix)

        return ScalarField(value, model.dimension, f"{label}(...)")

    return DifferentialForm(degree, rule, model.dimension, label)


def characteristic_form(model: FoliatedModel) -> DifferentialForm:
    """χ_F(E_1..E_p) = det(g(E_i, V_j)) with the model-oriented vertical frame."""
    return _frame_determinant_form(model, VERTICAL, "chi")


def horizontal_volume_form(model: FoliatedModel) -> DifferentialForm:
    """μ(E_1..E_q) = det(g(E_i, X_j)), the transverse volume form."""
    return _frame_determinant_form(model, HORIZONTAL, "mu")


def adapted_connection_field(model: FoliatedModel, E: VectorField, F: VectorField) -> VectorField:
    """D̃_E F = 𝒱D_E 𝒱F + ℋD_E ℋF."""
    g = model.metric
    vertical = project(model, covariant_derivative(g, E, project(model, F, VERTICAL)), VERTICAL)
    horizontal = project(
        model, covariant_derivative(g, E, project(model, F, HORIZONTAL)), HORIZONTAL
    )
    return vertical + horizontal


def adapted_connection(model: FoliatedModel, E: VectorField, F: VectorField, x: ChartPoint):
    return adapted_connection_field(model, E, F).at(x)


def _contraction(
    omega: DifferentialForm,
    frame: Sequence[VectorField],
    derivative: Callable[[VectorField, VectorField], VectorField],
    args: Tuple[VectorField, ...],
    x: ChartPoint,
) -> Jet2:
    # −Σ_e (∇_e ω)(e, E_2..E_k) for the connection given by `derivative`
    total = Jet2.constant(0.0, omega.dimension)
    for e in frame:
        total = total - directional_derivative(omega(e, *args), e).jet(x)
        total = total + omega(derivative(e, e), *args).jet(x)
        for i in range(len(args)):
            replaced = args[:i] + (derivative(e, args[i]),) + args[i + 1:]
            total = total + omega(e, *replaced).jet(x)
    return total


def codifferential(model: FoliatedModel, omega: DifferentialForm) -> DifferentialForm:
    """δω(E_2..E_k) = −Σ_e (D_e ω)(e, E_2..E_k) over the full orthonormal frame."""
    if omega.degree < 1:
        raise FormDegreeError("codifferential of a 0-form")
    g = model.metric

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        def value(x: ChartPoint) -> Jet2:
            frame = model.frames(x).full
            return _contraction(omega, frame, lambda A, B: covariant_derivative(g, A, B), args, x)

        return ScalarField(value, model.dimension, f"delta {omega.label}(...)")

    return DifferentialForm(omega.degree - 1, rule, model.dimension, f"delta {omega.label}")


def basic_codifferential(
    model: FoliatedModel,
    omega: DifferentialForm,
    points: Optional[Sequence[ChartPoint]] = None,
    tolerance: float = NUMERICS["tolerance"],
) -> DifferentialForm:
    """δ̃ω: the leafwise sum followed by the transverse sum, both with D̃.

    The basic precondition is checked on `points` when given, and at every
    point the result is evaluated at otherwise.
    """
    if omega.degree < 1:
        raise FormDegreeError("basic codifferential of a 0-form")
    if points is not None:
        _require_basic(model, omega, points, tolerance)

    def connection(A: VectorField, B: VectorField) -> VectorField:
        return adapted_connection_field(model, A, B)

    def rule(args: Tuple[VectorField, ...]) -> ScalarField:
        def value(x: ChartPoint) -> Jet2:
            if points is None:
                _require_basic(model, omega, [x], tolerance)
            frames = model.frames(x)
            return _contraction(omega, frames.vertical, connection, args, x) + _contraction(
                omega, frames.horizontal, connection, args, x
            )

        return ScalarField(value, model.dimension, f"delta~ {omega.label}(...)")

    return DifferentialForm(omega.degree - 1, rule, model.dimension, f"delta~ {omega.label}")


def _require_basic(
    model: FoliatedModel, omega: DifferentialForm, points: Sequence[ChartPoint], tolerance: float
) -> None:
    defect = basic_form_defect(model, omega, points)
    if defect > tolerance:
        raise PreconditionError(f"{omega.label} is not basic on {model.name} (defect {defect:.3e})")
