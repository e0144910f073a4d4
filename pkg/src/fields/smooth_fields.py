"""
Second-order forward-mode jets and smooth fields on a single chart.

Every geometric quantity in the engine is evaluated by pushing `Jet2`
values (value, gradient, Hessian at one point) through ordinary arithmetic.
Jets track how many derivatives they still carry: differentiating drops one
order, and arithmetic keeps the smaller order of its operands. Metric
components enter at order 2, so connection coefficients come out at order 1
and curvature at order 0.
"""

import functools
import logging
import math
import numbers
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import NUMERICS
from src.errors import JetDivisionError, JetOrderError, OutOfChartError

logger = logging.getLogger(__name__)

FIELD_CACHE_SIZE = 1024


class Jet2:
    """Value, gradient and Hessian of a scalar at a point, truncated at order 2."""

    __slots__ = ("value", "gradient", "hessian")
    __array_ufunc__ = None

    def __init__(
        self,
        value: float,
        gradient: Optional[np.ndarray] = None,
        hessian: Optional[np.ndarray] = None,
    ) -> None:
        self.value = float(value)
        self.gradient = gradient
        self.hessian = hessian if gradient is not None else None

    @property
    def order(self) -> int:
        """Number of derivatives the jet still carries (0, 1 or 2)."""
        if self.gradient is None:
            return 0
        if self.hessian is None:
            return 1
        return 2

    @classmethod
    def constant(cls, value: float, dimension: int) -> "Jet2":
        """Jet of a constant function."""
        return cls(value, np.zeros(dimension), np.zeros((dimension, dimension)))

    @classmethod
    def variable(cls, value: float, index: int, dimension: int) -> "Jet2":
        """Jet of the coordinate function x^index."""
        gradient = np.zeros(dimension)
        gradient[index] = 1.0
        return cls(value, gradient, np.zeros((dimension, dimension)))

    def truncated(self, order: int) -> "Jet2":
        """Copy of the jet with derivatives above `order` dropped."""
        if order >= self.order:
            return self
        if order <= 0:
            return Jet2(self.value)
        return Jet2(self.value, self.gradient)

    def partial(self, index: int) -> "Jet2":
        """Jet of the partial derivative along coordinate `index`."""
        if self.gradient is None:
            raise JetOrderError(f"cannot differentiate an order-0 jet along x{index}")
        hessian_row = None if self.hessian is None else self.hessian[index]
        return Jet2(self.gradient[index], hessian_row)

    # chain rule for a scalar function with derivatives (f1, f2) at the value
    def _compose(self, f0: float, f1: float, f2: float) -> "Jet2":
        if self.gradient is None:
            return Jet2(f0)
        gradient = f1 * self.gradient
        if self.hessian is None:
            return Jet2(f0, gradient)
        hessian = f1 * self.hessian + f2 * np.outer(self.gradient, self.gradient)
        return Jet2(f0, gradient, hessian)

    def __add__(self, other):
        if isinstance(other, Jet2):
            order = min(self.order, other.order)
            gradient = self.gradient + other.gradient if order >= 1 else None
            hessian = self.hessian + other.hessian if order >= 2 else None
            return Jet2(self.value + other.value, gradient, hessian)
        if isinstance(other, numbers.Real):
            return Jet2(self.value + float(other), self.gradient, self.hessian)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "Jet2":
        gradient = None if self.gradient is None else -self.gradient
        hessian = None if self.hessian is None else -self.hessian
        return Jet2(-self.value, gradient, hessian)

    def __pos__(self) -> "Jet2":
        return self

    def __sub__(self, other):
        if isinstance(other, (Jet2, numbers.Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, numbers.Real):
            return (-self) + float(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet2):
            order = min(self.order, other.order)
            value = self.value * other.value
            if order == 0:
                return Jet2(value)
            gradient = self.value * other.gradient + other.value * self.gradient
            if order == 1:
                return Jet2(value, gradient)
            cross = np.outer(self.gradient, other.gradient)
            hessian = (
                self.value * other.hessian
                + other.value * self.hessian
                + cross
                + cross.T
            )
            return Jet2(value, gradient, hessian)
        if isinstance(other, numbers.Real):
            c = float(other)
            gradient = None if self.gradient is None else c * self.gradient
            hessian = None if self.hessian is None else c * self.hessian
            return Jet2(c * self.value, gradient, hessian)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        v = self.value
        if abs(v) < NUMERICS["division_floor"]:
            raise JetDivisionError(f"division by a jet with value {v:.3e}")
        return self._compose(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if isinstance(other, numbers.Real):
            if abs(other) < NUMERICS["division_floor"]:
                raise JetDivisionError(f"division by {float(other):.3e}")
            return self * (1.0 / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Real):
            return self.reciprocal() * float(other)
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Real):
            return NotImplemented
        r = float(exponent)
        v = self.value
        if r == 0.0:
            return self * 0.0 + 1.0
        is_integer = r.is_integer()
        if (is_integer and r < 0 and abs(v) < NUMERICS["division_floor"]) or (
            not is_integer and v < NUMERICS["division_floor"]
        ):
            raise JetDivisionError(f"power {r} of a jet with value {v:.3e}")
        f1 = r * v ** (r - 1.0)
        f2 = 0.0 if r == 1.0 else r * (r - 1.0) * v ** (r - 2.0)
        return self._compose(v**r, f1, f2)

    def exp(self) -> "Jet2":
        e = math.exp(self.value)
        return self._compose(e, e, e)

    def sin(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._compose(s, c, -s)

    def cos(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._compose(c, -s, -c)

    def sqrt(self) -> "Jet2":
        v = self.value
        if v < NUMERICS["division_floor"]:
            raise JetDivisionError(f"sqrt of a jet with value {v:.3e}")
        root = math.sqrt(v)
        return self._compose(root, 0.5 / root, -0.25 / (root * v))

    def log(self) -> "Jet2":
        v = self.value
        if v < NUMERICS["division_floor"]:
            raise JetDivisionError(f"log of a jet with value {v:.3e}")
        return self._compose(math.log(v), 1.0 / v, -1.0 / v**2)

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, order={self.order})"


@dataclass(frozen=True)
class JetStack:
    """A list of jets packed into arrays for vectorized contractions.

    `gradients[k, a]` is the a-th partial of entry k and `hessians[k, a, b]`
    its second partials. The stack carries the smallest order of its entries.
    """

    values: np.ndarray
    gradients: Optional[np.ndarray] = None
    hessians: Optional[np.ndarray] = None

    @property
    def order(self) -> int:
        if self.gradients is None:
            return 0
        if self.hessians is None:
            return 1
        return 2

    @classmethod
    def of(cls, jets: Sequence[Jet2]) -> "JetStack":
        order = min(j.order for j in jets)
        values = np.array([j.value for j in jets])
        gradients = np.stack([j.gradient for j in jets]) if order >= 1 else None
        hessians = np.stack([j.hessian for j in jets]) if order >= 2 else None
        return cls(values, gradients, hessians)

    def unstack(self) -> List[Jet2]:
        order = self.order
        return [
            Jet2(
                self.values[k],
                self.gradients[k] if order >= 1 else None,
                self.hessians[k] if order >= 2 else None,
            )
            for k in range(self.values.shape[0])
        ]


@dataclass(frozen=True)
class ChartPoint:
    """A point of the chart, given by its coordinates."""

    coords: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords)


@dataclass(frozen=True)
class ChartDomain:
    """Open coordinate box of a chart."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def shrunk(self, margin: float = NUMERICS["chart_margin"]) -> Tuple[np.ndarray, np.ndarray]:
        """Bounds of the box shrunk by `margin` on every side."""
        return np.array(self.lower) + margin, np.array(self.upper) - margin

    def contains(self, x: ChartPoint, margin: float = NUMERICS["chart_margin"]) -> bool:
        if x.dimension != self.dimension:
            return False
        lo, hi = self.shrunk(margin)
        coords = x.array()
        return bool(np.all(coords >= lo) and np.all(coords <= hi))

    def check(self, x: ChartPoint) -> None:
        if not self.contains(x):
            raise OutOfChartError(
                f"point {x.coords} is outside the chart box {self.lower}..{self.upper} "
                f"shrunk by {NUMERICS['chart_margin']}"
            )

    def center(self) -> ChartPoint:
        return ChartPoint(tuple(0.5 * (lo + hi) for lo, hi in zip(self.lower, self.upper)))


class ScalarField:
    """A smooth function on the chart, evaluated as a jet at a point.

    Evaluation is memoized per point, so a field object shared by several
    expressions is only computed once at each point.
    """

    def __init__(
        self,
        rule: Callable[[ChartPoint], Jet2],
        dimension: int,
        label: str = "f",
        domain: Optional[ChartDomain] = None,
    ) -> None:
        self.dimension = dimension
        self.label = label
        self.domain = domain
        self._rule = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(rule)

    def jet(self, x: ChartPoint) -> Jet2:
        return self._rule(x)

    @classmethod
    def constant(cls, value: float, dimension: int) -> "ScalarField":
        jet = Jet2.constant(value, dimension)
        return cls(lambda x: jet, dimension, repr(value))

    @classmethod
    def coordinate(
        cls, index: int, dimension: int, domain: Optional[ChartDomain] = None
    ) -> "ScalarField":
        return cls(
            lambda x: Jet2.variable(x.coords[index], index, dimension),
            dimension,
            f"x{index}",
            domain,
        )

    def map(self, fn: Callable[[Jet2], Jet2], label: str) -> "ScalarField":
        return ScalarField(lambda x: fn(self.jet(x)), self.dimension, label, self.domain)

    def _binary(self, other, op: Callable, symbol: str, swap: bool = False):
        if isinstance(other, ScalarField):
            label = f"({self.label}{symbol}{other.label})"
            return ScalarField(
                lambda x: op(self.jet(x), other.jet(x)),
                self.dimension,
                label,
                self.domain or other.domain,
            )
        if isinstance(other, numbers.Real):
            c = float(other)
            if swap:
                return ScalarField(
                    lambda x: op(c, self.jet(x)), self.dimension,
                    f"({c}{symbol}{self.label})", self.domain,
                )
            return ScalarField(
                lambda x: op(self.jet(x), c), self.dimension,
                f"({self.label}{symbol}{c})", self.domain,
            )
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b, "+")

    def __radd__(self, other):
        return self._binary(other, lambda a, b: a + b, "+", swap=True)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-", swap=True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*")

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*", swap=True)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b, "/")

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: a / b, "/", swap=True)

    def __neg__(self) -> "ScalarField":
        return self.map(lambda j: -j, f"-{self.label}")

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Real):
            return NotImplemented
        return self.map(lambda j: j**exponent, f"{self.label}**{exponent}")

    def __repr__(self) -> str:
        return f"ScalarField({self.label})"


FieldLike = Union[ScalarField, Jet2, float]


def _elementary(name: str, real_fn: Callable[[float], float]):
    def apply(arg: FieldLike) -> FieldLike:
        if isinstance(arg, ScalarField):
            return arg.map(lambda j: getattr(j, name)(), f"{name}({arg.label})")
        if isinstance(arg, Jet2):
            return getattr(arg, name)()
        return real_fn(float(arg))

    apply.__name__ = name
    apply.__doc__ = f"{name} of a field, a jet, or a number."
    return apply


def _real_reciprocal(v: float) -> float:
    if abs(v) < NUMERICS["division_floor"]:
        raise JetDivisionError(f"division by {v:.3e}")
    return 1.0 / v


exp = _elementary("exp", math.exp)
sin = _elementary("sin", math.sin)
cos = _elementary("cos", math.cos)
sqrt = _elementary("sqrt", math.sqrt)
log = _elementary("log", math.log)
reciprocal = _elementary("reciprocal", _real_reciprocal)


class VectorField:
    """n ScalarField components in the coordinate basis."""

    def __init__(self, components: Sequence[ScalarField], label: str = "X") -> None:
        self.components: Tuple[ScalarField, ...] = tuple(components)
        self.dimension = len(self.components)
        self.label = label

    @classmethod
    def from_rule(
        cls,
        rule: Callable[[ChartPoint], Sequence[Jet2]],
        dimension: int,
        label: str = "X",
    ) -> "VectorField":
        """Field whose components are produced together by one rule."""
        cached = functools.lru_cache(maxsize=FIELD_CACHE_SIZE)(rule)
        components = [
            ScalarField(lambda x, k=k: cached(x)[k], dimension, f"{label}^{k}")
            for k in range(dimension)
        ]
        return cls(components, label)

    @classmethod
    def coordinate(cls, index: int, dimension: int) -> "VectorField":
        """The coordinate field ∂_index."""
        return cls.constant([1.0 if k == index else 0.0 for k in range(dimension)], f"d{index}")

    @classmethod
    def constant(cls, values: Sequence[float], label: str = "c") -> "VectorField":
        n = len(values)
        return cls([ScalarField.constant(float(v), n) for v in values], label)

    @classmethod
    def zero(cls, dimension: int) -> "VectorField":
        return cls.constant([0.0] * dimension, "0")

    def jets(self, x: ChartPoint) -> List[Jet2]:
        return [c.jet(x) for c in self.components]

    def stack(self, x: ChartPoint) -> JetStack:
        return JetStack.of(self.jets(x))

    def at(self, x: ChartPoint) -> np.ndarray:
        """Component values at a point."""
        return np.array([c.jet(x).value for c in self.components])

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        return VectorField(
            [a + b for a, b in zip(self.components, other.components)],
            f"({self.label}+{other.label})",
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        return VectorField(
            [a - b for a, b in zip(self.components, other.components)],
            f"({self.label}-{other.label})",
        )

    def __neg__(self) -> "VectorField":
        return VectorField([-c for c in self.components], f"-{self.label}")

    def __mul__(self, scalar) -> "VectorField":
        if not isinstance(scalar, (ScalarField, numbers.Real)):
            return NotImplemented
        label = scalar.label if isinstance(scalar, ScalarField) else repr(scalar)
        return VectorField([c * scalar for c in self.components], f"{label}*{self.label}")

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"VectorField({self.label})"


def linear_combination(coefficients: Sequence[float], fields: Sequence[VectorField]) -> VectorField:
    """Σ c_i F_i with constant coefficients."""
    n = fields[0].dimension

    def rule(x: ChartPoint) -> List[Jet2]:
        total = None
        for c, field in zip(coefficients, fields):
            scaled = [j * float(c) for j in field.jets(x)]
            total = scaled if total is None else [t + s for t, s in zip(total, scaled)]
        return total

    return VectorField.from_rule(rule, n, "comb")


def jet_determinant(matrix: Sequence[Sequence[Jet2]]) -> Jet2:
    """Determinant of a small square matrix of jets by cofactor expansion."""
    size = len(matrix)
    if size == 0:
        return Jet2(1.0)
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for col in range(size):
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        term = matrix[0][col] * jet_determinant(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    return total


def eval_jet(f: ScalarField, x: ChartPoint) -> Jet2:
    """Jet of `f` at `x`, after checking that `x` lies in the chart."""
    if x.dimension != f.dimension:
        raise OutOfChartError(f"point of dimension {x.dimension} for a field on R^{f.dimension}")
    if f.domain is not None:
        f.domain.check(x)
    return f.jet(x)


def directional_derivative(f: ScalarField, X: VectorField) -> ScalarField:
    """The field X(f) = Σ_k X^k ∂_k f."""

    def rule(x: ChartPoint) -> Jet2:
        fj = f.jet(x)
        if fj.order < 1:
            raise JetOrderError(f"{f.label} carries no derivatives to differentiate along {X.label}")
        xs = X.stack(x)
        value = float(xs.values @ fj.gradient)
        if min(xs.order, fj.order - 1) < 1:
            return Jet2(value)
        gradient = xs.gradients.T @ fj.gradient + fj.hessian @ xs.values
        return Jet2(value, gradient)

    return ScalarField(rule, f.dimension, f"{X.label}({f.label})", f.domain)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y] with components X(Y^k) − Y(X^k)."""

    def rule(x: ChartPoint) -> List[Jet2]:
        xs, ys = X.stack(x), Y.stack(x)
        order = min(xs.order, ys.order) - 1
        if order < 0:
            raise JetOrderError(f"bracket [{X.label},{Y.label}] needs differentiable fields")
        values = ys.gradients @ xs.values - xs.gradients @ ys.values
        if order == 0:
            return JetStack(values).unstack()
        gradients = (
            np.einsum("kia,i->ka", ys.hessians, xs.values)
            + ys.gradients @ xs.gradients
            - np.einsum("kia,i->ka", xs.hessians, ys.values)
            - xs.gradients @ ys.gradients
        )
        return JetStack(values, gradients).unstack()

    return VectorField.from_rule(rule, X.dimension, f"[{X.label},{Y.label}]")
