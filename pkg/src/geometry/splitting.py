"""
Curvature of the leaves and of the transverse distribution, and covariant
derivatives of the O'Neill tensors.

All quartic forms use R(E,F,G,G') = −g(R(E,F)G, G') with
R(E,F) = D_E D_F − D_F D_E − D_[E,F] for the relevant connection.
"""

import logging
from typing import Callable

import numpy as np

from src.fields.smooth_fields import ChartPoint, VectorField, lie_bracket
from src.geometry.foliation import (
    HORIZONTAL,
    VERTICAL,
    FoliatedModel,
    a_field,
    project,
    t_field,
)
from src.geometry.riemannian_core import covariant_derivative

logger = logging.getLogger(__name__)

TensorField = Callable[[FoliatedModel, VectorField, VectorField], VectorField]


def _split_derivative(model: FoliatedModel, part: str, E: VectorField, F: VectorField) -> VectorField:
    return project(model, covariant_derivative(model.metric, E, F), part)


def _split_curvature(
    model: FoliatedModel, part: str, bracket_part, E: VectorField, F: VectorField, G: VectorField
) -> VectorField:
    first = _split_derivative(model, part, E, _split_derivative(model, part, F, G))
    second = _split_derivative(model, part, F, _split_derivative(model, part, E, G))
    bracket = lie_bracket(E, F)
    if bracket_part is not None:
        bracket = project(model, bracket, bracket_part)
    third = _split_derivative(model, part, bracket, G)
    return first - second - third


def leaf_curvature(
    model: FoliatedModel,
    U: VectorField,
    V: VectorField,
    W: VectorField,
    W_prime: VectorField,
    x: ChartPoint,
) -> float:
    """R̂(U,V,W,W') from the leaf connection 𝒱D on vertical fields."""
    R = _split_curvature(model, VERTICAL, None, U, V, W)
    return -model.metric.inner_at(R, W_prime, x)


def transverse_curvature(
    model: FoliatedModel,
    X: VectorField,
    Y: VectorField,
    Z: VectorField,
    H: VectorField,
    x: ChartPoint,
) -> float:
    """R*(X,Y,Z,H) from ℋD on horizontal fields, with ℋ[X,Y] in the bracket term.

    The value is tensorial only for basic arguments.
    """
    R = _split_curvature(model, HORIZONTAL, HORIZONTAL, X, Y, Z)
    return -model.metric.inner_at(R, H, x)


def transverse_ricci(
    model: FoliatedModel, Y: VectorField, Z: VectorField, x: ChartPoint
) -> float:
    """Ric*(Y,Z) = Σ_a R*(Y,X_a,Z,X_a) over the horizontal frame."""
    return sum(
        transverse_curvature(model, Y, X, Z, X, x) for X in model.frames(x).horizontal
    )


def _tensor_derivative(
    tensor: TensorField, model: FoliatedModel, E: VectorField, F: VectorField, G: VectorField
) -> VectorField:
    g = model.metric
    return (
        covariant_derivative(g, E, tensor(model, F, G))
        - tensor(model, covariant_derivative(g, E, F), G)
        - tensor(model, F, covariant_derivative(g, E, G))
    )


def t_derivative(
    model: FoliatedModel, E: VectorField, F: VectorField, G: VectorField, x: ChartPoint
) -> np.ndarray:
    """(D_E T)_F G = D_E(T_F G) − T_{D_E F} G − T_F(D_E G)."""
    return _tensor_derivative(t_field, model, E, F, G).at(x)


def a_derivative(
    model: FoliatedModel, E: VectorField, F: VectorField, G: VectorField, x: ChartPoint
) -> np.ndarray:
    """(D_E A)_F G, with the same Leibniz pattern as t_derivative."""
    return _tensor_derivative(a_field, model, E, F, G).at(x)
