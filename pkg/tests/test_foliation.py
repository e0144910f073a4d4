"""Tests for frames, projections, O'Neill tensors and foliation predicates."""

import math

import numpy as np
import pytest

from src.errors import ModelError
from src.fields.smooth_fields import ChartPoint, VectorField, lie_bracket
from src.geometry.exterior_calculus import exterior_derivative, mean_curvature_one_form
from src.geometry.foliation import (
    HORIZONTAL,
    VERTICAL,
    Distribution,
    a_antisymmetry_defect,
    basic_candidates,
    horizontal_divergence,
    is_basic,
    is_bundle_like,
    leaf_divergence,
    mean_curvature_form,
    mean_curvature_form_bracket,
    mean_curvature_vector,
    project,
    tensor_A,
    tensor_T,
    umbilical_defect,
)
from src.geometry.riemannian_core import ricci
from src.models.model_library import sample_points


class TestFrames:
    """Test cases for adapted orthonormal frames."""

    @pytest.mark.parametrize("name", ["hopf", "horosphere", "conformal_torus", "twisted"])
    def test_frames_are_orthonormal(self, name, request):
        """The full frame has identity Gram matrix and the right split."""
        model = request.getfixturevalue(name)
        for x in sample_points(model, 3):
            frames = model.frames(x)
            assert len(frames.vertical) == model.leaf_dimension
            assert len(frames.horizontal) == model.codimension
            assert np.allclose(frames.gram(model.metric), np.eye(model.dimension), atol=1e-10)

    def test_projection_of_twisted_x_direction(self, twisted, origin_like):
        """ℋ∂x = ∂x − y∂z for a(y) = y."""
        h = project(twisted, VectorField.coordinate(0, 3), HORIZONTAL).at(origin_like)
        assert np.allclose(h, [1.0, 0.0, -1.0])
        v = project(twisted, VectorField.coordinate(0, 3), VERTICAL).at(origin_like)
        assert np.allclose(v, [0.0, 0.0, 1.0])

    def test_empty_distribution_rejected(self):
        """A distribution needs at least one spanning field."""
        with pytest.raises(ModelError):
            Distribution([])


class TestMeanCurvature:
    """Test cases for τ, κ and the divergences."""

    def test_hopf_fibres_are_geodesics(self, hopf):
        """τ = 0 for the Hopf flow."""
        for x in sample_points(hopf, 3):
            assert np.max(np.abs(mean_curvature_vector(hopf, x))) <= 1e-10

    def test_horosphere_mean_curvature(self, horosphere):
        """τ = p y ∂y, so g(τ,τ) = p² and div_H τ = 0."""
        for x in sample_points(horosphere, 3):
            y = x.coords[-1]
            assert np.allclose(mean_curvature_vector(horosphere, x), [0.0, 0.0, 2.0 * y])
            tau = horosphere.mean_curvature
            assert horosphere.metric.inner_at(tau, tau, x) == pytest.approx(4.0)
            assert abs(horizontal_divergence(horosphere, tau, x)) <= 1e-10

    def test_conformal_torus_mean_curvature(self, conformal_torus):
        """τ = −2a cos x ∂x and div_H τ = 2a sin x."""
        x = ChartPoint((1.0, 2.0, 0.8, 3.0))
        assert np.allclose(mean_curvature_vector(conformal_torus, x), [0, 0, -2 * math.cos(0.8), 0])
        div_h = horizontal_divergence(conformal_torus, conformal_torus.mean_curvature, x)
        assert div_h == pytest.approx(2 * math.sin(0.8))

    def test_kappa_two_routes_agree(self, twisted, twisted_points):
        """g(X,τ) = Σ g([X,V_i],V_i) for horizontal X, even off bundle-like."""
        for x in twisted_points:
            for X in twisted.frames(x).horizontal:
                assert mean_curvature_form(twisted, X, x) == pytest.approx(
                    mean_curvature_form_bracket(twisted, X, x), abs=1e-9
                )

    @pytest.mark.parametrize("name", ["twisted", "twisted_base"])
    def test_dkappa_spot_value(self, name, request, origin_like):
        """dκ(ℋ∂x, ∂y) = −1 and div_F 𝒱[ℋ∂x, ∂y] = 1 at (0, 1, 0)."""
        model = request.getfixturevalue(name)
        X = project(model, VectorField.coordinate(0, 3), HORIZONTAL)
        Y = VectorField.coordinate(1, 3)
        d_kappa = exterior_derivative(mean_curvature_one_form(model))
        assert d_kappa.at((X, Y), origin_like) == pytest.approx(-1.0, abs=1e-9)
        bracket = project(model, lie_bracket(X, Y), VERTICAL)
        assert leaf_divergence(model, bracket, origin_like) == pytest.approx(1.0, abs=1e-9)

    def test_respan_keeps_tau(self, conformal_torus):
        """τ does not depend on the spanning fields chosen for the leaves."""
        other = conformal_torus.respan([[1.0, 1.0], [0.0, 2.0]])
        x = ChartPoint((0.5, 0.5, 2.0, 1.0))
        assert np.allclose(
            mean_curvature_vector(other, x), mean_curvature_vector(conformal_torus, x), atol=1e-10
        )


class TestTensors:
    """Test cases for T and A."""

    def test_t_is_symmetric_on_vertical(self, conformal_torus):
        """T_U V = T_V U for vertical U, V."""
        x = ChartPoint((0.3, 0.1, 1.2, 4.0))
        U, V = conformal_torus.frames(x).vertical
        assert np.allclose(tensor_T(conformal_torus, U, V, x), tensor_T(conformal_torus, V, U, x))

    def test_hopf_a_is_nonzero(self, hopf):
        """The Hopf fibration has A ≠ 0 and A_X Y = −A_Y X."""
        x = ChartPoint((0.6, 1.0, 1.0))
        X1, X2 = hopf.frames(x).horizontal
        assert hopf.metric.norm_at(tensor_A(hopf, X1, X2, x), x) == pytest.approx(1.0, abs=1e-9)
        assert a_antisymmetry_defect(hopf, X1, X2, x) <= 1e-10

    def test_hopf_flow_ricci_spot_value(self, hopf):
        """Ric(V, V) = 2 = Σ_X |A_X V|² for the unit Hopf field."""
        x = ChartPoint((0.6, 1.0, 1.0))
        frames = hopf.frames(x)
        (V,) = frames.vertical
        a_sum = sum(hopf.metric.norm_at(tensor_A(hopf, X, V, x), x) ** 2 for X in frames.horizontal)
        assert a_sum == pytest.approx(2.0, abs=1e-9)
        assert ricci(hopf.metric, V, V, x) == pytest.approx(2.0, abs=1e-9)

    def test_tensors_survive_constant_rescaling(self, twisted_base, origin_like):
        """T and A of 4g equal those of g on the same fields."""
        scaled = twisted_base.with_metric(twisted_base.metric.scaled(2.0))
        E = [VectorField.coordinate(k, 3) for k in range(3)]
        for first in E:
            for second in E:
                assert np.allclose(
                    tensor_A(scaled, first, second, origin_like),
                    tensor_A(twisted_base, first, second, origin_like),
                    atol=1e-10,
                )
                assert np.allclose(
                    tensor_T(scaled, first, second, origin_like),
                    tensor_T(twisted_base, first, second, origin_like),
                    atol=1e-10,
                )

    def test_a_not_antisymmetric_off_bundle_like(self, twisted, twisted_points):
        """A_X Y + A_Y X is visible when the metric is not bundle-like."""
        worst = 0.0
        for x in twisted_points:
            X1 = twisted.frames(x).horizontal[0]
            worst = max(worst, a_antisymmetry_defect(twisted, X1, X1, x))
        assert worst > 1e-3


class TestPredicates:
    """Test cases for bundle-like, umbilical and basic checks."""

    def test_bundle_like(self, twisted, twisted_base, twisted_points):
        """Warping the base breaks the bundle-like condition."""
        assert is_bundle_like(twisted_base, twisted_points).holds is True
        assert is_bundle_like(twisted, twisted_points).holds is False

    def test_flows_are_umbilical(self, twisted, twisted_points):
        """Every flow is totally umbilical."""
        for x in twisted_points:
            assert umbilical_defect(twisted, x) <= 1e-10

    def test_basic_candidates(self, twisted_base, twisted_points):
        """ℋ∂x and ∂y are basic; ℋ∂z vanishes and is skipped."""
        found = basic_candidates(twisted_base, twisted_points)
        assert len(found) == 2
        assert all(is_basic(twisted_base, X, twisted_points) for X in found)

    def test_integrability(self, horosphere):
        """Coordinate leaves are integrable."""
        points = sample_points(horosphere, 3)
        assert horosphere.distribution.integrability_defect(horosphere, points) <= 1e-12
