"""Tests for the model registry, parameter handling and sampling."""

from unittest.mock import patch

import numpy as np
import pytest

from src.errors import ModelError, PreconditionError
from src.geometry.foliation import ModelProperties
from src.models.model_library import (
    build_model,
    list_models,
    sample_points,
    validate_properties,
)


class TestRegistry:
    """Test cases for building registered models."""

    def test_lists_five_models(self):
        """The registry holds the five models in name order."""
        names = [spec.name for spec in list_models()]
        assert names == sorted(names)
        assert {"flat_torus_flow", "hopf_s3", "horosphere", "conformal_torus", "twisted_flow"} <= set(names)

    def test_unknown_model(self):
        """Unknown names raise ModelError."""
        with pytest.raises(ModelError):
            build_model("nosuch")

    def test_unknown_parameter(self):
        """Parameters the model does not take raise ModelError."""
        with pytest.raises(ModelError):
            build_model("hopf_s3", {"radius": 2.0})

    def test_non_integer_leaf_dimension(self):
        """horosphere p must be an integer >= 1."""
        with pytest.raises(ModelError):
            build_model("horosphere", {"p": 1.5})
        with pytest.raises(ModelError):
            build_model("horosphere", {"p": 0})

    def test_non_numeric_parameter(self):
        """String parameters raise ModelError."""
        with pytest.raises(ModelError):
            build_model("conformal_torus", {"amplitude": "big"})

    def test_dimensions(self, horosphere, hopf, conformal_torus):
        """n, p and q of the built models."""
        assert (horosphere.dimension, horosphere.leaf_dimension, horosphere.codimension) == (3, 2, 1)
        assert (hopf.dimension, hopf.leaf_dimension, hopf.codimension) == (3, 1, 2)
        assert (conformal_torus.dimension, conformal_torus.leaf_dimension) == (4, 2)

    def test_flat_amplitude_declares_curvature(self):
        """conformal_torus with amplitude 0 is flat with τ = 0."""
        model = build_model("conformal_torus", {"amplitude": 0.0})
        assert model.properties.curvature == 0.0
        assert model.properties.tau_vanishes

    def test_validation_runs_on_build(self):
        """build_model checks the property table unless told not to."""
        with patch("src.models.model_library.validate_properties") as mock_validate:
            build_model("hopf_s3")
            mock_validate.assert_called_once()
        with patch("src.models.model_library.validate_properties") as mock_validate:
            build_model("hopf_s3", validate=False)
            mock_validate.assert_not_called()


class TestValidation:
    """Test cases for the property table check."""

    def test_false_claim_rejected(self, hopf):
        """Claiming τ ≠ 0 for the Hopf flow fails validation."""
        wrong = hopf._replace(
            properties=ModelProperties(
                curvature=1.0, bundle_like=True, umbilical=True, kappa_basic=True,
                a_vanishes=False, tau_vanishes=False,
            )
        )
        with pytest.raises(ModelError, match="tau_vanishes"):
            validate_properties(wrong)

    def test_twisted_defects(self, twisted):
        """The default twisted flow is not bundle-like and κ is not basic."""
        defects = validate_properties(twisted)
        assert defects["bundle_like"] > 1e-3
        assert defects["kappa_basic"] > 1e-3
        assert defects["umbilical"] <= 1e-8


class TestSampling:
    """Test cases for seeded point sampling."""

    def test_points_inside_shrunk_box(self, hopf):
        """Samples stay inside the chart box shrunk by the margin."""
        for x in sample_points(hopf, 50, seed=3):
            assert hopf.domain.contains(x)

    def test_deterministic(self, twisted):
        """Same seed, same points."""
        first = [x.coords for x in sample_points(twisted, 5, seed=9)]
        second = [x.coords for x in sample_points(twisted, 5, seed=9)]
        assert first == second
        assert not np.allclose(first, [x.coords for x in sample_points(twisted, 5, seed=10)])

    def test_count_must_be_positive(self, hopf):
        """Zero points raise PreconditionError."""
        with pytest.raises(PreconditionError):
            sample_points(hopf, 0)
