"""Shared model fixtures; session scoped so field caches are reused across tests."""

import pytest

from src.fields.smooth_fields import ChartPoint
from src.models.model_library import build_model, sample_points


@pytest.fixture(scope="session")
def hopf():
    return build_model("hopf_s3")


@pytest.fixture(scope="session")
def horosphere():
    return build_model("horosphere", {"p": 2})


@pytest.fixture(scope="session")
def horosphere_flow():
    return build_model("horosphere", {"p": 1})


@pytest.fixture(scope="session")
def conformal_torus():
    return build_model("conformal_torus")


@pytest.fixture(scope="session")
def flat_torus():
    return build_model("flat_torus_flow")


@pytest.fixture(scope="session")
def twisted():
    return build_model("twisted_flow")


@pytest.fixture(scope="session")
def twisted_base():
    """dx²+dy²+e^{2z}(dz+y dx)²: bundle-like with basic κ = y dx."""
    return build_model("twisted_flow", {"psi_xz": 0.0, "warp": 0.0})


@pytest.fixture(scope="session")
def twisted_points(twisted):
    return sample_points(twisted, 3, seed=7)


@pytest.fixture
def origin_like():
    """(0, 1, 0) in the twisted_flow chart."""
    return ChartPoint((0.0, 1.0, 0.0))
