import pytest
from hypothesis import HealthCheck, settings

from rabiahm.models import ModelParams

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def params():
    """The standard weak-coupling point at the verification cutoff."""
    return ModelParams(omega=1.0, g=0.1, n_max=200, guard=5)


@pytest.fixture(scope="session")
def small():
    return ModelParams(omega=1.0, g=0.1, n_max=40, guard=5)
