import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False, width=64)


def octonions(elements=finite):
    return arrays(np.float64, 8, elements=elements)


def nonzero_octonions():
    return octonions().filter(lambda a: np.linalg.norm(a) > 1e-3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

# full 8-D grids per example: keep the example count small
grid_settings = settings(max_examples=12, deadline=None)
