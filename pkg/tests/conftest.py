import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "triflow",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("triflow")


@pytest.fixture
def rng():
    return np.random.default_rng(20260817)
