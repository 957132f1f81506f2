import os

import pytest
from hypothesis import HealthCheck, settings

from bgig import BgigParams

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("BGIG_HYPOTHESIS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# physical parameters of the daily S&P 500 calibration
CAL = (558.753, 0.0443139, 2.53084, 439.902, 0.0242973, 2.26669)


@pytest.fixture
def P_ref():
    return BgigParams.of(1, 2, 1, 3, 4, 5)


@pytest.fixture
def P_cal():
    return BgigParams.of(*CAL)
