import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from prescribed_zeros.builder import build_coefficient
from prescribed_zeros.sequences import PointSequence

settings.register_profile("pz", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pz")


@pytest.fixture(scope="session")
def small_bundle():
    """Well-separated three-point sequence; every check passes on it."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_coefficient(PointSequence([0.5, -0.5, 0.3j]))


@pytest.fixture(scope="session")
def exp8_bundle():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_coefficient(PointSequence.exponential(8))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
