import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from uncommonbounds.qcore import PureState, RegisterLayout

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def bell(a="A", b="B") -> PureState:
    return PureState(RegisterLayout([(a, 2), (b, 2)]), np.array([1, 0, 0, 1]) / np.sqrt(2))


def bell_ab_zero_r() -> PureState:
    """Bell pair on A, B with a trivial |0> on R."""
    amps = np.zeros(8)
    amps[0b000] = amps[0b110] = 1 / np.sqrt(2)
    return PureState(RegisterLayout.of(A=2, B=2, R=2), amps)


def epr_ar_zero_b() -> PureState:
    """EPR pair between A and R, B in |0>."""
    amps = np.zeros(8)
    amps[0b000] = amps[0b101] = 1 / np.sqrt(2)
    return PureState(RegisterLayout.of(A=2, B=2, R=2), amps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
