import numpy as np
import pytest

from photonliquid import estimate_g2, simulate_stream


@pytest.fixture(scope="session")
def erlang3_stream():
    """About 1e6 photons from an N = 3, gamma = 1 cascade."""
    return simulate_stream([1.0, 1.0, 1.0], 3e6, seed=2)


@pytest.fixture(scope="session")
def erlang3_curve(erlang3_stream):
    return estimate_g2(erlang3_stream, 0.02, 10.0)


@pytest.fixture(scope="session")
def poisson_stream():
    return simulate_stream([1.0], 1e6, seed=1)


@pytest.fixture
def tau10():
    return np.linspace(0.0, 10.0, 1000)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[key])
