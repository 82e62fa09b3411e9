import pytest

from nonlocal_waves import Kernel, SolverConfig, continuation, make_grid

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def gauss02():
    return Kernel.gaussian(0.2)


@pytest.fixture(scope="session")
def wave03(gauss02):
    """Bistable wave for theta = 0.3, Gaussian sigma = 0.2, a = 40, h = 0.05."""
    return continuation(SolverConfig(), 0.3, gauss02, make_grid(40.0, 0.05))


@pytest.fixture(scope="session")
def small_wave():
    """Cheap wave on a short domain for structural tests."""
    return continuation(SolverConfig(), 0.3, Kernel.gaussian(0.2), make_grid(10.0, 0.1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
