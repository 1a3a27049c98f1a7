import numpy as np
import pytest

from qpc_entropy import lattice as lat

FIT_TIMES = tuple(np.geomspace(10.0, 50.0, 9))


@pytest.fixture(scope="session")
def perfect_points():
    """Single switch at L = 200, J_c = J, sampled over the fit window."""
    return lat.single_switch(200, FIT_TIMES, max_order=8)


ACCEPTANCE_LINES = {}


def record(criterion, passed, detail):
    line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
