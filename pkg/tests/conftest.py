import numpy as np
import pytest

from metricdistortion.bounds import LowerBoundParams, build_lower_bound_election
from metricdistortion.election import make_election

A3, B3 = 0.473356, 0.423961

ACCEPTANCE_RESULTS = []


@pytest.fixture
def lb3():
    """Three-candidate lower-bound election at the m = 3 table parameters."""
    return make_election(3, [((1, 3, 2), A3), ((2, 3, 1), B3), ((3, 2, 1), 1 - A3 - B3)])


@pytest.fixture
def halfhalf():
    return make_election(2, [((1, 2), 0.5), ((2, 1), 0.5)])


@pytest.fixture
def cycle():
    return make_election(3, [((1, 2, 3), 1 / 3), ((2, 3, 1), 1 / 3), ((3, 1, 2), 1 / 3)])


@pytest.fixture
def table4_election():
    return build_lower_bound_election(4, LowerBoundParams(0.459994, 0.406749, 0.363254, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def record_acceptance(number, label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {label}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_RESULTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
