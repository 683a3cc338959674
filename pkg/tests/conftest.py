import numpy as np
import pytest

from btdet import random_spec

# criterion lines recorded by test_acceptance, echoed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def cornered(rng):
    return random_spec(rng, 5, 2, corners=True)


@pytest.fixture
def corner_free(rng):
    return random_spec(rng, 6, 2)


def pytest_runtest_logreport(report):
    if report.when == "call":
        ACCEPTANCE_LINES.extend(v for k, v in report.user_properties if k == "criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
