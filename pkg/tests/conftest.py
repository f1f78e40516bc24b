from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from qrank.constructions import example_3_4, example_port_4, gabidulin_make

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def ex34():
    return example_3_4()


@pytest.fixture(scope="session")
def port_code():
    return example_port_4()


@pytest.fixture(scope="session")
def gab():
    """Gabidulin code with q=2, n=4, k=2 in F_16^4 (an MRD code, d = 3)."""
    return gabidulin_make(2, 4, 2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
