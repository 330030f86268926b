import pytest

from rfhlab.hermite import HermiteBasis
from rfhlab.integral import CATALOG

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def basis128():
    return HermiteBasis(128)


@pytest.fixture(scope="session")
def gaussian():
    return CATALOG["gaussian"]


@pytest.fixture
def record_criterion():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
