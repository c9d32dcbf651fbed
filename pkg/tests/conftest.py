import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from thuelab.core import symmetrize
from thuelab.systems import e0, s0

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def s0_sys():
    return s0()


@pytest.fixture(scope="session")
def e0_sys():
    return e0()


@pytest.fixture(scope="session")
def s0_sym():
    return symmetrize(s0())


@pytest.fixture(scope="session")
def e0_sym():
    return symmetrize(e0())
