import pytest

from dressedvdw.levels import three_level_default, two_level
from dressedvdw.response import bare_response


@pytest.fixture(scope="session")
def three():
    return three_level_default()


@pytest.fixture(scope="session")
def two():
    return two_level(2.0, 3.0)


@pytest.fixture(scope="session")
def three_resp(three):
    return bare_response(three)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
