import pytest

from kbconst.mp_core import make_context

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ctx30():
    return make_context(30)


@pytest.fixture(scope="session")
def ctx10():
    return make_context(10)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
