import pytest
from hypothesis import settings

from pwenv import QuadratureSpec, default_catalog

settings.register_profile("suite", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("suite")

# one line per acceptance criterion, printed after the run so capture
# cannot swallow them
_ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance():
    def record(line: str):
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


@pytest.fixture(scope="session")
def fast_quad():
    return QuadratureSpec.fast()


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()
