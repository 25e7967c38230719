import pytest

from runviz import fixtures

# Verdict lines from the acceptance tests, replayed after the run so they
# stay visible without disabling output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def edge_table():
    return fixtures.load_fixture("edge", runs=50)


@pytest.fixture(scope="session")
def powder_table():
    return fixtures.load_fixture("powder-like", runs=50, seed=7)


@pytest.fixture(scope="session")
def synthetic_table():
    return fixtures.load_fixture("synthetic", runs=500, seed=0, dims=20)
