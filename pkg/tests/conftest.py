import pytest

from mirrortoric import scenarios
from mirrortoric.exactnum import LatticeMatrix
from mirrortoric.polytope import LatticePolytope


@pytest.fixture(scope="session")
def p24():
    return scenarios.load_fixture("p24")


@pytest.fixture(scope="session")
def p11222():
    return scenarios.load_fixture("p11222")


@pytest.fixture(scope="session")
def g(p24):
    return LatticeMatrix(p24["g"])


@pytest.fixture(scope="session")
def nabla(p24):
    return LatticePolytope(p24["nabla"])


@pytest.fixture(scope="session")
def dual_delta(p24):
    return LatticePolytope(p24["dual_vertices"])


@pytest.fixture(scope="session")
def pipeline():
    return scenarios.p24_pipeline()


@pytest.fixture(scope="session")
def report_p24():
    return scenarios.suite_p24()


@pytest.fixture(scope="session")
def report_p11222():
    return scenarios.suite_p11222()


def pytest_terminal_summary(terminalreporter, config):
    import test_acceptance

    lines = config.stash.get(test_acceptance.LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
