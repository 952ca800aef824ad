import pytest
from hypothesis import HealthCheck, settings

from anyonqc.group_core import fixture, semidirect_pq
from anyonqc.protocols import AnyonComputer

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def s3():
    return semidirect_pq((3, 2, 2))


@pytest.fixture(scope="session")
def z7z3():
    return semidirect_pq((7, 3, 2))


@pytest.fixture(scope="session")
def comp_s3(s3):
    return AnyonComputer(s3)


@pytest.fixture(scope="session")
def comp_a4():
    return AnyonComputer(fixture("a4"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n].line())
