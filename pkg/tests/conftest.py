import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wpstab.cohring import load_ring, shipped_rings
from wpstab.scenario import load_scenario

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EXP_SCENARIOS = ("elliptic", "product_abelian", "split_abelian", "abelian_nfold")
RING_SCENARIOS = EXP_SCENARIOS + ("quintic",)


@pytest.fixture(scope="session")
def rings():
    return {name: load_ring(name) for name in shipped_rings()}


@pytest.fixture(scope="session")
def scenarios():
    return {name: load_scenario(name) for name in RING_SCENARIOS + ("siegel_compare",)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list = []


@pytest.fixture
def report():
    """Record one pass/fail line for the terminal summary and echo it."""
    def emit(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
