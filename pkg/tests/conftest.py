"""Shared fixtures: the bundled example nets, enumerated outcome lists,
and seeded random net suites sized for exhaustive oracle checks."""

from itertools import product

import pytest

from mlcp import GenSpec, random_ml_net, reachability_closure
from mlcp.fixtures import load_fixture

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig1():
    return load_fixture("fig1")


@pytest.fixture(scope="session")
def fig2():
    return load_fixture("fig2")


@pytest.fixture(scope="session")
def fig3():
    return load_fixture("fig3")


@pytest.fixture(scope="session")
def fig4():
    return load_fixture("fig4")


@pytest.fixture(scope="session")
def fig6a():
    return load_fixture("fig6a")


@pytest.fixture(scope="session")
def fig6b():
    return load_fixture("fig6b")


def all_outcomes(net):
    """Every outcome of the net, in domain order, as dicts."""
    names = [v.name for v in net.variables]
    axes = [v.domain.values for v in net.variables]
    return [dict(zip(names, combo)) for combo in product(*axes)]


def closure_of(net):
    """Reachability closure; cached on the net across tests."""
    return reachability_closure(net)


def small_random_suite():
    """Seeded more-or-less nets small enough for all-pairs oracle work."""
    nets = []
    for seed in range(20):
        nets.append(random_ml_net(GenSpec(n_vars=2, max_domain=6, max_parents=1, seed=1000 + seed)))
    for seed in range(20):
        nets.append(random_ml_net(GenSpec(n_vars=3, max_domain=6, max_parents=2, seed=2000 + seed)))
    for seed in range(10):
        nets.append(random_ml_net(GenSpec(n_vars=4, max_domain=5, max_parents=2, seed=3000 + seed)))
    return nets


def binary_random_suite():
    """Seeded all-binary nets; every one must be more-or-less."""
    return [
        random_ml_net(GenSpec(n_vars=4, max_domain=2, max_parents=2, seed=5000 + seed))
        for seed in range(50)
    ]


@pytest.fixture(scope="session")
def random_suite():
    return small_random_suite()


@pytest.fixture(scope="session")
def binary_suite():
    return binary_random_suite()
