import numpy as np
import pytest

from steinw1 import targets

ACCEPTANCE_RESULTS = []


def record_criterion(name, ok, detail):
    ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok, detail in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture(scope="session")
def std_normal():
    return targets.make_target("normal")


@pytest.fixture(scope="session")
def exp1():
    return targets.make_target("exponential", rate=1.0)


@pytest.fixture(scope="session")
def gamma21():
    return targets.make_target("gamma", alpha=2, beta=1)


@pytest.fixture(scope="session")
def beta22():
    return targets.make_target("beta", alpha=2, beta=2)


@pytest.fixture(scope="session")
def unit_weight():
    return targets.constant_weight(1.0)


def random_lattice_law(rng, max_atoms=15):
    """Random strictly positive masses on a consecutive integer lattice."""
    from steinw1.discretes import DiscreteLaw

    n = int(rng.integers(2, max_atoms + 1))
    masses = rng.random(n) + 0.05
    masses /= masses.sum()
    return DiscreteLaw(points=np.arange(n, dtype=float), masses=masses)
