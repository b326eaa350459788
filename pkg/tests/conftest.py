import random
import pytest

from lftlab import fixtures
from lftlab.transform import discrete_gradients, nontrivial_dual_range, regular_dual_grid


@pytest.fixture
def ex1():
    return fixtures.ex1()


@pytest.fixture
def ex2():
    return fixtures.ex2()


@pytest.fixture
def ex3():
    return fixtures.ex3()


def canonical_dual(f, k=None):
    g = discrete_gradients(f)
    return regular_dual_grid(nontrivial_dual_range(g), k or f.n)


@pytest.fixture
def rng():
    return random.Random(1234)
