"""Shared fixtures for the polytrope test suites."""

import numpy as np
import pytest

from groebner_ideal_engine import is_maximal_type
from polytrope_config import PolytropeConfig
from polytrope_cli import read_batch
from tropical_weight_matrix import WeightMatrix, is_kleene, kleene_star, parse_matrix


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 4D pipeline runs (minutes per matrix); select with -m slow")


@pytest.fixture
def hexagon():
    """Running 2D example: c = (c12, c13, c21, c23, c31, c32) = (3, 2, 3, 4, 5, 6), Vol = 79."""
    return WeightMatrix(((0, 3, 2), (3, 0, 4), (5, 6, 0)))


@pytest.fixture
def segment():
    return WeightMatrix(((0, 1), (1, 0)))


@pytest.fixture
def square():
    """c = (2, 1, 2, 1, 1, 1): a square whose weight vector sits on a cone boundary."""
    return WeightMatrix(((0, 2, 1), (2, 0, 1), (1, 1, 0)))


@pytest.fixture
def example_3d():
    return WeightMatrix(((0, 11, 20, 29), (21, 0, 19, 20), (20, 29, 0, 11), (19, 20, 21, 0)))


@pytest.fixture
def reflected_3d(example_3d):
    """40 - c off the diagonal; flips the chosen diagonal of every square facet."""
    array = 40 - example_3d.array
    np.fill_diagonal(array, 0)
    return WeightMatrix.from_array(array)


def _read_representatives(name):
    with open(PolytropeConfig.data_path(name), "r", encoding="utf-8") as handle:
        return [(label, parse_matrix(text)) for label, text in read_batch(handle.read())]


@pytest.fixture(scope="session")
def representatives_3d():
    return _read_representatives(PolytropeConfig.REPRESENTATIVES_3D)


@pytest.fixture(scope="session")
def representatives_4d():
    return _read_representatives(PolytropeConfig.REPRESENTATIVES_4D)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_star(rng):
    """
    Factory of random integer Kleene stars. Entries are drawn from 1..high;
    generic=True draws from high+1..2*high, where no triangle inequality is
    tight, and redraws until the star is maximal.
    """

    def make(n, high=12, generic=False):
        while True:
            low = high + 1 if generic else 1
            array = rng.integers(low, low + high, size=(n, n))
            np.fill_diagonal(array, 0)
            W = kleene_star(WeightMatrix.from_array(array))
            assert is_kleene(W)
            if not generic or is_maximal_type(W):
                return W

    return make
