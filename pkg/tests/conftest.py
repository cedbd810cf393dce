import numpy as np
import pytest

from captension.diskfield import make_grid


@pytest.fixture(scope="session")
def grid():
    return make_grid(32, 16)


@pytest.fixture(scope="session")
def coarse_grid():
    return make_grid(16, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)
