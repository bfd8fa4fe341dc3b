import numpy as np
import pytest

from oamwigner.lattice import LWindow


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def win6():
    return LWindow(-6, 6)


@pytest.fixture
def win5():
    return LWindow(-5, 5)
