import numpy as np
import pytest

from ionic_cdw.certify import small_lattice


@pytest.fixture(scope="session")
def torus1():
    return small_lattice()[0]


@pytest.fixture(scope="session")
def fock1():
    return small_lattice()[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
