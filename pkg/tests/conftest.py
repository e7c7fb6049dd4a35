import numpy as np
import pytest

from icp_lab import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def sbit_entry():
    return catalog.sbit()


@pytest.fixture(scope="session")
def hbit_entry():
    return catalog.hbit()


@pytest.fixture(scope="session")
def qubit_entry():
    return catalog.qubit()


@pytest.fixture(scope="session")
def bit_entry():
    return catalog.classical_bit()


@pytest.fixture(scope="session")
def trit_entry():
    return catalog.classical_trit()
