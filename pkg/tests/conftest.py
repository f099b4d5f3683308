import pytest

from lshift import HydrogenState, QuadratureConfig, default_constants


@pytest.fixture(scope="session")
def constants():
    return default_constants()


@pytest.fixture(scope="session")
def config():
    return QuadratureConfig()


@pytest.fixture(scope="session")
def ground():
    return HydrogenState(1, 0)


@pytest.fixture(scope="session")
def s2s():
    return HydrogenState(2, 0)


@pytest.fixture(scope="session")
def s2p():
    return HydrogenState(2, 1)
