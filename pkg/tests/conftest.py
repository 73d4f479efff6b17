import pytest

from orderiso import BoundedSemigroup, Carrier


@pytest.fixture(scope="session")
def s42():
    return BoundedSemigroup(Carrier.chain(4), 2)


@pytest.fixture(scope="session")
def s31():
    return BoundedSemigroup(Carrier.chain(3), 1)


@pytest.fixture(scope="session")
def s52():
    return BoundedSemigroup(Carrier.chain(5), 2)
