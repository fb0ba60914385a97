import pytest

from circle_partitions.ntheory import dirichlet_power, ones_weights


@pytest.fixture(scope="session")
def primes_1e6():
    return dirichlet_power("pr", 1, 10**6)


@pytest.fixture(scope="session")
def semiprimes_1e6():
    return dirichlet_power("pr", 2, 10**6)


@pytest.fixture(scope="session")
def primes_small():
    return dirichlet_power("pr", 1, 30_000)


@pytest.fixture(scope="session")
def ones():
    return ones_weights(5000)
