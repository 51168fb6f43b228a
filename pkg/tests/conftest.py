import pytest
from hypothesis import HealthCheck, settings

import sievelab as sl

# deterministic, CI-sized property testing
settings.register_profile(
    "lab",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("lab")


@pytest.fixture(scope="session")
def primes_1e4():
    # coverage past 1e4 so length-20 window queries at x = 1e4 stay legal
    return sl.primes_in(1, 10**4 + 25)


@pytest.fixture(scope="session")
def primes_1e6():
    return sl.primes_in(1, 10**6 + 45)
