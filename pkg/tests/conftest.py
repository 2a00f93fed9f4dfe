import pytest

from hext import shoot


@pytest.fixture(scope="session")
def shot_m1():
    """One converged m=1 shooting run, shared across the suite."""
    return shoot(1)
