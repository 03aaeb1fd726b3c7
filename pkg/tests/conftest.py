import pytest

from qcircle.series import g_array

_built = {}


def exact_coefficients(N):
    """g(0..N) as a tuple of ints, sliced from the largest build made so far."""
    for M in sorted(_built):
        if M >= N:
            return _built[M][: N + 1]
    _built[N] = tuple(int(v) for v in g_array(N))
    return _built[N]


@pytest.fixture(scope="session")
def g_large():
    return exact_coefficients(100_000)


@pytest.fixture(scope="session")
def g_small(g_large):
    return g_large[:50_001]
