import pytest

from qcircle.identities import trig_sum_residuals, multiplication_deriv_residual, multiplication_residual


@pytest.mark.parametrize("k", [1, 2, 3, 12, 37, 64])
def test_trig_sum_identities(k):
    residuals = trig_sum_residuals(k)
    assert len(residuals) == 6
    assert max(residuals.values()) < 1e-9


@pytest.mark.parametrize("k", [1, 6, 30, 60])
def test_multiplication_identity(k):
    assert multiplication_residual(k) < 1e-10


@pytest.mark.parametrize("k", [2, 10, 48])
def test_multiplication_identity_derivative(k):
    assert multiplication_deriv_residual(k, d=2) < 1e-12
