import math

import pytest
from hypothesis import given, settings, strategies as st

from qcircle.asymptotic import (
    Certified,
    Uncertified,
    asymptotic_value,
    bessel_argument,
    e_g1_bound,
    error_budget,
    find_certified_threshold,
    g1_main,
    g2_main,
    g3_log_bound,
    positivity_certificate,
    x_of_n,
)

PI = math.pi
THRESHOLD_N = 2.4e14


def rel_err(value, exact):
    return abs(float(value) / exact - 1)


def test_x_of_n():
    assert x_of_n(PI**2 / 48 * 1e4) == pytest.approx(100.0)
    assert x_of_n(int(THRESHOLD_N)) >= 3.4e7
    assert x_of_n(int(THRESHOLD_N)) == pytest.approx(3.41e7, rel=2e-3)
    with pytest.raises(ValueError):
        x_of_n(0)


@given(st.integers(1, 10**18), st.integers(1, 10**6))
def test_x_of_n_monotone(n, step):
    # strict in exact arithmetic; adjacent huge n can round to the same double
    assert x_of_n(n + step) >= x_of_n(n)


def test_g1_main_closed_form_small_n():
    # direct float evaluation of the leading term at n = 100
    n = 100
    x = bessel_argument(n)
    import mpmath

    direct = PI**0.25 * math.gamma(0.25) / (2**2.25 * 3**0.375 * n**0.375) * float(mpmath.besseli(-0.75, x))
    assert float(g1_main(n)) == pytest.approx(direct, rel=1e-11)


def test_g1_main_shape():
    # n^{-3/8} from the prefactor and x^{-1/2} ~ n^{-1/4} from the Bessel function
    residuals = [g1_main(n).log_abs - bessel_argument(n) + 0.625 * math.log(n) for n in (10**8, 10**12, 10**16, 10**20)]
    assert max(residuals) - min(residuals) < 1e-3


def test_g1_main_ratio_at_million():
    n = 10**6
    observed = g1_main(4 * n).log_abs - g1_main(n).log_abs
    # e^x / sqrt(2 pi x) times n^{-3/8}: the n-dependence is e^x * n^{-5/8}
    predicted = bessel_argument(4 * n) - bessel_argument(n) - 0.625 * math.log(4)
    assert abs(math.expm1(observed - predicted)) < 0.01


def test_g2_main_sign_and_relative_size():
    assert g2_main(7).parity == -1 and g2_main(8).parity == 1
    ratios = [g2_main(n).magnitude.log_abs - g1_main(n).log_abs + 0.25 * math.log(n) for n in (10**4, 10**8, 10**12)]
    assert max(ratios) - min(ratios) < 0.05


def test_g1_only_versus_two_terms(g_small):
    n = 10**4
    g1_err = rel_err(g1_main(n), g_small[n])
    both_err = rel_err(asymptotic_value(n), g_small[n])
    assert both_err * 5 <= g1_err
    # g1 alone misses g(n) by roughly |g2|/g1 at this size
    assert g1_err == pytest.approx(float(abs(g2_main(n).magnitude) / g1_main(n)), rel=0.2)


def test_desk_scale_accuracy(g_small):
    errs = [rel_err(asymptotic_value(n), g_small[n]) for n in (10**3, 10**4, 5 * 10**4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] <= 0.02 and errs[2] <= 0.02


def test_parity_wobble_tracked_by_second_term(g_small):
    for n in range(10**4, 10**4 + 21):
        g1_gap = g_small[n] - float(g1_main(n))
        assert math.copysign(1, g1_gap) == g2_main(n).parity


def test_g3_bound_at_three():
    assert g3_log_bound(3) == pytest.approx(PI / 2 - 3 / (25 * PI))


def test_e_g1_relative_decay():
    rel = [e_g1_bound(n).log_abs - g1_main(n).log_abs for n in (10**6, 10**10, 10**14)]
    assert rel[0] > rel[1] > rel[2]
    # n^{-3/8} decay: four decades in n give about 1.5 decades
    assert rel[1] - rel[2] == pytest.approx(0.375 * math.log(1e4), abs=0.2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**20))
def test_budget_finite_and_positive(n):
    b = error_budget(n)
    for part in (b.main1, b.main2_abs, b.e_g1, b.e_g2, b.g3):
        assert part.sign == 1 and math.isfinite(part.log_abs)


def test_budget_at_threshold():
    b = error_budget(int(THRESHOLD_N))
    assert b.certified
    assert (b.main1 - b.main2_abs - b.e_g1 - b.e_g2 - b.g3).sign == 1


def test_certificate_examples():
    cert = positivity_certificate(int(THRESHOLD_N))
    assert isinstance(cert, Certified) and cert.margin_log > 0 and cert.margin.sign == 1
    low = positivity_certificate(10**6)
    assert isinstance(low, Uncertified) and "threshold" in low.reason


def test_margin_non_decreasing_by_decades():
    margins = [positivity_certificate(int(THRESHOLD_N)).margin_log]
    margins += [positivity_certificate(10**e).margin_log for e in range(15, 21)]
    assert all(b >= a for a, b in zip(margins, margins[1:]))


def test_threshold_search():
    n_star = find_certified_threshold(10**10, 10**16)
    assert THRESHOLD_N / 1.2 <= n_star <= THRESHOLD_N * 1.2
    assert not positivity_certificate(n_star - 1) and positivity_certificate(n_star)
    assert find_certified_threshold(10**15, 10**16) == 10**15
    with pytest.raises(ValueError):
        find_certified_threshold(10, 10**6)
