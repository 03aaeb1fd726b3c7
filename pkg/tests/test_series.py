import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qcircle.series import (
    ComplexPoint,
    PrecisionError,
    QSeries,
    decode_qser1,
    durfee_inverse,
    encode_qser1,
    eval_log_G,
    eval_log_G_real,
    eval_phi,
    g_array,
    g_array_strided,
    g_series,
    inv_neg_pochhammer_series,
    inv_pochhammer_series,
    kronecker_multiply,
    naive_product_oracle,
    phi_cutoff,
)

G_FACTORS = [("+", 1, 4), ("-", 3, 4)]


def signed_odd_partitions(N):
    """g(n) by enumeration: partitions into odd parts, weight (-1)^(number of parts = 3 mod 4)."""
    def count(n, largest):
        if n == 0:
            return 1
        total = 0
        for p in range(min(n, largest), 0, -1):
            if p % 2 == 0:
                continue
            sign = -1 if p % 4 == 3 else 1
            # use p once or more, then only smaller parts
            for mult in range(1, n // p + 1):
                total += sign**mult * count(n - mult * p, p - 1)
        return total
    return [count(n, n) for n in range(N + 1)]


def partitions_count(N):
    # p(n) via Euler's pentagonal recurrence
    p = [1] + [0] * N
    for n in range(1, N + 1):
        k, total = 1, 0
        while True:
            for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if g > n:
                    break
                total += (-1) ** (k + 1) * p[n - g]
            if k * (3 * k - 1) // 2 > n:
                break
            k += 1
        p[n] = total
    return p


def test_inv_pochhammer_full_partitions():
    assert list(inv_pochhammer_series(1, 1, 5)) == [1, 1, 2, 3, 5, 7]
    assert list(inv_pochhammer_series(1, 1, 60)) == partitions_count(60)


def test_inv_pochhammer_progression():
    assert list(inv_pochhammer_series(3, 4, 8)) == [1, 0, 0, 1, 0, 0, 1, 1, 0]
    assert list(inv_pochhammer_series(1, 4, 10)) == list(naive_product_oracle([("+", 1, 4)], 10))


def test_inv_neg_pochhammer_matches_oracle():
    # 1/(-q;q) = (q;q^2): coefficient of q^3 is -1
    assert list(inv_neg_pochhammer_series(1, 1, 3)) == [1, -1, 0, -1]
    assert list(inv_neg_pochhammer_series(3, 4, 6)) == [1, 0, 0, -1, 0, 0, 1]
    for a, M in [(1, 1), (3, 4), (2, 5)]:
        assert list(inv_neg_pochhammer_series(a, M, 40)) == list(naive_product_oracle([("-", a, M)], 40))


def test_progression_errors():
    with pytest.raises(ValueError):
        inv_pochhammer_series(0, 4, 5)
    with pytest.raises(ValueError):
        inv_pochhammer_series(1, 0, 5)
    with pytest.raises(ValueError):
        g_series(-1)


def test_g_first_terms_and_enumeration():
    assert list(g_series(6)) == [1, 1, 1, 0, 0, 1, 2]
    assert list(g_series(40)) == signed_odd_partitions(40)
    assert list(g_series(0)) == [1]


def test_g_matches_naive_oracle():
    assert list(g_series(400)) == list(naive_product_oracle(G_FACTORS, 400))


def test_fast_engine_matches_strided_passes():
    for N in (0, 1, 2, 3, 7, 64, 3000):
        assert list(g_array(N)) == list(g_array_strided(N))


@pytest.mark.parametrize("a,M,negate", [(1, 4, False), (3, 4, True), (2, 5, False), (1, 1, True), (6, 8, False)])
def test_durfee_expansion_matches_products(a, M, negate):
    ref = inv_neg_pochhammer_series(a, M, 600) if negate else inv_pochhammer_series(a, M, 600)
    assert list(durfee_inverse(a, M, 600, negate)) == list(ref)


@settings(max_examples=60)
@given(
    st.lists(st.integers(-(2**200), 2**200), min_size=1, max_size=25),
    st.lists(st.integers(-(2**90), 2**90), min_size=1, max_size=25),
)
def test_kronecker_multiply_matches_schoolbook(f, g):
    N = min(len(f), len(g)) - 1
    expected = [sum(f[i] * g[n - i] for i in range(n + 1)) for n in range(N + 1)]
    assert kronecker_multiply(f, g, N) == expected


def test_qseries_product_and_truncation():
    a = inv_pochhammer_series(1, 4, 30)
    b = inv_neg_pochhammer_series(3, 4, 30)
    assert list(a * b) == list(g_series(30))
    assert list(g_series(30).truncate(6)) == [1, 1, 1, 0, 0, 1, 2]
    with pytest.raises(ValueError):
        g_series(5).truncate(6)


def test_csv_output():
    text = g_series(6).to_csv()
    assert text.splitlines()[0] == "n,g_n"
    assert [int(line.split(",")[1]) for line in text.splitlines()[1:]] == [1, 1, 1, 0, 0, 1, 2]


@given(st.lists(st.integers(min_value=-(2**300), max_value=2**300), min_size=1, max_size=40))
def test_qser1_round_trip(values):
    assert decode_qser1(encode_qser1(values)) == values


def test_qser1_layout_and_rejects():
    data = encode_qser1([1, -2, 0])
    assert data[:5] == b"QSER1"
    assert int.from_bytes(data[5:13], "little") == 2
    assert QSeries.from_bytes(g_series(50).to_bytes()) == g_series(50)
    with pytest.raises(ValueError):
        decode_qser1(b"XSER1" + data[5:])
    with pytest.raises(ValueError):
        decode_qser1(data[:-1])
    with pytest.raises(ValueError):
        decode_qser1(data + b"\0")


def phi_oracle(a, M, q, terms=4000):
    mpmath.mp.dps = 30
    q = mpmath.mpc(q)
    return complex(-mpmath.fsum(mpmath.log(1 - q**m) for m in range(a, terms, M)))


def test_eval_phi_against_direct_sum():
    value = eval_phi(1, 1, ComplexPoint(-1.0, 0.0), tol=1e-12)
    assert abs(value - phi_oracle(1, 1, math.exp(-1), 200)) < 1e-12
    q = 0.5 * cmath.exp(2j * math.pi / 3)
    value = eval_phi(3, 4, ComplexPoint.from_complex(q))
    assert abs(value - phi_oracle(3, 4, q, 400)) < 1e-10


def test_eval_phi_small_q():
    q = ComplexPoint(math.log(1e-18), 0.3)
    assert abs(eval_phi(1, 1, q)) < 2e-18


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 6).flatmap(lambda M: st.tuples(st.integers(1, M), st.just(M))),
    st.floats(0.05, 0.9),
    st.floats(-math.pi, math.pi),
)
def test_eval_phi_random_points(aM, radius, angle):
    a, M = aM
    q = radius * cmath.exp(1j * angle)
    assert abs(eval_phi(a, M, ComplexPoint.from_complex(q)) - phi_oracle(a, M, q, 600)) < 1e-10


def test_eval_log_G_matches_series_at_small_q():
    q = 0.3 * cmath.exp(0.7j)
    coeffs = g_series(80)
    direct = cmath.log(sum(c * q**n for n, c in enumerate(coeffs)))
    assert abs(eval_log_G(ComplexPoint.from_complex(q)) - direct) < 1e-10
    minus = cmath.log(sum(c * (-q) ** n for n, c in enumerate(coeffs)))
    assert abs(eval_log_G(ComplexPoint.from_complex(q), at_minus_one=True) - minus) < 1e-10


def test_log_G_growth_rate():
    ratios = [eval_log_G_real(X) / X for X in (250, 1000, 4000)]
    gaps = [abs(r - math.pi**2 / 48) for r in ratios]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 2e-3


def test_complex_point_angle_normalisation():
    p = ComplexPoint(-0.1, 2 * math.pi - 1e-3)
    assert math.isclose(p.angle, -1e-3, rel_tol=1e-12)
    assert ComplexPoint(-0.1, -math.pi).angle == math.pi
    with pytest.raises(ValueError):
        ComplexPoint(0.0, 0.0)


def test_precision_error_on_tiny_tolerance():
    with pytest.raises(PrecisionError) as info:
        eval_phi(1, 1, ComplexPoint(-1.0 / 1000, 0.0), tol=1e-18)
    assert info.value.floor > 0


def test_cutoff_is_monotone_in_tolerance():
    assert phi_cutoff(-0.01, 1e-6) <= phi_cutoff(-0.01, 1e-10) <= phi_cutoff(-0.01, 1e-14)


def test_constructor_examples():
    assert list(inv_pochhammer_series(1, 4, 6)) == [1, 1, 1, 1, 1, 2, 2]
    assert list(inv_pochhammer_series(2, 2, 4)) == [1, 0, 1, 0, 2]
    assert list(inv_neg_pochhammer_series(1, 4, 0)) == [1]
    assert list(naive_product_oracle([("+", 1, 1)], 4)) == [1, 1, 2, 3, 5]
    assert list(naive_product_oracle([], 3)) == [1, 0, 0, 0]
    assert list(naive_product_oracle(G_FACTORS, 6)) == [1, 1, 1, 0, 0, 1, 2]


def test_euler_pentagonal_to_5000():
    assert list(inv_pochhammer_series(1, 1, 5000)) == partitions_count(5000)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8).flatmap(lambda M: st.tuples(st.integers(1, M), st.just(M))), st.integers(0, 300))
def test_constructor_invariants(aM, N):
    a, M = aM
    plain = inv_pochhammer_series(a, M, N)
    signed = inv_neg_pochhammer_series(a, M, N)
    assert len(plain) == len(signed) == N + 1
    assert plain[0] == signed[0] == 1
    assert all(c >= 0 for c in plain)


_ORACLE_2000 = None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2000))
def test_every_truncation_matches_oracle(N):
    global _ORACLE_2000
    if _ORACLE_2000 is None:
        _ORACLE_2000 = list(naive_product_oracle(G_FACTORS, 2000))
    assert list(g_series(N)) == _ORACLE_2000[: N + 1]


def test_eval_phi_limit_at_zero_for_quarter_progression():
    assert eval_phi(1, 4, ComplexPoint(math.log(1e-300), 0.0)) == 0


@pytest.mark.parametrize("minus", [False, True])
def test_log_G_real_at_X_2_against_products(minus):
    q = -math.exp(-0.5) if minus else math.exp(-0.5)
    mpmath.mp.dps = 30
    q = mpmath.mpf(q)
    direct = -mpmath.fsum(mpmath.log(1 - q ** (4 * j + 1)) + mpmath.log(1 + q ** (4 * j + 3)) for j in range(200))
    assert abs(eval_log_G_real(2.0, minus) - float(direct)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6).flatmap(lambda M: st.tuples(st.integers(1, M), st.just(M))), st.floats(0.01, 0.95))
def test_eval_phi_real_axis(aM, q):
    a, M = aM
    assert abs(eval_phi(a, M, ComplexPoint.from_complex(q)).real - phi_oracle(a, M, q, 3000).real) < 1e-10


def test_coefficient_growth_rate():
    from conftest import exact_coefficients

    g = exact_coefficients(50_000)
    rate = math.log(g[50_000]) / math.sqrt(50_000)
    assert abs(rate / (math.pi / (2 * math.sqrt(3))) - 1) < 0.05
