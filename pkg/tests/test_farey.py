import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcircle.farey import arc_of, covering_check, farey_count, farey_sequence, in_arc, make_tau
from qcircle.mainterm import ArcParams


def totient(k):
    return sum(1 for h in range(1, k + 1) if math.gcd(h, k) == 1)


def brute_force_arc(t, N):
    """Scan every order-N arc; smallest k, then smallest h, among those containing t."""
    t = Fraction(t) % 1
    best = None
    for k in range(1, N + 1):
        for h in range(1, k + 1):
            if math.gcd(h, k) != 1:
                continue
            d = abs(t - Fraction(h, k))
            d = min(d % 1, 1 - d % 1)
            if d <= Fraction(1, k * N) and (best is None or (k, h) < (best.k, best.h)):
                best = ArcParams(h, k)
    return best


def test_farey_small_orders():
    assert [(a.h, a.k) for a in farey_sequence(3)] == [(1, 3), (1, 2), (2, 3), (1, 1)]
    assert len(farey_sequence(5)) == 10
    assert len(farey_sequence(1)) == 1
    with pytest.raises(ValueError):
        farey_sequence(0)


def test_farey_count_matches_totient_sum():
    for N in range(1, 201):
        assert len(farey_sequence(N)) == farey_count(N) == sum(totient(k) for k in range(1, N + 1))


@given(st.integers(1, 150))
def test_farey_neighbours_unimodular(N):
    fs = farey_sequence(N).fractions
    assert all(1 <= a.h <= a.k <= N and math.gcd(a.h, a.k) == 1 for a in fs)
    for left, right in zip(fs, fs[1:]):
        assert right.h * left.k - left.h * right.k == 1


def test_arc_of_examples():
    assert arc_of(0.49, 4) == ArcParams(1, 2)
    for N in (1, 5, 37):
        assert arc_of(0.0, N) == ArcParams(1, 1)
    assert arc_of(Fraction(1, 3) + Fraction(1, 30), 10) == ArcParams(1, 3)
    assert brute_force_arc(Fraction(1, 3) + Fraction(1, 30), 10) == ArcParams(1, 3)


def test_arc_of_matches_brute_force():
    rng = random.Random(7)
    for _ in range(500):
        N = rng.randint(1, 40)
        t = Fraction(rng.randrange(10**9), 10**9)
        assert arc_of(t, N) == brute_force_arc(t, N)


@settings(max_examples=200)
@given(st.floats(0, 1, exclude_max=True), st.integers(1, 200))
def test_arc_of_contains_point(t, N):
    arc = arc_of(t, N)
    assert arc.k <= N
    assert in_arc(t, arc, N)


def test_covering_small_and_medium():
    assert covering_check(1)
    report = covering_check(50)
    assert report.covered and report.mediant_bounds_ok
    assert all(covering_check(N) for N in range(1, 101))


def test_make_tau():
    tp = make_tau(16, 0, ArcParams(1, 1))
    assert tp.N == 10 and tp.tau == pytest.approx(1 / 16)
    with pytest.raises(ValueError, match="1/\\(kN\\)"):
        make_tau(16, 1, ArcParams(1, 2))
    with pytest.raises(ValueError):
        make_tau(15.9, 0, ArcParams(1, 1))


@settings(max_examples=200)
@given(st.floats(16, 1e8), st.data())
def test_make_tau_consequences(X, data):
    N = math.isqrt(int(2 * math.pi * X))
    k = data.draw(st.integers(1, N))
    frac = data.draw(st.floats(-1, 1))
    tp = make_tau(X, frac / (k * N), ArcParams(1, k))
    assert (1 / tp.tau).real >= 0.07 * k**2 * (1 - 1e-12)
    assert abs(tp.tau) <= 2 * math.sqrt(2) * math.pi / (k * N) * (1 + 1e-12)
