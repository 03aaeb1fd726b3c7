"""Farey dissection of R/Z: fractions of order N, arc lookup, covering checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .mainterm import ArcParams, TauParam, farey_order, X_MIN

PI = math.pi
_SLACK = 1e-12


@dataclass(frozen=True)
class FareySystem:
    N: int
    fractions: tuple = field(repr=False)

    def __len__(self):
        return len(self.fractions)

    def __iter__(self):
        return iter(self.fractions)


def farey_sequence(N: int) -> FareySystem:
    """All reduced h/k in (0, 1] with k <= N, ascending (next-term recurrence)."""
    if N < 1:
        raise ValueError(f"Farey order must be >= 1, got {N}")
    out = []
    a, b, c, d = 0, 1, 1, N
    while c <= N:
        out.append(ArcParams(c, d))
        m = (N + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return FareySystem(N, tuple(out))


def farey_count(N: int) -> int:
    """sum_{k <= N} phi(k) via a totient sieve."""
    phi = list(range(N + 1))
    for p in range(2, N + 1):
        if phi[p] == p:
            for m in range(p, N + 1, p):
                phi[m] -= phi[m] // p
    return sum(phi[1:])


def arc_distance(t, arc: ArcParams) -> Fraction:
    """Distance from t to h/k on R/Z, exact when t is a Fraction or float."""
    d = (Fraction(t) - Fraction(arc.h, arc.k)) % 1
    return min(d, 1 - d)


def in_arc(t, arc: ArcParams, N: int) -> bool:
    return arc_distance(t, arc) * arc.k * N <= 1


def arc_of(t, N: int) -> ArcParams:
    """The arc [h/k - 1/(kN), h/k + 1/(kN)] containing t (mod 1).

    Overlaps resolve to the smallest k, then the smallest h, so the arcs act
    as a partition of the circle. 0 is identified with 1/1.
    """
    if N < 1:
        raise ValueError(f"Farey order must be >= 1, got {N}")
    t = Fraction(t) % 1
    for k in range(1, N + 1):
        # only h near t*k can lie within 1/(kN) < 1/k
        centre = math.floor(t * k)
        for h in sorted({(centre + j) % k or k for j in (0, 1)}):
            if math.gcd(h, k) != 1:
                continue
            arc = ArcParams(h, k)
            if in_arc(t, arc, N):
                return arc
    raise ArithmeticError(f"no order-{N} arc covers {t}")  # covering makes this unreachable


@dataclass(frozen=True)
class CoveringReport:
    N: int
    covered: bool
    mediant_bounds_ok: bool
    gaps: tuple = ()
    mediant_failures: tuple = ()

    def __bool__(self):
        return self.covered and self.mediant_bounds_ok


def covering_check(N: int) -> CoveringReport:
    """Exact check that the closed arcs cover [0, 1) and that each neighbour
    mediant lies between 1/(2kN) and 1/(kN) from both fractions."""
    # 0/1 stands in for 1/1 at the left end of the walk
    seq = [(0, 1)] + [(a.h, a.k) for a in farey_sequence(N).fractions]
    gaps, failures = [], []
    for (p, q), (r, s) in zip(seq, seq[1:]):
        left, right = Fraction(p, q), Fraction(r, s)
        reach_right = left + Fraction(1, q * N)
        reach_left = right - Fraction(1, s * N)
        if reach_right < reach_left:
            gaps.append((reach_right, reach_left))
        med = Fraction(p + r, q + s)
        for centre, k in ((left, q), (right, s)):
            if not Fraction(1, 2 * k * N) <= abs(med - centre) <= Fraction(1, k * N):
                failures.append((centre, med))
    return CoveringReport(N, not gaps, not failures, tuple(gaps), tuple(failures))


def make_tau(X: float, Y: float, arc: ArcParams) -> TauParam:
    """Validated tau = 1/X + 2 pi i Y for the arc at h/k."""
    if not X >= X_MIN:
        raise ValueError(f"X must be >= {X_MIN}, got {X}")
    N = farey_order(X)
    if arc.k > N:
        raise ValueError(f"arc {arc} has k > N = {N}")
    limit = 1.0 / (arc.k * N)
    if abs(Y) > limit:
        raise ValueError(f"|Y| <= 1/(kN) = {limit:.6g} violated: Y = {Y}")
    tp = TauParam(X, Y, N)
    tau = tp.tau
    if abs(tau) > 2 * math.sqrt(2) * PI / (arc.k * N) * (1 + _SLACK):
        raise ArithmeticError(f"|tau| bound fails at X={X}, Y={Y}, k={arc.k}")
    if (1 / tau).real < 0.07 * arc.k**2 * (1 - _SLACK):
        raise ArithmeticError(f"Re(1/tau) >= 0.07 k^2 fails at X={X}, Y={Y}, k={arc.k}")
    return tp
