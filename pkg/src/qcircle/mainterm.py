"""Main terms of log 1/(q^a;q^M)_inf near h/k and the closed forms for G.

G(q) = 1/(q, -q^3; q^4)_inf = (q^3;q^4) / ((q;q^4)(q^6;q^8)), so its main term is
M_{1,4} - M_{3,4} + M_{6,8}; the value depends only on k mod 8 (and on h mod 4
when 4 | k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .specfun import hurwitz_zeta_deriv_minus1

PI = math.pi
MINOR_ARC_X_THRESHOLD = 3.4e7
X_MIN = 16.0


@dataclass(frozen=True)
class ArcParams:
    """A reduced Farey fraction h/k, 1 <= h <= k."""

    h: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if not 1 <= self.h <= self.k:
            raise ValueError(f"need 1 <= h <= k, got h={self.h}, k={self.k}")
        if math.gcd(self.h, self.k) != 1:
            raise ValueError(f"h/k = {self.h}/{self.k} is not reduced")

    def __str__(self) -> str:
        return f"{self.h}/{self.k}"


@dataclass(frozen=True)
class ResidueData:
    M_star: int
    b: int
    b_star: int
    K: int


@dataclass(frozen=True)
class TauParam:
    """tau = 1/X + 2 pi i Y together with N = floor(sqrt(2 pi X)).

    Build through ``farey.make_tau`` to get the arc constraints checked.
    """

    X: float
    Y: float
    N: int

    @property
    def tau(self) -> complex:
        return complex(1.0 / self.X, 2.0 * PI * self.Y)


def farey_order(X: float) -> int:
    """N = floor(sqrt(2 pi X))."""
    n = math.isqrt(int(2 * PI * X))
    # isqrt of the floor is exact unless 2*pi*X sits within rounding of a square
    while (n + 1) ** 2 <= 2 * PI * X:
        n += 1
    while n * n > 2 * PI * X:
        n -= 1
    return n


def compute_residue_data(h: int, a: int, k: int, M: int) -> ResidueData:
    """b = -h a mod (k, M) taken in 1..(k, M), and b* = (k, M) - b unless b = (k, M)."""
    if k < 1 or M < 1:
        raise ValueError("k and M must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError(f"gcd(h, k) must be 1, got h={h}, k={k}")
    if not 1 <= a <= M:
        raise ValueError(f"need 1 <= a <= M, got a={a}, M={M}")
    m_star = math.gcd(k, M)
    b = (-h * a) % m_star or m_star
    b_star = m_star - b if b != m_star else m_star
    return ResidueData(M_star=m_star, b=b, b_star=b_star, K=k * M // m_star)


def main_term(a: int, M: int, arc: ArcParams, tau: TauParam) -> complex:
    """Leading term of log 1/(q^a;q^M)_inf at q = exp(-tau + 2 pi i h/k)."""
    r = compute_residue_data(arc.h, a, arc.k, M)
    ms = r.M_star
    real = PI**2 * ((r.b / ms) ** 2 - r.b / ms + 1.0 / 6.0)
    if r.b == r.b_star:
        imag = 0.0
    else:
        imag = 2 * PI * (
            -hurwitz_zeta_deriv_minus1(r.b / ms) + hurwitz_zeta_deriv_minus1(r.b_star / ms)
        )
    return ms**2 / (arc.k**2 * M) * complex(real, imag) / tau.tau


class Case(enum.IntEnum):
    ODD = 1  # k odd
    TWO_MOD_FOUR = 2  # k = 2 mod 4
    FOUR_MOD_EIGHT = 3  # k = 4 mod 8
    ZERO_MOD_EIGHT = 4  # k = 0 mod 8


def case_classify(k: int) -> Case:
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if k % 2:
        return Case.ODD
    if k % 4 == 2:
        return Case.TWO_MOD_FOUR
    if k % 8 == 4:
        return Case.FOUR_MOD_EIGHT
    return Case.ZERO_MOD_EIGHT


def chi(h: int) -> int:
    """+1 for h = 1 mod 4, -1 for h = 3 mod 4; even h cannot occur when 4 | k."""
    if h % 2 == 0:
        raise ValueError(f"chi(h) needs odd h, got {h}")
    return 1 if h % 4 == 1 else -1


def zeta_prime_quarter_gap() -> float:
    """zeta'(-1, 1/4) - zeta'(-1, 3/4)."""
    return hurwitz_zeta_deriv_minus1(0.25) - hurwitz_zeta_deriv_minus1(0.75)


def main_term_G_composed(arc: ArcParams, tau: TauParam) -> complex:
    return main_term(1, 4, arc, tau) - main_term(3, 4, arc, tau) + main_term(6, 8, arc, tau)


def main_term_G(arc: ArcParams, tau: TauParam, check: bool = True) -> complex:
    """Closed-form main term of log G at h/k, dispatched on k mod 8.

    With ``check`` the value is compared with the three-term composition and
    a mismatch beyond 1e-10 relative raises ArithmeticError.
    """
    k = arc.k
    case = case_classify(k)
    inv_tau = 1.0 / tau.tau
    if case is Case.ODD:
        value = PI**2 / (48 * k**2) * inv_tau
    elif case is Case.TWO_MOD_FOUR:
        value = PI**2 / (12 * k**2) * inv_tau
    elif case is Case.FOUR_MOD_EIGHT:
        coeff = complex(-(PI**2) / (6 * k**2), 16 * PI * chi(arc.h) / k**2 * zeta_prime_quarter_gap())
        value = coeff * inv_tau
    else:
        value = -(PI**2) / (6 * k**2) * inv_tau
    if check:
        composed = main_term_G_composed(arc, tau)
        scale = max(abs(value), abs(composed))
        if abs(value - composed) > 1e-10 * scale:
            raise ArithmeticError(
                f"closed form {value} disagrees with composed main term {composed} at {arc}"
            )
    return value


def re_mainterm_upper_bound(case: Case, k: int, X: float) -> float:
    """Upper bound on Re(M_G) over every admissible Y."""
    case = Case(case)
    if case is Case.ODD:
        return PI**2 * X / (48 * k**2)
    if case is Case.TWO_MOD_FOUR:
        return PI**2 * X / (12 * k**2)
    if case is Case.FOUR_MOD_EIGHT:
        return 2.94 * X / k**2
    return 0.0


# (X^{1/2} log X, X^{1/2}, log X, 1, X^{-1/2}) coefficients per case
ERROR_CONSTANTS = {
    Case.ODD: (1.32, 512.74, 1.92, 42.74, 2.72),
    Case.TWO_MOD_FOUR: (1.32, 95.77, 0.96, 11.61, 2.72),
    Case.FOUR_MOD_EIGHT: (1.32, 21.1, 0.48, 3.22, 2.72),
    Case.ZERO_MOD_EIGHT: (1.32, 13.27, 0.36, 1.73, 2.72),
}


def error_bound_G(case: Case, X: float, enforce_domain: bool = True) -> float:
    """Bound on |Re(log G - M_G)| for arcs in the given case.

    The bound is only established for X >= 16; ``enforce_domain=False``
    evaluates the expression anyway.
    """
    if enforce_domain and X < X_MIN:
        raise ValueError(f"error_bound_G needs X >= {X_MIN}, got {X}")
    c1, c2, c3, c4, c5 = ERROR_CONSTANTS[Case(case)]
    r = math.sqrt(X)
    lx = math.log(X)
    return c1 * r * lx + c2 * r + c3 * lx + c4 + c5 / r


class MinorArcBound(NamedTuple):
    log_bound: float
    certified: bool


def minor_arc_log_bound(X: float) -> MinorArcBound:
    """log of the bound on |G(q)| away from the arcs at 1/1 and 1/2."""
    return MinorArcBound((PI**2 / 48 - 0.01) * X, X >= MINOR_ARC_X_THRESHOLD)
