"""Bessel main terms for g(n), explicit error budgets and the positivity certificate.

Everything is carried as LogMagnitude since I_s((pi/2) sqrt(n/3)) overflows
binary64 once n passes about 2e6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .mainterm import MINOR_ARC_X_THRESHOLD
from .specfun import GAMMA_1_4, GAMMA_3_4, GAMMA_5_4, LOG2, LOGPI, LogMagnitude, bessel_i_log

PI = math.pi
LOG3 = math.log(3.0)
LOG_GAMMA_1_4 = math.log(GAMMA_1_4)
LOG_GAMMA_3_4 = math.log(GAMMA_3_4)
LOG_GAMMA_5_4 = math.log(GAMMA_5_4)
MARGIN_GUARD = 1e-9  # log units the certificate must clear


def _check_n(n) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def x_of_n(n) -> float:
    """Saddle parameter X = sqrt(48 n / pi^2)."""
    _check_n(n)
    return math.sqrt(48.0 * n) / PI


def bessel_argument(n) -> float:
    """(pi/2) sqrt(n/3)."""
    _check_n(n)
    return 0.5 * PI * math.sqrt(n / 3.0)


def _lm(log_abs: float) -> LogMagnitude:
    return LogMagnitude.from_log(log_abs)


def g1_main(n) -> LogMagnitude:
    """pi^{1/4} Gamma(1/4) / (2^{9/4} 3^{3/8} n^{3/8}) * I_{-3/4}(x)."""
    x = bessel_argument(n)
    log_pref = 0.25 * LOGPI + LOG_GAMMA_1_4 - 2.25 * LOG2 - 0.375 * LOG3 - 0.375 * math.log(n)
    return _lm(log_pref) * bessel_i_log(-0.75, x)


class SecondTerm(NamedTuple):
    parity: int  # (-1)^n
    magnitude: LogMagnitude  # prefactor * I_{-5/4}(x); negative when x < 0.932

    @property
    def value(self) -> LogMagnitude:
        return self.magnitude if self.parity > 0 else -self.magnitude


def g2_main(n) -> SecondTerm:
    """(-1)^n pi^{3/4} Gamma(3/4) / (2^{11/4} 3^{5/8} n^{5/8}) * I_{-5/4}(x)."""
    x = bessel_argument(n)
    log_pref = 0.75 * LOGPI + LOG_GAMMA_3_4 - 2.75 * LOG2 - 0.625 * LOG3 - 0.625 * math.log(n)
    return SecondTerm(-1 if n % 2 else 1, _lm(log_pref) * bessel_i_log(-1.25, x))


def asymptotic_value(n) -> LogMagnitude:
    """g1_main(n) + g2_main(n), signed."""
    return g1_main(n) + g2_main(n).value


@dataclass(frozen=True)
class ErrorBudget:
    n: int
    main1: LogMagnitude
    main2_abs: LogMagnitude
    e_g1: LogMagnitude
    e_g2: LogMagnitude
    g3: LogMagnitude
    certified: bool

    @property
    def total_error(self) -> LogMagnitude:
        return self.main2_abs + self.e_g1 + self.e_g2 + self.g3

    @property
    def margin_log(self) -> float:
        return self.main1.log_abs - self.total_error.log_abs

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "main1_log": self.main1.log_abs,
            "main2_log": self.main2_abs.log_abs,
            "e_g1_log": self.e_g1.log_abs,
            "e_g2_log": self.e_g2.log_abs,
            "g3_log": self.g3.log_abs,
            "margin_log": self.margin_log,
            "certified": self.certified,
        }


def e_g1_bound(n) -> LogMagnitude:
    x = bessel_argument(n)
    logn = math.log(n)
    outer = _lm(LOG_GAMMA_1_4 - 0.75 * LOG2 - 0.5 * LOGPI)
    bessel_piece = _lm(
        math.log(1.32) + 1.5 * LOGPI - 3 * LOG2 - 0.75 * LOG3 - 0.75 * logn
    ) * abs(bessel_i_log(-0.75, x))
    factor = 1 + 1.32 * PI**0.75 / (2**1.5 * 3**0.375 * n**0.375)
    tail = _lm(math.log(factor) + 0.5 * LOG2 + 0.125 * LOG3 - 1.25 * LOGPI - 0.875 * logn + 0.75 * x)
    return outer * (bessel_piece + tail)


def e_g2_bound(n) -> LogMagnitude:
    x = bessel_argument(n)
    logn = math.log(n)
    outer = _lm(LOG_GAMMA_3_4 - 0.25 * LOG2 - 0.5 * LOGPI)
    bessel_piece = _lm(math.log(1.64) + 2 * LOGPI - 4 * LOG2 - LOG3 - logn) * abs(bessel_i_log(-1.25, x))
    factor = 1 + 1.64 * PI**0.75 / (2**1.5 * 3**0.375 * n**0.375)
    low = _lm(LOG_GAMMA_5_4 - LOG2 - LOGPI - 1.25 * logn + 0.25 * x)
    high = _lm(-0.5 * LOG2 - 0.125 * LOG3 - 0.75 * LOGPI - 1.125 * logn + 0.75 * x)
    return outer * (bessel_piece + _lm(math.log(2 * factor)) * (low + high))


def g3_log_bound(n) -> float:
    """log of the bound on the minor-arc contribution: x - sqrt(3n)/(25 pi)."""
    return bessel_argument(n) - math.sqrt(3.0 * n) / (25 * PI)


def error_budget(n) -> ErrorBudget:
    _check_n(n)
    return ErrorBudget(
        n=n,
        main1=g1_main(n),
        main2_abs=abs(g2_main(n).magnitude),
        e_g1=e_g1_bound(n),
        e_g2=e_g2_bound(n),
        g3=_lm(g3_log_bound(n)),
        certified=x_of_n(n) >= MINOR_ARC_X_THRESHOLD,
    )


@dataclass(frozen=True)
class Certified:
    n: int
    margin: LogMagnitude  # main1 - (|g2| + e_g1 + e_g2 + g3)
    margin_log: float  # log main1 - log(total error)
    budget: ErrorBudget

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Uncertified:
    n: int
    reason: str
    budget: ErrorBudget

    def __bool__(self):
        return False


def positivity_certificate(n):
    """Certified when the minor-arc bound applies and the leading term beats
    every other piece by more than MARGIN_GUARD in log units."""
    budget = error_budget(n)
    if not budget.certified:
        return Uncertified(
            n, f"X = {x_of_n(n):.6g} below the minor-arc threshold {MINOR_ARC_X_THRESHOLD:g}", budget
        )
    margin_log = budget.margin_log
    if not math.isfinite(margin_log) or margin_log <= MARGIN_GUARD:
        return Uncertified(n, f"leading term does not dominate (log margin {margin_log:.6g})", budget)
    return Certified(n, budget.main1 - budget.total_error, margin_log, budget)


def _log_samples(lo: int, hi: int, count: int) -> list[int]:
    if hi <= lo:
        return [lo]
    a, b = math.log(lo), math.log(hi)
    return sorted({min(hi, max(lo, round(math.exp(a + (b - a) * i / (count - 1))))) for i in range(count)})


def find_certified_threshold(n_lo: int, n_hi: int, samples: int = 200, linear_limit: int = 10**6) -> int:
    """Smallest n in [n_lo, n_hi] with a certificate, found by bisection.

    Bisection assumes the certificate switches on once and stays on. That is
    checked on a log-spaced sample of the bracket and on a dense window at the
    crossover; if the check fails the bracket is scanned linearly when it is
    short enough, and a ValueError is raised otherwise.
    """
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError(f"bad bracket ({n_lo}, {n_hi})")
    if positivity_certificate(n_lo):
        return n_lo
    if not positivity_certificate(n_hi):
        raise ValueError(f"no certificate at the top of the bracket n = {n_hi}")
    lo, hi = n_lo, n_hi  # invariant: lo uncertified, hi certified
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if positivity_certificate(mid):
            hi = mid
        else:
            lo = mid
    probe = _log_samples(n_lo, n_hi, samples) + list(range(max(n_lo, hi - 64), min(n_hi, hi + 64) + 1))
    if all(bool(positivity_certificate(m)) == (m >= hi) for m in probe):
        return hi
    if n_hi - n_lo <= linear_limit:
        for m in range(n_lo, n_hi + 1):
            if positivity_certificate(m):
                return m
    raise ValueError(f"certificate is not monotone on ({n_lo}, {n_hi}); bracket too wide to scan")
