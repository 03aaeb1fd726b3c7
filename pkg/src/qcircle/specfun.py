"""Real special functions: Hurwitz zeta and its s-derivative, digamma,
log-Gamma and the modified Bessel function I_nu in log-space.

Hurwitz zeta is evaluated by Euler-Maclaurin summation carried out in
mpmath arithmetic at ~32 significant digits, so that the large cancellations
appearing for negative s do not eat the double-precision result. Digamma and
log-Gamma run in plain floats.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath

# Constants to 30 significant digits; parsed once, no libm involvement.
PI_STR = "3.14159265358979323846264338328"
EULER_GAMMA_STR = "0.577215664901532860606512090082"
LOG2_STR = "0.693147180559945309417232121458"
LOGPI_STR = "1.14472988584940017414342735135"
LOG_2PI_STR = "1.83787706640934548356065947281"
GLAISHER_STR = "1.28242712910062263687534256887"
GAMMA_1_4_STR = "3.62560990822190831193068515587"
GAMMA_3_4_STR = "1.22541670246517764512909830336"
GAMMA_5_4_STR = "0.906402477055477077982671288967"

PI = float(PI_STR)
EULER_GAMMA = float(EULER_GAMMA_STR)
LOG2 = float(LOG2_STR)
LOGPI = float(LOGPI_STR)
LOG_2PI = float(LOG_2PI_STR)
GLAISHER = float(GLAISHER_STR)
GAMMA_1_4 = float(GAMMA_1_4_STR)
GAMMA_3_4 = float(GAMMA_3_4_STR)
GAMMA_5_4 = float(GAMMA_5_4_STR)

EM_TERMS = 12
EM_SHIFT = 15
_WORK_DPS = 32

BESSEL_SEAM = 30.0
BESSEL_ASYMPTOTIC_TERMS = 20


# ---------------------------------------------------------------------------
# LogMagnitude
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogMagnitude:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign`` is -1, 0 or +1; ``log_abs`` is ignored (kept at -inf) when the
    sign is 0. This is the carrier for quantities like I_{-3/4}(x) at
    x ~ 10^7, which are far outside binary64 range.
    """

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_abs", -math.inf)
        elif math.isnan(self.log_abs):
            raise ValueError("log_abs is NaN")

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0, -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "LogMagnitude":
        if x == 0:
            return cls.zero()
        if math.isnan(x):
            raise ValueError("cannot encode NaN")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "LogMagnitude":
        return cls(sign, log_abs)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf

    def __neg__(self) -> "LogMagnitude":
        return LogMagnitude(-self.sign, self.log_abs)

    def __abs__(self) -> "LogMagnitude":
        return LogMagnitude(abs(self.sign), self.log_abs)

    def __add__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_abs >= other.log_abs else (other, self)
        d = lo.log_abs - hi.log_abs
        if hi.sign == lo.sign:
            return LogMagnitude(hi.sign, hi.log_abs + math.log1p(math.exp(d)))
        if d == 0.0:
            return LogMagnitude.zero()
        return LogMagnitude(hi.sign, hi.log_abs + math.log1p(-math.exp(d)))

    def __sub__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        s = self.sign * other.sign
        if s == 0:
            return LogMagnitude.zero()
        return LogMagnitude(s, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)

    def _key(self):
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.log_abs)

    def __lt__(self, other: "LogMagnitude") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogMagnitude") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "LogMagnitude") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "LogMagnitude") -> bool:
        return self._key() >= other._key()


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _bernoulli_coeffs():
    # B_{2j} / (2j)! for j = 1..EM_TERMS, at the working precision.
    with mpmath.workdps(_WORK_DPS):
        return tuple(
            mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) for j in range(1, EM_TERMS + 1)
        )


def _rising_factorials(s):
    """Yield ((s)_n, d/ds (s)_n) for n = 1, 3, 5, ..., 2*EM_TERMS - 1.

    The derivative is carried by the product rule, so zero factors
    (s a non-positive integer) need no division.
    """
    value = mpmath.mpf(1)
    deriv = mpmath.mpf(0)
    for i in range(2 * EM_TERMS - 1):
        f = s + i
        deriv = deriv * f + value
        value = value * f
        if i % 2 == 0:
            yield value, deriv


def _em_shift(alpha: float) -> int:
    return max(0, math.ceil(EM_SHIFT - alpha))


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


def hurwitz_zeta(s: float, alpha: float) -> float:
    """zeta(s, alpha) = sum_{n>=0} (n + alpha)^(-s) for s != 1, 0 < alpha <= 1."""
    if s == 1:
        raise ValueError("hurwitz_zeta has a pole at s = 1")
    _check_alpha(alpha)
    with mpmath.workdps(_WORK_DPS):
        sm = mpmath.mpf(s)
        a = mpmath.mpf(alpha)
        n_shift = _em_shift(alpha)
        total = mpmath.fsum((n + a) ** (-sm) for n in range(n_shift))
        w = n_shift + a
        total += w ** (1 - sm) / (sm - 1) + w ** (-sm) / 2
        wpow = w ** (1 - sm)
        w2 = w * w
        for c, (poch, _) in zip(_bernoulli_coeffs(), _rising_factorials(sm)):
            wpow /= w2
            if poch == 0:
                break
            total += c * poch * wpow
        return float(total)


def hurwitz_zeta_deriv(s: float, alpha: float) -> float:
    """d/ds zeta(s, alpha), by termwise differentiation of Euler-Maclaurin."""
    if s == 1:
        raise ValueError("hurwitz_zeta_deriv has a pole at s = 1")
    _check_alpha(alpha)
    with mpmath.workdps(_WORK_DPS):
        sm = mpmath.mpf(s)
        a = mpmath.mpf(alpha)
        n_shift = _em_shift(alpha)
        total = -mpmath.fsum((n + a) ** (-sm) * mpmath.log(n + a) for n in range(n_shift))
        w = n_shift + a
        lw = mpmath.log(w)
        total += -(w ** (1 - sm)) * lw / (sm - 1) - w ** (1 - sm) / (sm - 1) ** 2
        total += -(w ** (-sm)) * lw / 2
        wpow = w ** (1 - sm)
        w2 = w * w
        for c, (poch, dpoch) in zip(_bernoulli_coeffs(), _rising_factorials(sm)):
            wpow /= w2
            total += c * wpow * (dpoch - poch * lw)
        return float(total)


def hurwitz_zeta_deriv_minus1(alpha: float) -> float:
    """zeta'(-1, alpha), the ingredient of the imaginary part of the main term."""
    return hurwitz_zeta_deriv(-1, alpha)


# ---------------------------------------------------------------------------
# digamma, log-Gamma
# ---------------------------------------------------------------------------

# B_{2j} for j = 1..8
_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)
_ASYMPTOTIC_FLOOR = 15.0


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    shifts = []
    while x < _ASYMPTOTIC_FLOOR:
        shifts.append(-1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        series += b / (2 * j) * p
        p *= inv2
    return math.fsum(shifts + [math.log(x), -0.5 / x, -series])


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0 (Stirling series after an upward shift)."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    shifts = []
    while x < _ASYMPTOTIC_FLOOR:
        shifts.append(-math.log(x))
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        series += b / (2 * j * (2 * j - 1)) * p
        p *= inv2
    return math.fsum(shifts + [(x - 0.5) * math.log(x), -x, 0.5 * LOG_2PI, series])


def gamma_sign_log(x: float) -> tuple[int, float]:
    """(sign, log|Gamma(x)|) for any real x that is not a non-positive integer."""
    if x > 0:
        return 1, log_gamma(x)
    if x == math.floor(x):
        raise ValueError(f"Gamma has a pole at {x}")
    sign = 1
    logs = []
    while x <= 0:
        if x < 0:
            sign = -sign
        logs.append(math.log(abs(x)))
        x += 1.0
    return sign, log_gamma(x) - math.fsum(logs)


# ---------------------------------------------------------------------------
# Modified Bessel function of the first kind
# ---------------------------------------------------------------------------


def _bessel_i_series(nu: float, x: float) -> LogMagnitude:
    # I_nu(x) = t0 * sum_k r_k with t0 = (x/2)^nu / Gamma(nu+1) and
    # r_{k+1} = r_k (x/2)^2 / ((k+1)(k+nu+1)); the sum is kept rescaled.
    g_sign, g_log = gamma_sign_log(nu + 1.0)
    log_t0 = nu * math.log(x / 2.0) - g_log
    z = (x / 2.0) ** 2
    r = 1.0
    terms = [1.0]
    running = 1.0
    scale_log = 0.0
    k = 0
    while True:
        r *= z / ((k + 1) * (k + nu + 1))
        k += 1
        terms.append(r)
        running += r
        if abs(r) > 1e250:
            scale_log += math.log(1e250)
            terms = [t / 1e250 for t in terms]
            r /= 1e250
            running /= 1e250
        if k > x and abs(r) < 1e-18 * abs(running):
            break
        if k > 100000:
            raise RuntimeError("Bessel power series failed to converge")
    total = math.fsum(terms)
    if total == 0.0:
        return LogMagnitude.zero()
    sign = g_sign * (1 if total > 0 else -1)
    return LogMagnitude(sign, log_t0 + scale_log + math.log(abs(total)))


def _bessel_i_asymptotic(nu: float, x: float) -> LogMagnitude:
    mu = 4.0 * nu * nu
    term = 1.0
    terms = [1.0]
    for k in range(1, BESSEL_ASYMPTOTIC_TERMS + 1):
        term *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        terms.append(term)
    corr = math.fsum(terms)
    return LogMagnitude(1, x - 0.5 * (LOG_2PI + math.log(x)) + math.log(corr))


def bessel_i_log(order: float, x: float, *, regime: str = "auto") -> LogMagnitude:
    """I_order(x) as a LogMagnitude.

    Power series below ``BESSEL_SEAM`` and the large-argument expansion
    e^x / sqrt(2 pi x) (1 + ...) above it. ``regime`` forces one branch
    ("series" or "asymptotic"); it exists for seam checks.
    """
    if not x > 0:
        raise ValueError(f"bessel_i_log requires x > 0, got {x}")
    if order < 0 and order == math.floor(order):
        order = -order  # I_{-n} = I_n
    if regime == "auto":
        regime = "asymptotic" if x >= max(BESSEL_SEAM, order * order) else "series"
    if regime == "series":
        return _bessel_i_series(order, x)
    if regime == "asymptotic":
        return _bessel_i_asymptotic(order, x)
    raise ValueError(f"unknown regime {regime!r}")
