"""Exact truncated q-series and numeric evaluation of log-products.

Coefficients are Python integers held in numpy object arrays while a series is
being built. A division by (1 - q^p) is a strided cumulative sum, one
vectorised sweep. g(n) itself is the product of two Durfee-square expansions
multiplied once as packed big integers (GMP via gmpy2).
"""

from __future__ import annotations

import cmath
import io
import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
import numpy as np

_EPS = np.finfo(float).eps


class PrecisionError(ValueError):
    """Raised when a requested tolerance is below the double-precision floor."""

    def __init__(self, message: str, floor: float):
        super().__init__(message)
        self.floor = floor


@dataclass(frozen=True)
class QSeries:
    """Truncated power series sum_{n<=N} coeffs[n] q^n with integer coefficients."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a QSeries holds at least the constant term")

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> "QSeries":
        return cls(tuple(int(v) for v in values))

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        if not 0 <= order <= self.truncation_order:
            raise ValueError(f"cannot truncate order {self.truncation_order} series to {order}")
        return QSeries(self.coeffs[: order + 1])

    def __mul__(self, other: "QSeries") -> "QSeries":
        # Schoolbook product, truncated to the smaller order.
        n = min(self.truncation_order, other.truncation_order)
        a, b = self.coeffs, other.coeffs
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return QSeries(tuple(out))

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        if header:
            buf.write("n,g_n\n")
        for n, c in enumerate(self.coeffs):
            buf.write(f"{n},{c}\n")
        return buf.getvalue()

    def to_bytes(self) -> bytes:
        return encode_qser1(self.coeffs)

    @classmethod
    def from_bytes(cls, data: bytes) -> "QSeries":
        return cls(tuple(decode_qser1(data)))


# ---------------------------------------------------------------------------
# binary golden-file format
# ---------------------------------------------------------------------------

QSER1_MAGIC = b"QSER1"


def encode_coefficient(c: int) -> bytes:
    """Sign byte (0 non-negative, 1 negative), u32 limb count, u32 LE limbs."""
    mag = abs(c)
    n_limbs = (mag.bit_length() + 31) // 32
    return struct.pack("<BI", 1 if c < 0 else 0, n_limbs) + mag.to_bytes(4 * n_limbs, "little")


def encode_qser1(coeffs: Sequence[int]) -> bytes:
    parts = [QSER1_MAGIC, struct.pack("<Q", len(coeffs) - 1)]
    parts.extend(encode_coefficient(int(c)) for c in coeffs)
    return b"".join(parts)


def decode_qser1(data: bytes) -> list[int]:
    if data[:5] != QSER1_MAGIC:
        raise ValueError("not a QSER1 file (bad magic)")
    if len(data) < 13:
        raise ValueError("truncated QSER1 header")
    (order,) = struct.unpack_from("<Q", data, 5)
    pos = 13
    out = []
    for _ in range(order + 1):
        if pos + 5 > len(data):
            raise ValueError("truncated QSER1 body")
        sign, n_limbs = struct.unpack_from("<BI", data, pos)
        pos += 5
        if sign not in (0, 1):
            raise ValueError(f"bad sign byte {sign}")
        end = pos + 4 * n_limbs
        if end > len(data):
            raise ValueError("truncated QSER1 limb data")
        mag = int.from_bytes(data[pos:end], "little")
        pos = end
        out.append(-mag if sign else mag)
    if pos != len(data):
        raise ValueError("trailing bytes after QSER1 body")
    return out


# ---------------------------------------------------------------------------
# recurrence engine
# ---------------------------------------------------------------------------


def _unit_array(N: int) -> np.ndarray:
    c = np.empty(N + 1, dtype=object)
    c[:] = 0
    c[0] = 1
    return c


def _divide_by_one_minus(c: np.ndarray, p: int) -> None:
    """In place: c <- c / (1 - q^p), i.e. c[n] += c[n-p] for increasing n."""
    L = len(c)
    if p >= L:
        return
    full = (L // p) * p
    block = c[:full].reshape(-1, p)
    np.cumsum(block, axis=0, out=block)
    if full < L:
        c[full:] += c[full - p : L - p]


def _multiply_by_one_minus(c: np.ndarray, p: int) -> None:
    """In place: c <- c (1 - q^p). numpy buffers the overlapping slices."""
    if p < len(c):
        c[p:] -= c[:-p]


def _check_progression(a: int, M: int, N: int) -> None:
    if M < 1:
        raise ValueError(f"modulus M must be positive, got {M}")
    if not 1 <= a <= M:
        raise ValueError(f"residue a must satisfy 1 <= a <= M, got a={a}, M={M}")
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")


def _freeze(c: np.ndarray) -> QSeries:
    return QSeries(tuple(int(v) for v in c))


def inv_pochhammer_series(a: int, M: int, N: int) -> QSeries:
    """Coefficients of 1/(q^a; q^M)_inf to order N (partitions into parts = a mod M)."""
    _check_progression(a, M, N)
    c = _unit_array(N)
    for p in range(a, N + 1, M):
        _divide_by_one_minus(c, p)
    return _freeze(c)


def inv_neg_pochhammer_series(a: int, M: int, N: int) -> QSeries:
    """Coefficients of 1/(-q^a; q^M)_inf to order N.

    Each part applies c[n] -= c[n-p]; this is done as multiplication by
    (1 - q^p) followed by division by (1 - q^{2p}).
    """
    _check_progression(a, M, N)
    c = _unit_array(N)
    for p in range(a, N + 1, M):
        _multiply_by_one_minus(c, p)
        _divide_by_one_minus(c, 2 * p)
    return _freeze(c)


def g_array_strided(N: int) -> np.ndarray:
    """g(0..N) by one strided pass per part of (q^3;q^4) / ((q;q^4)(q^6;q^8)).

    Quadratic in N; kept as an independent check on ``g_array``.
    """
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    c = _unit_array(N)
    for p in range(3, N + 1, 4):
        _multiply_by_one_minus(c, p)
    for p in range(1, N + 1, 4):
        _divide_by_one_minus(c, p)
    for p in range(6, N + 1, 8):
        _divide_by_one_minus(c, p)
    return c


def durfee_inverse(a: int, M: int, N: int, negate: bool = False) -> np.ndarray:
    """1/(s q^a; q^M)_inf to order N with s = -1 if ``negate`` else 1.

    Durfee-square expansion: 1/(y;Q)_inf = sum_k y^k Q^{k^2-k} / ((Q;Q)_k (y;Q)_k)
    with Q = q^M and y = s q^a. Only about sqrt(N/M) terms reach degree N and
    each costs two strided passes.
    """
    _check_progression(a, M, N)
    total = np.empty(N + 1, dtype=object)
    total[:] = 0
    r = _unit_array(N)
    k = 0
    while True:
        shift = a * k + M * k * (k - 1)
        if negate and k % 2:
            total[shift:] -= r
        else:
            total[shift:] += r
        k += 1
        nxt = a * k + M * k * (k - 1)
        if nxt > N:
            return total
        r = r[: N - nxt + 1].copy()
        _divide_by_one_minus(r, M * k)
        p = a + M * (k - 1)
        if negate:
            _multiply_by_one_minus(r, p)
            _divide_by_one_minus(r, 2 * p)
        else:
            _divide_by_one_minus(r, p)


def _pack(values, slot_bytes: int) -> gmpy2.mpz:
    return gmpy2.mpz(int.from_bytes(b"".join(int(v).to_bytes(slot_bytes, "little") for v in values), "little"))


def _unpack(x, slot_bytes: int, count: int) -> list[int]:
    buf = int(x).to_bytes(slot_bytes * max(count, 1) + (int(x).bit_length() + 7) // 8, "little")
    return [int.from_bytes(buf[i * slot_bytes : (i + 1) * slot_bytes], "little") for i in range(count)]


def kronecker_multiply(f: Sequence[int], g: Sequence[int], N: int) -> list[int]:
    """Coefficients 0..N of f*g for integer sequences, via one big-integer product per sign pair.

    Each sequence is split into nonnegative and nonpositive parts and packed
    into fixed-width slots wide enough that no slot of a product overflows.
    """
    f = [int(v) for v in f[: N + 1]]
    g = [int(v) for v in g[: N + 1]]
    width = max(abs(v) for v in f).bit_length() + max(abs(v) for v in g).bit_length()
    slot = (width + (N + 1).bit_length() + 8) // 8
    out = [0] * (N + 1)
    parts_f = [(1, [max(v, 0) for v in f]), (-1, [max(-v, 0) for v in f])]
    parts_g = [(1, [max(v, 0) for v in g]), (-1, [max(-v, 0) for v in g])]
    for sf, pf in parts_f:
        if not any(pf):
            continue
        packed_f = _pack(pf, slot)
        for sg, pg in parts_g:
            if not any(pg):
                continue
            prod = _unpack(packed_f * _pack(pg, slot), slot, N + 1)
            sign = sf * sg
            out = [o + sign * v for o, v in zip(out, prod)]
    return out


def g_array(N: int) -> np.ndarray:
    """g(0..N) as an object array: 1/(q;q^4)_inf times 1/(-q^3;q^4)_inf."""
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    first = durfee_inverse(1, 4, N)
    second = durfee_inverse(3, 4, N, negate=True)
    c = np.empty(N + 1, dtype=object)
    c[:] = kronecker_multiply(first, second, N)
    return c


def g_series(N: int) -> QSeries:
    """Exact g(0..N) for G(q) = 1/(q, -q^3; q^4)_inf."""
    return _freeze(g_array(N))


def naive_product_oracle(factors: Sequence[tuple], N: int) -> QSeries:
    """Expand prod over factors of prod_{k>=0} 1/(1 - sign q^{a+kM}) by long multiplication.

    ``factors`` holds (sign, a, M) with sign +1 (or "+") for 1/(q^a;q^M) and
    -1 (or "-") for 1/(-q^a;q^M). Every part is expanded as its full truncated
    geometric series and multiplied in; no recurrence is used.
    """
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    poly = np.empty(N + 1, dtype=object)
    poly[:] = 0
    poly[0] = 1
    for sign, a, M in factors:
        s = {"+": 1, "-": -1}.get(sign, sign)
        if s not in (1, -1):
            raise ValueError(f"factor sign must be +1 or -1, got {sign!r}")
        if M < 1 or a < 1:
            raise ValueError(f"bad factor ({sign}, {a}, {M})")
        for p in range(a, N + 1, M):
            # geometric series sum_j (s q^p)^j, j*p <= N
            product = poly.copy()
            for j in range(1, N // p + 1):
                shift = j * p
                coef = s**j
                product[shift:] += coef * poly[: N + 1 - shift]
            poly = product
    return QSeries(tuple(int(v) for v in poly))


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexPoint:
    """q = exp(modulus_log + i*angle) with modulus_log < 0.

    The angle is normalised to (-pi, pi] so that points just below the
    positive real axis keep full relative precision.
    """

    modulus_log: float
    angle: float

    def __post_init__(self):
        if not self.modulus_log < 0:
            raise ValueError(f"|q| must be < 1 (modulus_log < 0), got {self.modulus_log}")
        object.__setattr__(self, "angle", _wrap_angle(self.angle))

    @classmethod
    def from_tau(cls, X: float, Y: float = 0.0, h: int = 0, k: int = 1) -> "ComplexPoint":
        """q = exp(-tau + 2 pi i h/k) with tau = 1/X + 2 pi i Y."""
        turns = math.fmod(h, k) / k - Y
        return cls(-1.0 / X, 2.0 * math.pi * turns)

    @classmethod
    def from_complex(cls, q: complex) -> "ComplexPoint":
        r = abs(q)
        if r == 0 or r >= 1:
            raise ValueError(f"need 0 < |q| < 1, got {q}")
        return cls(math.log(r), cmath.phase(q))

    @property
    def X(self) -> float:
        return -1.0 / self.modulus_log

    def rotated(self, by: float) -> "ComplexPoint":
        return ComplexPoint(self.modulus_log, self.angle + by)

    def to_complex(self) -> complex:
        return cmath.exp(complex(self.modulus_log, self.angle))


def _wrap_angle(theta: float) -> float:
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


# Veltkamp split constant and Cody-Waite pieces of 2*pi (26 + 26 + 53 bits).
_SPLIT = 134217729.0  # 2**27 + 1
_TWO_PI_1 = float.fromhex("0x1.921fb58000000p+2")
_TWO_PI_2 = float.fromhex("-0x1.dde9740000000p-25")
_TWO_PI_3 = float.fromhex("0x1.1a62633145c07p-52")


def _split(x: float) -> tuple[float, float]:
    t = _SPLIT * x
    hi = t - (t - x)
    return hi, x - hi


def _phases(m: np.ndarray, theta: float) -> np.ndarray:
    """m*theta reduced into [-pi, pi] with ~1 ulp absolute error, for m < 2^26."""
    hi, lo = _split(theta)
    mf = m.astype(float)
    a = mf * hi  # exact: 26-bit by 27-bit product
    j = np.rint(mf * theta / (2.0 * math.pi))
    r = (a - j * _TWO_PI_1) + (mf * lo - j * _TWO_PI_2) - j * _TWO_PI_3
    return r


def _neg_log_one_minus(m: np.ndarray, modulus_log: float, theta: float):
    """Return -log(1 - q^m) and |q^m| / |1 - q^m| for each m."""
    x = m.astype(float) * modulus_log
    y = _phases(m, theta)
    em1 = np.expm1(x)
    s_half = np.sin(0.5 * y)
    # expm1(x + iy) without cancellation near z = 0
    re = em1 * np.cos(y) - 2.0 * s_half * s_half
    im = np.exp(x) * np.sin(y)
    one_minus = -(re + 1j * im)
    terms = -np.log(one_minus)
    sensitivity = np.exp(x) / np.abs(one_minus)
    return terms, sensitivity


def phi_cutoff(modulus_log: float, tol: float) -> int:
    """Largest m that must be summed so the tail is below tol/2.

    Tail bound: sum_{m > m0} rho^m / (1 - rho) = rho^(m0+1) / (1 - rho)^2.
    """
    one_minus_rho = -math.expm1(modulus_log)
    need = math.log(2.0 / (tol * one_minus_rho**2))
    return max(0, math.ceil(need / -modulus_log))


def eval_phi(a: int, M: int, q: ComplexPoint, tol: float = 1e-10) -> complex:
    """log 1/(q^a; q^M)_inf = sum_{m = a mod M} -log(1 - q^m), to absolute accuracy tol.

    The inner sum over powers is done in closed form; the outer sum is cut
    where the geometric tail bound drops below tol/2. Raises PrecisionError
    when double-precision rounding alone would exceed the request.
    """
    if M < 1 or not 1 <= a <= M:
        raise ValueError(f"need 1 <= a <= M, got a={a}, M={M}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    m_max = phi_cutoff(q.modulus_log, tol)
    if m_max < a:
        return 0j
    if m_max >= 2**26:
        raise PrecisionError(
            f"X = {q.X:g} needs {m_max} terms; beyond the exact phase-reduction range",
            floor=math.inf,
        )
    m = np.arange(a, m_max + 1, M, dtype=np.int64)
    terms, sens = _neg_log_one_minus(m, q.modulus_log, q.angle)
    floor = 8.0 * _EPS * float(np.sum(np.abs(terms)) + np.sum(sens))
    if floor > tol / 2:
        raise PrecisionError(
            f"tol={tol:g} unattainable at X={q.X:g}; rounding floor is about {2 * floor:.3g}",
            floor=2 * floor,
        )
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def eval_log_G(q: ComplexPoint, at_minus_one: bool = False, tol: float = 1e-10) -> complex:
    """log G(q) (or log G(-q)) for G = 1/(q, -q^3; q^4)_inf.

    log G(q) = Phi_{1,4}(q) + Phi_{3,4}(-q) since (-q)^m = -q^m for odd m.
    """
    p = q.rotated(math.pi) if at_minus_one else q
    return eval_phi(1, 4, p, tol / 2) + eval_phi(3, 4, p.rotated(math.pi), tol / 2)


def eval_log_G_real(X: float, at_minus_one: bool = False, tol: float = 1e-10) -> float:
    """log G(+-e^{-1/X}); G is positive there, so the value is real."""
    return eval_log_G(ComplexPoint(-1.0 / X, 0.0), at_minus_one, tol).real
