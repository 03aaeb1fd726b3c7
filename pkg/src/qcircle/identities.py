"""Finite-sum identities for Hurwitz zeta and digamma at rationals alpha/k.

Each check returns the largest absolute residual over every valid theta, so
the suite doubles as a regression test for specfun.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .specfun import digamma, hurwitz_zeta, hurwitz_zeta_deriv, hurwitz_zeta_deriv_minus1

PI = math.pi


@lru_cache(maxsize=None)
def _zeta_row(s: float, k: int) -> np.ndarray:
    return np.array([hurwitz_zeta(s, a / k) for a in range(1, k + 1)])


@lru_cache(maxsize=None)
def _digamma_row(k: int) -> np.ndarray:
    return np.array([digamma(a / k) for a in range(1, k + 1)])


def _trig(k: int, theta: int):
    angles = 2 * PI * np.arange(1, k + 1) * theta / k
    return np.cos(angles), np.sin(angles)


def _fsum_dot(u, v) -> float:
    return math.fsum(u * v)


def trig_sum_residuals(k: int) -> dict:
    """Max |lhs - rhs| of the six trigonometric sums for one k."""
    z0, z2, psi = _zeta_row(0.0, k), _zeta_row(2.0, k), _digamma_row(k)
    out = dict.fromkeys(
        ["cos_zeta0", "cos_zeta2", "sin_zeta0", "sin_zeta2", "cos_digamma", "sin_digamma"], 0.0
    )

    def record(name, lhs, rhs):
        out[name] = max(out[name], abs(lhs - rhs))

    for theta in range(0, k + 1):
        c, s = _trig(k, theta)
        record("cos_zeta0", _fsum_dot(c, z0), -0.5)
        record("cos_zeta2", _fsum_dot(c, z2), PI**2 / 6 * (6 * theta**2 - 6 * k * theta + k**2))
        if not 1 <= theta <= k - 1:
            continue
        record("sin_zeta0", _fsum_dot(s, z0), 0.5 / math.tan(PI * theta / k))
        gap = hurwitz_zeta_deriv_minus1(theta / k) - hurwitz_zeta_deriv_minus1(1 - theta / k)
        record("sin_zeta2", _fsum_dot(s, z2), 2 * PI * k**2 * gap)
        record("cos_digamma", _fsum_dot(c, psi), k * math.log(2 * math.sin(PI * theta / k)))
        record("sin_digamma", _fsum_dot(s, psi), PI / 2 * (2 * theta - k))
    return out


def multiplication_residual(k: int, s_values=(-1.0, 0.0, 2.0)) -> float:
    """Max |sum_{l = c mod d} zeta(s, l/k) - (k/d)^s zeta(s, c/d)| over d | k, 1 <= c <= d."""
    worst = 0.0
    for s in s_values:
        row = _zeta_row(s, k)
        for d in (d for d in range(1, k + 1) if k % d == 0):
            for c in range(1, d + 1):
                lhs = math.fsum(row[c - 1 :: d])
                rhs = (k / d) ** s * hurwitz_zeta(s, c / d)
                worst = max(worst, abs(lhs - rhs))
    return worst


def multiplication_deriv_residual(k: int, d: int = 2) -> float:
    """Derivative of the multiplication identity at s = -1:
    sum_{l = c mod d} zeta'(-1, l/k) = (d/k) (zeta'(-1, c/d) + log(k/d) zeta(-1, c/d))."""
    if k % d:
        raise ValueError(f"d = {d} must divide k = {k}")
    worst = 0.0
    for c in range(1, d + 1):
        lhs = math.fsum(hurwitz_zeta_deriv_minus1(l / k) for l in range(c, k + 1, d))
        rhs = (d / k) * (hurwitz_zeta_deriv(-1.0, c / d) + math.log(k / d) * hurwitz_zeta(-1.0, c / d))
        worst = max(worst, abs(lhs - rhs))
    return worst


def run_suite(k_max: int = 100, mult_k_max: int = 60, tol: float = 1e-9, mult_tol: float = 1e-10) -> dict:
    """Run every identity; returns per-identity worst residuals and a pass flag."""
    worst: dict = {}
    for k in range(1, k_max + 1):
        for name, r in trig_sum_residuals(k).items():
            worst[name] = max(worst.get(name, 0.0), r)
    worst["multiplication"] = max(multiplication_residual(k) for k in range(1, mult_k_max + 1))
    passed = all(v <= tol for n, v in worst.items() if n != "multiplication")
    passed = passed and worst["multiplication"] <= mult_tol
    return {"k_max": k_max, "mult_k_max": mult_k_max, "worst": worst, "passed": passed}
