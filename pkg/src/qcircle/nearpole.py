"""Four-term expansions of log G near q = 1 and q = -1 with certified errors."""

from __future__ import annotations

import cmath
import math

from .mainterm import TauParam, farey_order
from .series import ComplexPoint, eval_log_G
from .specfun import LOG2, LOGPI, log_gamma

PI = math.pi

C_PLUS = -0.75 * LOG2 - 0.5 * LOGPI + log_gamma(0.25)
C_MINUS = -0.25 * LOG2 - 0.5 * LOGPI + log_gamma(0.75)
PLUS_ERROR_CONSTANT = 0.66
MINUS_ERROR_CONSTANT = 0.82


def near_pole_tau(X: float, Y: float = 0.0) -> TauParam:
    """TauParam inside the window |Y| <= 1/(2 pi X) where the expansions hold."""
    tp = TauParam(X, Y, farey_order(X))
    _check_window(tp)
    return tp


def _check_window(tp: TauParam) -> None:
    if not tp.X > 0:
        raise ValueError(f"X must be positive, got {tp.X}")
    limit = 1.0 / (2 * PI * tp.X)
    # a relative slack lets callers pass exactly +-1/(2 pi X)
    if abs(tp.Y) > limit * (1 + 1e-12):
        raise ValueError(f"|Y| <= 1/(2 pi X) = {limit:.6g} violated: Y = {tp.Y}")


def log_G_near_plus1(tau: TauParam) -> tuple[complex, float]:
    """(approximation of log G(e^{-tau}), bound on its error)."""
    _check_window(tau)
    t = tau.tau
    value = PI**2 / (48 * t) - 0.25 * cmath.log(t) + C_PLUS
    return value, PLUS_ERROR_CONSTANT * tau.X**-0.75


def log_G_near_minus1(tau: TauParam) -> tuple[complex, float]:
    """(approximation of log G(-e^{-tau}), bound on its error)."""
    _check_window(tau)
    t = tau.tau
    value = PI**2 / (48 * t) + 0.25 * cmath.log(t) + C_MINUS
    return value, MINUS_ERROR_CONSTANT * tau.X**-0.75


def true_log_G(tau: TauParam, at_minus_one: bool = False, tol: float = 1e-10) -> complex:
    """log G(+-e^{-tau}) from the convergent log-product sum."""
    return eval_log_G(ComplexPoint.from_tau(tau.X, tau.Y), at_minus_one, tol)


def near_pole_row(X: float, Y: float, at_minus_one: bool, tol: float = 1e-10) -> dict:
    tp = near_pole_tau(X, Y)
    approx, bound = (log_G_near_minus1 if at_minus_one else log_G_near_plus1)(tp)
    truth = true_log_G(tp, at_minus_one, tol)
    return {
        "pole": "-1" if at_minus_one else "+1",
        "X": X,
        "Y": Y,
        "approx_re": approx.real,
        "approx_im": approx.imag,
        "truth_re": truth.real,
        "truth_im": truth.imag,
        "abs_err": abs(truth - approx),
        "bound": bound,
    }
