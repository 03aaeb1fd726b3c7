"""Exact coefficients, circle-method main terms and positivity certificates
for G(q) = 1/(q, -q^3; q^4)_inf."""

from .series import QSeries, g_series, PrecisionError
from .specfun import LogMagnitude

__all__ = ["QSeries", "g_series", "PrecisionError", "LogMagnitude"]
__version__ = "0.1.0"
