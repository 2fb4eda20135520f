"""Quadrature helpers shared by the dwell and field modules.

Composite Simpson is hand-rolled rather than delegated to scipy because the
dwell integrals need (a) region edges pinned to panel boundaries and (b) a
log-domain accumulation path for opaque-barrier integrands whose values
overflow double precision.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import logsumexp


def simpson_nodes(lo: float, hi: float, panels: int) -> np.ndarray:
    """Uniform nodes for composite Simpson with `panels` panels (must be even)."""
    if panels < 2 or panels % 2:
        raise ValueError("composite Simpson needs an even, positive panel count")
    return np.linspace(lo, hi, panels + 1)


def simpson_weights(lo: float, hi: float, panels: int) -> np.ndarray:
    h = (hi - lo) / panels
    w = np.full(panels + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def composite_simpson(values: np.ndarray, lo: float, hi: float) -> float:
    """Integrate samples on the uniform node set returned by `simpson_nodes`."""
    panels = len(values) - 1
    return float(np.dot(simpson_weights(lo, hi, panels), values))


def simpson_log_abs2(values: np.ndarray, log_scales: np.ndarray,
                     lo: float, hi: float) -> float:
    """log of ∫ |f|² dx for f given as scaled samples  f = values·exp(log_scales).

    Works entirely in the log domain so integrands reaching exp(±1000) are fine.
    Returns -inf for an identically-zero integrand.
    """
    panels = len(values) - 1
    w = simpson_weights(lo, hi, panels)
    mag = np.abs(values)
    with np.errstate(divide="ignore"):
        terms = np.log(w) + 2.0 * np.log(mag) + 2.0 * np.asarray(log_scales, float)
    return float(logsumexp(terms))


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [lo, hi]."""
    x, w = _leggauss(int(n))
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Trapezoid weights for an arbitrary sorted grid."""
    x = np.asarray(x, float)
    w = np.empty_like(x)
    w[0] = 0.5 * (x[1] - x[0])
    w[-1] = 0.5 * (x[-1] - x[-2])
    w[1:-1] = 0.5 * (x[2:] - x[:-2])
    return w
