"""Composite Gauss-Legendre quadrature with panel doubling.

Integrands are called with 1-D numpy arrays of nodes and must return an
array of the same length (real or complex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, StripError

GL_ORDER = 16
MAX_PANELS = 4096
MAX_INTERVALS = 64
#: floor on the relative tolerance; chasing below this only measures rounding
TOL_FLOOR = 50 * np.finfo(float).eps
#: a stalled estimate is accepted as rounding-limited if its change is below this
NOISE_CEILING = 1e-9


@lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int
    upper: float = math.nan  # truncation point for semi-infinite integrals


def _panel_sum(f, a: float, b: float, n_panels: int, order: int):
    nodes, weights = _gauss_legendre(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    fx = np.asarray(f(x)).reshape(n_panels, order)
    return np.sum(fx * weights[None, :] * half[:, None])


def integrate(f, a: float, b: float, rel_tol: float = 1e-14, abs_tol: float = 0.0,
              order: int = GL_ORDER, max_panels: int = MAX_PANELS) -> QuadResult:
    """Integrate ``f`` over ``[a, b]``, doubling panels until two estimates agree.

    Converged when ``|I_2n - I_n| <= max(rel_tol * |I_2n|, abs_tol)``.  If
    the change stops shrinking for three doublings the integrand is taken to
    be rounding-limited and the estimate is accepted, provided the change is
    below ``NOISE_CEILING`` relative.
    """
    tol = max(rel_tol, TOL_FLOOR)
    n = 1
    prev = _panel_sum(f, a, b, n, order)
    history: list[float] = []
    while n < max_panels:
        n *= 2
        cur = _panel_sum(f, a, b, n, order)
        err = abs(cur - prev)
        if not np.isfinite(cur):
            raise ConvergenceError(f"non-finite integrand on [{a}, {b}]")
        if err <= max(tol * abs(cur), abs_tol):
            return QuadResult(complex(cur), float(err), n)
        stalled = len(history) >= 3 and err > 0.5 * min(history[-3:])
        if stalled and err <= max(NOISE_CEILING * abs(cur), abs_tol):
            return QuadResult(complex(cur), float(err), n)
        history.append(err)
        prev = cur
    raise ConvergenceError(
        f"quadrature on [{a}, {b}] not converged with {max_panels} panels (last change {err:.3e})")


def integrate_to_infinity(f, a: float = 0.0, rel_tol: float = 1e-14, width: float = 1.0,
                          divergence_error=StripError) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)`` on intervals of doubling width.

    Stops once an interval contributes less than ``rel_tol`` of the running
    total and the integrand at its right end is equally negligible.  Five
    consecutive growing contributions are treated as divergence.
    """
    tol = max(rel_tol, TOL_FLOOR)
    total = 0j
    err = 0.0
    panels = 0
    lo, w = a, width
    prev_mag = math.inf
    growing = 0
    for _ in range(MAX_INTERVALS):
        hi = lo + w
        part = integrate(f, lo, hi, rel_tol=tol, abs_tol=0.1 * tol * abs(total))
        total += part.value
        err += part.error
        panels += part.panels
        mag = abs(part.value)
        growing = growing + 1 if mag > prev_mag else 0
        if growing >= 5:
            raise divergence_error(f"integral over [{a}, inf) appears to diverge (beyond t={hi:g})")
        end = abs(complex(np.asarray(f(np.array([hi])))[0]))
        if total != 0 and mag <= tol * abs(total) and end * w <= tol * abs(total):
            return QuadResult(complex(total), err, panels, hi)
        if total == 0 and mag == 0 and end == 0:
            return QuadResult(0j, 0.0, panels, hi)
        prev_mag = mag
        lo, w = hi, 2 * w
    raise divergence_error(f"integral over [{a}, inf) not converged after {MAX_INTERVALS} intervals")
