"""Independent reference computations used to verify the rest of the library.

Nothing in here reuses the code paths it checks: residuals apply the
q-difference quotient literally and differentiate in x by finite
differences, the classical gamma function comes from scipy's adaptive
quadrature, and residues come from contour integrals of the q-gamma
function rather than the closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .qcore import QParameter, as_q, q_gamma
from .transforms import GridSpec


@dataclass(frozen=True)
class ResidualReport:
    """Largest PDE residual on the interior grid and where it occurs."""

    max_abs: float
    location: tuple[float, float]
    normalizer: float

    @property
    def relative(self) -> float:
        if self.normalizer == 0.0:
            return 0.0 if self.max_abs == 0.0 else math.inf
        return self.max_abs / self.normalizer


def _second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Richardson-extrapolated 5-point second derivative.

    ``values`` live on a grid of spacing h/2; the result is at every other
    node from index 4 to len-5 (the interior coarse nodes).
    """
    v = values
    c = slice(4, len(v) - 4, 2)

    def at(off):
        return v[4 + off:len(v) - 4 + off:2]

    d_h = (-at(-4) + 16 * at(-2) - 30 * v[c] + 16 * at(2) - at(4)) / (12 * h * h)
    hh = h / 2
    d_hh = (-at(-2) + 16 * at(-1) - 30 * v[c] + 16 * at(1) - at(2)) / (12 * hh * hh)
    return (16 * d_hh - d_h) / 15


def _literal_q_power(levels: Sequence[np.ndarray], t: float, q: float, order: int) -> np.ndarray:
    """Apply (y(t/q) - y(t)) / ((1-q) t) ``order`` times, literally.

    ``levels[j]`` holds y at time t / q**j.
    """
    vals = list(levels)
    for m in range(order):
        vals = [(vals[j + 1] - vals[j]) / ((1 - q) * t / q**j) for j in range(len(vals) - 1)]
    return vals[0]


def pde_residual(y: Callable, q: QParameter | float, x_grid: GridSpec,
                 t_points: Sequence[float], order: int,
                 t_max: Optional[float] = None) -> ResidualReport:
    """Residual of ``(D^q_t)^order y - y_xx`` on the interior of ``x_grid``.

    ``y(x, t)`` takes an array of x and a scalar t.  The time part needs y at
    t, t/q, ..., t/q**order; if ``t_max`` is given those must not exceed it.
    Interior means two coarse nodes in from each end.
    """
    qp = as_q(q)
    if order < 1:
        raise ValueError("order must be >= 1")
    if x_grid.n_points < 5:
        raise ValueError("residual needs at least 5 grid points")
    t_points = [float(t) for t in t_points]
    if any(t <= 0 for t in t_points):
        raise ValueError("t_points must be strictly positive")
    if t_max is not None:
        late = [t for t in t_points if t / qp.q**order > t_max]
        if late:
            raise ValueError(f"t_points {late} need y beyond t_max={t_max} (at t/q^{order})")
    fine = x_grid.refined(2)
    xf = fine.points
    x_int = x_grid.points[2:-2]
    h = x_grid.spacing
    worst, where, norm = 0.0, (math.nan, math.nan), 0.0
    for t in t_points:
        levels = [np.asarray(y(xf, t / qp.q**j), dtype=complex) * np.ones_like(xf)
                  for j in range(order + 1)]
        y0 = levels[0]
        time_part = _literal_q_power([lv[4:-4:2] for lv in levels], t, qp.q, order)
        res = np.abs(time_part - _second_derivative(y0, h))
        norm = max(norm, float(np.max(np.abs(y0[::2]))))
        i = int(np.argmax(res))
        if res[i] > worst or math.isnan(where[0]):
            worst, where = float(res[i]), (float(x_int[i]), t)
    return ResidualReport(worst, where, norm)


def pde_residual_diffusion(y: Callable, q: QParameter | float, x_grid: GridSpec,
                           t_points: Sequence[float], t_max: Optional[float] = None) -> ResidualReport:
    """Residual of the q-diffusion equation ``D^q_t y = y_xx``."""
    return pde_residual(y, q, x_grid, t_points, 1, t_max)


def pde_residual_wave(y: Callable, q: QParameter | float, x_grid: GridSpec,
                      t_points: Sequence[float], t_max: Optional[float] = None) -> ResidualReport:
    """Residual of the q-wave equation ``(D^q_t)^2 y = y_xx``."""
    return pde_residual(y, q, x_grid, t_points, 2, t_max)


def pde_residual_nth(y: Callable, q: QParameter | float, x_grid: GridSpec,
                     t_points: Sequence[float], n: int, t_max: Optional[float] = None) -> ResidualReport:
    return pde_residual(y, q, x_grid, t_points, n, t_max)


def classical_heat_solution(b: float, x, t: float):
    """Heat-equation solution grown from ``exp(-x^2/4b)/sqrt(2b)``."""
    if b <= 0:
        raise ValueError("b must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    tb = t + b
    return np.exp(-np.asarray(x) ** 2 / (4 * tb)) / math.sqrt(2 * tb)


def classical_wave_dalembert(f: Callable, g: Optional[Callable], x, t: float):
    """d'Alembert solution ``(f(x+t) + f(x-t))/2 + 1/2 int_{x-t}^{x+t} g``."""
    x_arr = np.asarray(x, dtype=float)
    out = 0.5 * (np.asarray(f(x_arr + t)) + np.asarray(f(x_arr - t)))
    if g is not None and t != 0:
        def g_scalar(u):
            return float(np.real(np.asarray(g(np.array([u])))[0]))

        extra = np.array([integrate.quad(g_scalar, xv - t, xv + t, epsabs=1e-13, epsrel=1e-12)[0]
                          for xv in np.atleast_1d(x_arr)])
        out = out + 0.5 * (extra if x_arr.ndim else extra[0])
    return out


def classical_gamma(s: complex, epsrel: float = 1e-13) -> complex:
    """Euler's gamma as ``int_0^inf t^(s-1) e^-t dt`` (requires Re s > 0).

    The algebraic endpoint at 0 is handled by quad's ``alg`` weight.
    """
    s = complex(s)
    if s.real <= 0:
        raise ValueError("classical_gamma quadrature needs Re s > 0")

    def parts(fn):
        near = integrate.quad(fn, 0, 1, weight="alg", wvar=(s.real - 1, 0),
                              epsabs=0, epsrel=epsrel, limit=200)[0]
        far = integrate.quad(lambda t: fn(t) * t ** (s.real - 1), 1, np.inf,
                             epsabs=0, epsrel=epsrel, limit=200)[0]
        return near + far

    # t^(i Im s) = exp(i Im s ln t) oscillates; split into real/imag parts
    re = parts(lambda t: math.exp(-t) * math.cos(s.imag * math.log(t)) if t > 0 else 0.0)
    if s.imag == 0:
        return re
    im = parts(lambda t: math.exp(-t) * math.sin(s.imag * math.log(t)) if t > 0 else 0.0)
    return complex(re, im)


def contour_residue_qgamma(q: QParameter | float, n: int, radius: float = 0.25,
                           n_nodes: int = 256) -> complex:
    """``(2 pi i)^-1`` times the integral of Gamma_q around a circle centred on -n.

    Trapezoid rule in the angle, which converges geometrically for this
    periodic analytic integrand.
    """
    qp = as_q(q)
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1) to isolate the pole")
    total = 0j
    for j in range(n_nodes):
        w = cmath.exp(2j * math.pi * j / n_nodes)
        total += q_gamma(qp, complex(-n) + radius * w) * w
    return total * radius / n_nodes
