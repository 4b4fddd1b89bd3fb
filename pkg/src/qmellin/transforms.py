"""Fourier, Laplace and Mellin transforms and the q-derivative transform rules.

Fourier convention (symmetric)::

    F(xi) = 1/sqrt(2 pi) * int f(x) exp(+i xi x) dx
    f(x)  = 1/sqrt(2 pi) * int F(xi) exp(-i xi x) dxi

Sampled transforms use composite Simpson weights on uniform grids; the
Laplace and Mellin integrals use adaptive Gauss-Legendre panels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import quadrature
from .errors import (ConsistencyError, ConvergenceError, NonDecayingInput,
                     NonDecayingInputError)
from .qcore import (DEFAULT_CONTROL, QParameter, SeriesControl, as_q, q_exp,
                    q_number)
from .qderiv import as_evaluable

CONVENTION = "symmetric-1/sqrt(2pi)"
DECAY_TOL = 1e-10
_ROOT_2PI = math.sqrt(2 * math.pi)
_CHUNK_ROWS = 512


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D grid with ``n_points`` nodes from ``lo`` to ``hi``."""

    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ValueError(f"grid needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"grid needs n_points >= 2, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.lo, self.hi, factor * (self.n_points - 1) + 1)


def simpson_weights(grid: GridSpec) -> np.ndarray:
    """Composite Simpson weights; an even point count ends with a 3/8 panel."""
    n, h = grid.n_points, grid.spacing
    if n == 2:
        return np.array([h / 2, h / 2])
    if n == 4:
        return np.array([3, 9, 9, 3]) * h / 8
    w = np.zeros(n)
    m = n if n % 2 == 1 else n - 3  # points covered by the 1/3 rule
    w[:m:2] = 2.0
    w[1:m:2] = 4.0
    w[0] = w[m - 1] = 1.0
    w[:m] *= h / 3
    if m < n:
        w[m - 1:] += np.array([3, 9, 9, 3]) * h / 8
    return w


def trapezoid_weights(grid: GridSpec) -> np.ndarray:
    w = np.full(grid.n_points, grid.spacing)
    w[[0, -1]] *= 0.5
    return w


def _check_values(values, n_points: int) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (n_points,):
        raise ValueError(f"expected {n_points} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


@dataclass(frozen=True)
class GridFunction:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.values, self.grid.n_points))


@dataclass(frozen=True)
class SpectralField:
    """Fourier data on a xi grid, in the symmetric convention."""

    xi_grid: GridSpec
    values: np.ndarray
    error_estimate: float = 0.0
    convention: str = field(default=CONVENTION, init=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.values, self.xi_grid.n_points))


def _exp_matvec(rows: np.ndarray, cols: np.ndarray, vec: np.ndarray, sign: float) -> np.ndarray:
    """``sum_j vec_j exp(sign * i * rows_i * cols_j)``, chunked over rows."""
    out = np.empty(rows.shape, dtype=complex)
    for start in range(0, rows.size, _CHUNK_ROWS):
        r = rows[start:start + _CHUNK_ROWS]
        out[start:start + _CHUNK_ROWS] = np.exp(sign * 1j * np.outer(r, cols)) @ vec
    return out


def decay_ratio(values: np.ndarray) -> float:
    """Largest end-point magnitude relative to the peak magnitude."""
    mags = np.abs(values)
    peak = mags.max() if mags.size else 0.0
    if peak == 0.0:
        return 0.0
    return float(max(mags[0], mags[-1]) / peak)


def check_decay(values: np.ndarray, what: str = "input", strict: bool = False) -> float:
    """:func:`decay_ratio`, warning (or raising if ``strict``) above DECAY_TOL."""
    ratio = decay_ratio(values)
    if ratio >= DECAY_TOL:
        msg = f"{what} does not decay at the window ends (|f|_edge/|f|_max = {ratio:.2e})"
        if strict:
            raise NonDecayingInputError(msg)
        warnings.warn(msg, NonDecayingInput, stacklevel=3)
    return ratio


def fourier_forward(f, xi_grid: GridSpec, x_window: GridSpec, strict: bool = False) -> SpectralField:
    """``F(xi) = (2 pi)^-1/2 int f(x) exp(i xi x) dx`` over ``x_window``.

    ``f`` is sampled at the window nodes and integrated with Simpson's rule.
    The error estimate is the largest Simpson-vs-trapezoid difference.
    """
    f = as_evaluable(f)
    x = x_window.points
    fx = np.asarray(f(x), dtype=complex) * np.ones_like(x)
    check_decay(fx, "f", strict)
    xi = xi_grid.points
    simpson = _exp_matvec(xi, x, simpson_weights(x_window) * fx, +1.0) / _ROOT_2PI
    trap = _exp_matvec(xi, x, trapezoid_weights(x_window) * fx, +1.0) / _ROOT_2PI
    err = float(np.max(np.abs(simpson - trap)))
    return SpectralField(xi_grid, simpson, error_estimate=err)


def synthesize(field_: SpectralField, x) -> np.ndarray:
    """Inverse transform of ``field_`` evaluated at arbitrary points ``x``."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    xi = field_.xi_grid.points
    vec = simpson_weights(field_.xi_grid) * field_.values
    out = _exp_matvec(x_arr, xi, vec, -1.0) / _ROOT_2PI
    return out if np.ndim(x) else out[0]


def fourier_inverse(F: SpectralField, x_grid: GridSpec) -> GridFunction:
    """``f(x) = (2 pi)^-1/2 int F(xi) exp(-i xi x) dxi`` on the nodes of ``x_grid``."""
    return GridFunction(x_grid, synthesize(F, x_grid.points))


# --- Laplace ---------------------------------------------------------------

def laplace_numeric(h, s: complex, ctrl: SeriesControl = DEFAULT_CONTROL,
                    return_info: bool = False):
    """``int_0^inf h(t) exp(-s t) dt`` for ``Re s > 0``.

    The upper limit is extended by doubling intervals until the tail is below
    ``ctrl.rel_tol``; ``QuadResult.upper`` records where it stopped.
    """
    if complex(s).real <= 0:
        raise ValueError("laplace_numeric needs Re s > 0")
    h = as_evaluable(h)
    res = quadrature.integrate_to_infinity(
        lambda t: np.asarray(h(t)) * np.exp(-s * t), 0.0, ctrl.rel_tol,
        divergence_error=ConvergenceError)
    value = _maybe_real(res.value, s)
    return (value, res) if return_info else value


def _maybe_real(value: complex, *args):
    if all(np.isrealobj(np.asarray(a)) for a in args) and value.imag == 0.0:
        return value.real
    return value


def _segment_integral(hbar, start: complex, length: complex, rel_tol: float) -> complex:
    """``int hbar`` along the straight segment from ``start`` to ``start + length``."""
    res = quadrature.integrate(
        lambda tau: np.asarray(hbar(start + tau * length), dtype=complex), 0.0, 1.0, rel_tol)
    return length * res.value


def laplace_of_dq_forward_rhs(q: QParameter | float, hbar, h0: complex, s: complex,
                              ctrl: SeriesControl = DEFAULT_CONTROL):
    """Laplace transform of the forward q-derivative from the transform of h::

        1/(1-q) int_{qs}^{s} hbar(s') ds' - ln(1/q)/(1-q) h(0)
    """
    qp = as_q(q)
    hbar = as_evaluable(hbar)
    # length of [qs, s] is (1-q)s, which cancels the 1/(1-q) prefactor
    seg = _segment_integral(hbar, qp.q * s, qp.one_minus_q * s, ctrl.rel_tol)
    value = seg / qp.one_minus_q - qp.ln_inv_q / qp.one_minus_q * h0
    return _maybe_real(complex(value), s, h0)


def laplace_of_dq_standard_rhs(q: QParameter | float, hbar, h0: complex, s: complex,
                               ctrl: SeriesControl = DEFAULT_CONTROL):
    """Same for the standard q-derivative; the segment is ``[s, s/q]``."""
    qp = as_q(q)
    hbar = as_evaluable(hbar)
    seg = _segment_integral(hbar, s, s * qp.one_minus_q / qp.q, ctrl.rel_tol)
    value = seg / qp.one_minus_q - qp.ln_inv_q / qp.one_minus_q * h0
    return _maybe_real(complex(value), s, h0)


# --- Mellin ----------------------------------------------------------------

def mellin_numeric(h, s: complex, ctrl: SeriesControl = DEFAULT_CONTROL,
                   return_info: bool = False):
    """``int_0^inf h(t) t^(s-1) dt`` via ``t = exp(u)`` on both sides of t = 1.

    In u the integrand is ``h(e^u) e^(s u)``; power-law behaviour at 0 and at
    infinity both become exponential decay.

    Raises
    ------
    StripError
        If either half diverges, i.e. s is outside the convergence strip.
    """
    h = as_evaluable(h)

    def right(u):
        return np.asarray(h(np.exp(u))) * np.exp(s * u)

    def left(v):
        return np.asarray(h(np.exp(-v))) * np.exp(-s * v)

    with np.errstate(over="ignore", invalid="ignore"):
        r = quadrature.integrate_to_infinity(right, 0.0, ctrl.rel_tol)
        lft = quadrature.integrate_to_infinity(left, 0.0, ctrl.rel_tol)
    value = _maybe_real(r.value + lft.value, s)
    if return_info:
        return value, (lft, r)
    return value


def mellin_of_dq_forward_rhs(q: QParameter | float, hstar, s: complex):
    """Mellin transform of the forward q-derivative: ``-[s-1]_q h*(s-1)``."""
    return mellin_of_dq_forward_power_rhs(q, hstar, s, 1)


def mellin_of_dq_forward_power_rhs(q: QParameter | float, hstar, s: complex, n: int):
    """``(-1)^n [s-1]_q [s-2]_q ... [s-n]_q h*(s-n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    qp = as_q(q)
    factor = (-1) ** n
    for j in range(1, n + 1):
        factor = factor * q_number(qp, s - j)
    return factor * as_evaluable(hstar)(s - n)


def mellin_of_dq_standard_rhs(q: QParameter | float, hstar, s: complex, form: str = "direct"):
    """Mellin transform of the standard q-derivative.

    ``form="direct"`` gives ``[1-s]_q h*(s-1)``; ``"factored"`` the equivalent
    ``-q^(1-s) [s-1]_q h*(s-1)``.
    """
    qp = as_q(q)
    if form == "direct":
        factor = q_number(qp, 1 - s)
    elif form == "factored":
        factor = -np.exp((1 - s) * -qp.ln_inv_q) * q_number(qp, s - 1)
    else:
        raise ValueError(f"unknown form {form!r}")
    return factor * as_evaluable(hstar)(s - 1)


def mellin_of_dq_standard_power_rhs(q: QParameter | float, hstar, s: complex, n: int):
    """``[1-s]_q [2-s]_q ... [n-s]_q h*(s-n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    qp = as_q(q)
    factor = 1.0
    for j in range(1, n + 1):
        factor = factor * q_number(qp, j - s)
    return factor * as_evaluable(hstar)(s - n)


# --- inverse Mellin of xi^(-2s) Gamma_q(s) -------------------------------

def inverse_mellin_residue_sum(q: QParameter | float, xi: float, t: float,
                               ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Sum of the residues of ``xi^(-2s) Gamma_q(s) t^(-s)`` at s = 0, -1, -2, ...

    ``(1-q)/ln(1/q) * sum_n [(1-q) xi^2 t]^n / (q^-n; q)_n`` with every
    ``(q^-n; q)_n`` formed as a literal product.  The series alternates with
    terms far larger than its sum, so it is accumulated in exact rational
    arithmetic from the binary values of q, xi and t and rounded once.
    """
    qp = as_q(q)
    if t < 0:
        raise ValueError("t must be nonnegative")
    qf = Fraction(qp.q)
    x = (1 - qf) * Fraction(xi) ** 2 * Fraction(t)
    total = Fraction(1)
    term = Fraction(1)
    for n in range(1, ctrl.max_terms):
        # (q^-n; q)_n = prod_{j=1..n} (1 - q^-j)
        term = term * x / (1 - qf ** (-n))
        total += term
        if term == 0 or abs(float(term)) <= 1e-3 * ctrl.rel_tol * abs(float(total)):
            break
    else:
        raise ConvergenceError("residue sum did not converge")
    return qp.one_minus_q / qp.ln_inv_q * float(total)


def inverse_mellin_qgamma_kernel(q: QParameter | float, xi: float, t: float,
                                 ctrl: SeriesControl = DEFAULT_CONTROL, check: bool = False,
                                 check_tol: float = 1e-10) -> float:
    """Inverse Mellin transform of ``xi^(-2s) Gamma_q(s)`` at time t.

    Closed form ``(1-q)/ln(1/q) * E_q(-q (1-q) xi^2 t)``.  With ``check=True``
    the residue sum is computed as well and a :class:`ConsistencyError` is
    raised if the two disagree by more than ``check_tol`` (relative).
    """
    qp = as_q(q)
    if t < 0:
        raise ValueError("t must be nonnegative")
    value = qp.one_minus_q / qp.ln_inv_q * q_exp(qp, -qp.q * qp.one_minus_q * xi**2 * t, ctrl)
    if check:
        other = inverse_mellin_residue_sum(qp, xi, t, ctrl)
        scale = abs(value) if value != 0 else 1.0
        if abs(other - value) > check_tol * scale:
            raise ConsistencyError(
                f"residue sum {other!r} disagrees with closed form {value!r}")
    return value
