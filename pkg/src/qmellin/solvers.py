"""Fourier-Mellin spectral solvers for q-diffusion, q-wave and n-th order equations.

All three equations have the form ``(D^q_t)^n y = y_xx`` on the real line.
In Fourier space each mode evolves by a combination of q-exponentials
``E_q(c t)``, which are exact eigenfunctions of the forward q-derivative::

    D^q_t E_q(c t) = c / (q (1 - q)) * E_q(c t)

so every synthesized solution satisfies the equation mode by mode.  The
x-integral is a Simpson sum over the xi grid; solutions can be evaluated
at any (x, t) through :class:`SpectralSolution`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import oracle
from .errors import ConditioningError, ConvergenceError
from .qcore import (DEFAULT_CONTROL, QParameter, SeriesControl, as_q, q_cos,
                    q_exp, q_sin, q_shifted_factorial)
from .qderiv import as_evaluable
from .transforms import (GridFunction, GridSpec, SpectralField, decay_ratio,
                         fourier_forward, synthesize)

DEFAULT_X_GRID = GridSpec(-12.0, 12.0, 2049)
DEFAULT_XI_GRID = GridSpec(-12.0, 12.0, 2049)
#: largest condition number accepted for the mode-phase Vandermonde system
MAX_CONDITION = 1e8
#: tolerance for the even-symmetry precondition of the n >= 3 solver
SYMMETRY_TOL = 1e-12


def _times(times: Sequence[float]) -> tuple[float, ...]:
    out = tuple(float(t) for t in times)
    if not out:
        raise ValueError("times must not be empty")
    if any(not math.isfinite(t) or t < 0 for t in out):
        raise ValueError(f"times must be finite and nonnegative, got {out}")
    return out


@dataclass(frozen=True)
class DiffusionProblem:
    """``D^q_t y = y_xx`` with ``y(x, 0) = f(x)``."""

    q: QParameter
    f: Callable
    times: Sequence[float]
    x_grid: GridSpec = DEFAULT_X_GRID
    xi_grid: GridSpec = DEFAULT_XI_GRID

    def __post_init__(self):
        object.__setattr__(self, "q", as_q(self.q))
        object.__setattr__(self, "times", _times(self.times))


@dataclass(frozen=True)
class WaveProblem:
    """``(D^q_t)^2 y = y_xx`` with ``y(x, 0) = f`` and ``D^q_t y(x, 0) = g``.

    ``g=None`` means zero initial q-velocity.
    """

    q: QParameter
    f: Callable
    times: Sequence[float]
    g: Optional[Callable] = None
    x_grid: GridSpec = DEFAULT_X_GRID
    xi_grid: GridSpec = DEFAULT_XI_GRID

    def __post_init__(self):
        object.__setattr__(self, "q", as_q(self.q))
        object.__setattr__(self, "times", _times(self.times))


@dataclass(frozen=True)
class NthOrderProblem:
    """``(D^q_t)^n y = y_xx`` with ``(D^q_t)^k y(x, 0) = g_k``, ``g_0 = f``.

    ``g`` lists g_1 .. g_(n-1); missing or ``None`` entries are zero.  Only
    n in {2, 3, 4} and even initial data are supported.
    """

    n: int
    q: QParameter
    f: Callable
    times: Sequence[float]
    g: Sequence[Optional[Callable]] = ()
    x_grid: GridSpec = DEFAULT_X_GRID
    xi_grid: GridSpec = DEFAULT_XI_GRID

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError(f"n must be 2, 3 or 4, got {self.n}")
        if len(self.g) > self.n - 1:
            raise ValueError(f"at most {self.n - 1} initial q-derivatives for n={self.n}")
        object.__setattr__(self, "q", as_q(self.q))
        object.__setattr__(self, "times", _times(self.times))
        object.__setattr__(self, "g", tuple(self.g) + (None,) * (self.n - 1 - len(self.g)))


class SpectralSolution:
    """A solution ``y(x, t)`` given by its Fourier transform ``Y(xi, t)``.

    ``spectrum(t)`` returns Y on the xi grid; calling the object synthesizes
    y at arbitrary x for a scalar t.
    """

    def __init__(self, xi_grid: GridSpec, spectrum: Callable[[float], np.ndarray]):
        self.xi_grid = xi_grid
        self._spectrum = spectrum

    def spectrum(self, t: float) -> SpectralField:
        return SpectralField(self.xi_grid, self._spectrum(float(t)))

    def __call__(self, x, t: float):
        return synthesize(self.spectrum(t), x)

    def on_grid(self, x_grid: GridSpec, t: float) -> GridFunction:
        return GridFunction(x_grid, self(x_grid.points, t))


@dataclass
class SolveReport:
    """Solution grids per requested time plus oracle residual diagnostics.

    ``residual_max`` is the oracle's relative residual at the positive
    requested times (0.0 when only t = 0 was requested).
    """

    times: tuple[float, ...]
    solutions: list[GridFunction]
    solution: SpectralSolution
    residual: Optional[oracle.ResidualReport]
    residual_max: float
    diagnostics: dict = field(default_factory=dict)


def _transform(h, x_grid: GridSpec, xi_grid: GridSpec, strict: bool) -> SpectralField:
    if h is None:
        return SpectralField(xi_grid, np.zeros(xi_grid.n_points))
    return fourier_forward(as_evaluable(h), xi_grid, x_grid, strict)


def _decay(h, x_grid: GridSpec) -> float:
    x = x_grid.points
    return decay_ratio(np.asarray(as_evaluable(h)(x)) * np.ones_like(x))


def _checked(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise ConvergenceError(f"{what} overflowed; reduce the xi window or the time range")
    return values


def _assemble(times, x_grid, solution: SpectralSolution, q: QParameter, order: int,
              diagnostics: dict, residual: bool) -> SolveReport:
    start = time.perf_counter()
    grids = [solution.on_grid(x_grid, t) for t in times]
    positive = [t for t in times if t > 0]
    report = None
    rel = 0.0
    if residual and positive:
        report = oracle.pde_residual(solution, q, x_grid, positive, order)
        rel = report.relative
    diagnostics["synthesis_seconds"] = time.perf_counter() - start
    return SolveReport(tuple(times), grids, solution, report, rel, diagnostics)


def solve_q_diffusion(p: DiffusionProblem, ctrl: SeriesControl = DEFAULT_CONTROL,
                      residual: bool = True, strict: bool = False) -> SolveReport:
    """Solve the q-diffusion problem::

        y(x, t) = (2 pi)^-1/2 int F(xi) E_q(-q (1-q) xi^2 t) exp(-i xi x) dxi

    E_q of a large negative argument is a finite product that changes sign at
    isolated modes; those zeros are kept.
    """
    qp = p.q
    F = _transform(p.f, p.x_grid, p.xi_grid, strict)
    xi = p.xi_grid.points
    kernel_terms = [0]

    def spectrum(t: float) -> np.ndarray:
        z = -qp.q * qp.one_minus_q * xi**2 * t
        kern, info = q_exp(qp, z, ctrl, return_info=True)
        kernel_terms[0] = max(kernel_terms[0], info.terms)
        return _checked(F.values * kern, "diffusion kernel")

    diagnostics = {"fourier_error_estimate": F.error_estimate,
                   "boundary_decay_f": _decay(p.f, p.x_grid)}
    report = _assemble(p.times, p.x_grid, SpectralSolution(p.xi_grid, spectrum), qp, 1,
                       diagnostics, residual)
    report.diagnostics["kernel_terms"] = kernel_terms[0]
    return report


def solve_q_wave(p: WaveProblem, ctrl: SeriesControl = DEFAULT_CONTROL,
                 residual: bool = True, strict: bool = False) -> SolveReport:
    """Solve the q-wave problem::

        y = (2 pi)^-1/2 int {F Cos_q(q(1-q) xi t) + G/xi Sin_q(q(1-q) xi t)} e^(-i xi x) dxi

    At xi = 0 the second term is replaced by its limit ``G(0) q t``.
    """
    qp = p.q
    F = _transform(p.f, p.x_grid, p.xi_grid, strict)
    G = _transform(p.g, p.x_grid, p.xi_grid, strict)
    xi = p.xi_grid.points
    zero = xi == 0
    safe_xi = np.where(zero, 1.0, xi)

    def spectrum(t: float) -> np.ndarray:
        lam = qp.q * qp.one_minus_q * xi * t
        out = F.values * q_cos(qp, lam, ctrl)
        if p.g is not None:
            sin_over_xi = np.where(zero, qp.q * t, q_sin(qp, lam, ctrl) / safe_xi)
            out = out + G.values * sin_over_xi
        return _checked(out, "wave kernel")

    diagnostics = {"fourier_error_estimate": max(F.error_estimate, G.error_estimate)}
    for name, h in (("f", p.f), ("g", p.g)):
        if h is not None:
            diagnostics[f"boundary_decay_{name}"] = _decay(h, p.x_grid)
    return _assemble(p.times, p.x_grid, SpectralSolution(p.xi_grid, spectrum), qp, 2,
                     diagnostics, residual)


def mode_phases(n: int) -> np.ndarray:
    """The n phases ``exp(i pi (2m+1) / n)``, m = 0..n-1, whose n-th powers are -1."""
    return np.exp(1j * np.pi * (2 * np.arange(n) + 1) / n)


def _phase_inverse(n: int) -> np.ndarray:
    """Inverse of ``V[k, m] = omega_m^k``; raises on ill-conditioning."""
    V = mode_phases(n)[None, :] ** np.arange(n)[:, None]
    cond = float(np.linalg.cond(V))
    if not cond < MAX_CONDITION:
        raise ConditioningError(f"mode-phase system for n={n} is singular", cond)
    return np.linalg.inv(V)


def _check_even(h, grid: GridSpec, name: str) -> None:
    x = grid.points
    vals = np.asarray(as_evaluable(h)(x)) * np.ones_like(x)
    mirrored = np.asarray(as_evaluable(h)(-x)) * np.ones_like(x)
    scale = max(float(np.max(np.abs(vals))), np.finfo(float).tiny)
    if np.max(np.abs(vals - mirrored)) > SYMMETRY_TOL * scale:
        raise ValueError(f"{name} must be even for the n-th order solver")


def solve_q_nth(p: NthOrderProblem, ctrl: SeriesControl = DEFAULT_CONTROL,
                residual: bool = True, strict: bool = False) -> SolveReport:
    """Solve ``(D^q_t)^n y = y_xx`` for even initial data.

    Each mode is ``sum_m A_m(xi) E_q(q (1-q) omega_m rho t)`` with
    ``rho = |xi|^(2/n)`` and ``omega_m^n = -1``.  The coefficients match the
    initial conditions, using ``(D^q_t)^k E_q(c t) -> (c / (q(1-q)))^k`` at
    t = 0, i.e. ``sum_m A_m omega_m^k rho^k = G_k``.  At xi = 0 the k-th
    basis function is replaced by its series limit
    ``q^(k(k-1)/2) (q(1-q) t)^k / (q;q)_k``.
    """
    qp = p.q
    n = p.n
    data = (p.f,) + tuple(p.g)
    for k, h in enumerate(data):
        if h is not None:
            _check_even(h, p.x_grid, "f" if k == 0 else f"g{k}")
    fields = [_transform(h, p.x_grid, p.xi_grid, strict) for h in data]
    active = [k for k, h in enumerate(data) if h is not None]
    vinv = _phase_inverse(n)
    omega = mode_phases(n)
    xi = p.xi_grid.points
    rho = np.abs(xi) ** (2.0 / n)
    zero = rho == 0
    safe_rho = np.where(zero, 1.0, rho)

    def spectrum(t: float) -> np.ndarray:
        modes = [np.asarray(q_exp(qp, qp.q * qp.one_minus_q * w * rho * t, ctrl), dtype=complex)
                 for w in omega]
        out = np.zeros(xi.shape, dtype=complex)
        for k in active:
            basis = sum(vinv[m, k] * modes[m] for m in range(n)) / safe_rho**k
            if k > 0:
                limit = (qp.q ** (k * (k - 1) / 2) * (qp.q * qp.one_minus_q * t) ** k
                         / q_shifted_factorial(qp, qp.q, k))
                basis = np.where(zero, limit, basis)
            out += fields[k].values * basis
        return _checked(out, "n-th order kernel")

    diagnostics = {"fourier_error_estimate": max(fl.error_estimate for fl in fields),
                   "phase_condition": float(np.linalg.cond(np.linalg.inv(vinv)))}
    return _assemble(p.times, p.x_grid, SpectralSolution(p.xi_grid, spectrum), qp, n,
                     diagnostics, residual)
