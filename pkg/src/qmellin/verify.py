"""The acceptance suite: every identity check with its measured error and tolerance.

Each ``criterion_N`` function runs one group of checks and returns a
:class:`CriterionResult`.  ``run(level)`` runs the quick subset (special
functions and transform identities) or the full set (adding the solvers).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import oracle
from .profiles import gaussian
from .qcore import (QParameter, SeriesControl, q_cos, q_exp, q_gamma, q_gamma_residue,
                    q_number, q_pochhammer_inf)
from .qderiv import FORWARD, STANDARD, q_derivative
from .solvers import (DiffusionProblem, NthOrderProblem, WaveProblem, solve_q_diffusion,
                      solve_q_nth, solve_q_wave)
from .transforms import (GridSpec, laplace_numeric, laplace_of_dq_forward_rhs,
                         laplace_of_dq_standard_rhs, mellin_numeric,
                         mellin_of_dq_forward_rhs, mellin_of_dq_standard_rhs)


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error < self.tolerance)


@dataclass
class CriterionResult:
    number: int
    title: str
    budget: float
    checks: list[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and self.seconds < self.budget

    def summary_line(self) -> str:
        worst = max(self.checks, key=lambda c: c.error / c.tolerance if c.tolerance else math.inf)
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.title}: worst {worst.name} "
                f"err={worst.error:.3e} tol={worst.tolerance:.1e}; "
                f"{self.seconds:.2f}s (budget {self.budget:g}s)")


def _rel(a, b) -> float:
    return float(abs(a - b) / abs(b))


def _timed(number: int, title: str, budget: float, body: Callable[[Callable], None]) -> CriterionResult:
    result = CriterionResult(number, title, budget)
    start = time.perf_counter()
    body(lambda name, err, tol: result.checks.append(CheckResult(name, float(err), tol)))
    result.seconds = time.perf_counter() - start
    return result


def criterion_1(scale: float = 1.0) -> CriterionResult:
    q = QParameter(0.5)

    def body(add):
        for lam in (-0.3, 0.2j):
            for t in (0.1, 1.0, 5.0):
                def e(u, lam=lam):
                    return q_exp(q, lam * np.asarray(u))
                lhs = q.q * q.one_minus_q * q_derivative(q, e, t)
                rhs = lam * e(t)
                add(f"lambda={lam} t={t}", _rel(lhs, rhs), 1e-12 * scale)

    return _timed(1, "eigen-identity of E_q under D^q", 1.0, body)


def criterion_2(scale: float = 1.0) -> CriterionResult:
    def body(add):
        for qv in (0.1, 0.5, 0.9):
            for z in (0.5, -0.5, 2.0, -2.0, 0.3 + 0.4j):
                series = q_exp(qv, z)
                product = q_pochhammer_inf(qv, -z)
                # at an exact zero of E_q the relative measure is undefined
                err = abs(series - product) / abs(product) if product != 0 else abs(series)
                add(f"q={qv} z={z}", err, 1e-10 * scale)

    return _timed(2, "E_q series/product duality", 1.0, body)


def criterion_3(scale: float = 1.0) -> CriterionResult:
    near_one = SeriesControl(max_terms=1_000_000)

    def body(add):
        for qv in (0.3, 0.7):
            for s in (0.5, 1.5, 2.5, 4.0):
                g1 = q_gamma(qv, s + 1)
                add(f"recurrence q={qv} s={s}", abs(g1 - q_number(qv, s) * q_gamma(qv, s)) / abs(g1),
                    1e-10 * scale)
        for s in (1.5, 2.5, 4.0):
            ref = oracle.classical_gamma(s)
            add(f"limit q=0.9999 s={s}", _rel(q_gamma(0.9999, s, near_one), ref), 1e-2 * scale)

    return _timed(3, "q-gamma recurrence and classical limit", 5.0, body)


def criterion_4(scale: float = 1.0) -> CriterionResult:
    def body(add):
        for n in (0, 1, 2):
            closed = q_gamma_residue(0.5, n)
            add(f"residue n={n}", _rel(oracle.contour_residue_qgamma(0.5, n), closed), 1e-8 * scale)
            vals = [oracle.contour_residue_qgamma(0.5, n, radius=r) for r in (0.1, 0.25, 0.4)]
            spread = max(abs(a - b) for a in vals for b in vals) / abs(closed)
            add(f"radius independence n={n}", spread, 1e-9 * scale)

    return _timed(4, "q-gamma residues vs contour quadrature", 5.0, body)


def _mellin_checks(add, variant: str, scale: float) -> None:
    def hstar(s):
        return math.gamma(s)

    def dh(qv):
        return lambda t: q_derivative(qv, lambda u: np.exp(-u), t, variant)

    def rhs(qv, s):
        if variant == FORWARD:
            return mellin_of_dq_forward_rhs(qv, hstar, s)
        return mellin_of_dq_standard_rhs(qv, hstar, s)

    for qv in (0.3, 0.7):
        for s in (1.5, 2.5):
            add(f"{variant} q={qv} s={s}", _rel(mellin_numeric(dh(qv), s), rhs(qv, s)), 1e-6 * scale)
    for s in (1.5, 2.5):
        classical = -(s - 1) * math.gamma(s - 1)
        add(f"{variant} q=0.999 s={s} closed form", _rel(rhs(0.999, s), classical), 1e-2 * scale)
        add(f"{variant} q=0.999 s={s} quadrature", _rel(mellin_numeric(dh(0.999), s), classical),
            1e-2 * scale)


def _laplace_checks(add, variant: str, scale: float) -> None:
    s = 2.0

    def hbar(p):
        return 1 / (p + 1)

    def dh(qv):
        return lambda t: q_derivative(qv, lambda u: np.exp(-u), t, variant)

    def rhs(qv):
        if variant == FORWARD:
            return laplace_of_dq_forward_rhs(qv, hbar, 1.0, s)
        return laplace_of_dq_standard_rhs(qv, hbar, 1.0, s)

    # elementary antiderivative log(s'+1) of the segment integral
    if variant == FORWARD:
        elementary = 2 * math.log(3 / 2) - 2 * math.log(2)
    else:
        elementary = 2 * math.log((2 / 0.5 + 1) / 3) - 2 * math.log(2)
    lhs = laplace_numeric(dh(0.5), s)
    add(f"{variant} q=0.5 quadrature vs rhs", _rel(lhs, rhs(0.5)), 1e-6 * scale)
    add(f"{variant} q=0.5 rhs vs elementary", _rel(rhs(0.5), elementary), 1e-6 * scale)
    classical = s * hbar(s) - 1.0
    add(f"{variant} q=0.999 rhs", _rel(rhs(0.999), classical), 1e-2 * scale)
    add(f"{variant} q=0.999 quadrature", _rel(laplace_numeric(dh(0.999), s), classical), 1e-2 * scale)


def criterion_5(scale: float = 1.0) -> CriterionResult:
    return _timed(5, "Mellin transform of D^q", 10.0, lambda add: _mellin_checks(add, FORWARD, scale))


def criterion_6(scale: float = 1.0) -> CriterionResult:
    return _timed(6, "Laplace transform of D^q", 10.0, lambda add: _laplace_checks(add, FORWARD, scale))


def criterion_10(scale: float = 1.0) -> CriterionResult:
    def body(add):
        _mellin_checks(add, STANDARD, scale)
        _laplace_checks(add, STANDARD, scale)

    return _timed(10, "Mellin and Laplace rules for the standard q-derivative", 20.0, body)


def _reproduction(report, f) -> float:
    x = report.solutions[0].grid.points
    fx = np.asarray(f(x))
    return float(np.max(np.abs(report.solutions[0].values - fx)) / np.max(np.abs(fx)))


def criterion_7(scale: float = 1.0) -> CriterionResult:
    f = gaussian(1.0)

    def body(add):
        rep = solve_q_diffusion(DiffusionProblem(0.5, f, [0.0, 0.1, 0.3]))
        add("t=0 reproduction", _reproduction(rep, f), 1e-8 * scale)
        add("residual q=0.5 t={0.1,0.3}", rep.residual_max, 1e-4 * scale)
        rep = solve_q_diffusion(DiffusionProblem(0.999, f, [0.2]), residual=False)
        y = rep.solution(0.5, 0.2)
        add("q=0.999 vs classical at (0.5, 0.2)", _rel(y, oracle.classical_heat_solution(1.0, 0.5, 0.2)),
            5e-2 * scale)

    return _timed(7, "q-diffusion solver", 30.0, body)


def criterion_8(scale: float = 1.0) -> CriterionResult:
    f = gaussian(1.0)

    def body(add):
        q = QParameter(0.5)
        rep = solve_q_wave(WaveProblem(q, f, [0.0, 0.1, 0.3]))
        add("t=0 reproduction", _reproduction(rep, f), 1e-8 * scale)
        add("solver residual t={0.1,0.3}", rep.residual_max, 1e-4 * scale)
        xi0 = 2.0

        def mode(x, t):
            return q_cos(q, q.q * q.one_minus_q * xi0 * t) * np.exp(-1j * xi0 * np.asarray(x))

        single = oracle.pde_residual_wave(mode, q, GridSpec(-12.0, 12.0, 2049), [0.1, 0.3])
        add("single-mode residual", single.relative, 1e-10 * scale)
        rep = solve_q_wave(WaveProblem(0.999, f, [0.5]), residual=False)
        x = rep.solutions[0].grid.points
        ref = oracle.classical_wave_dalembert(f, None, x, 0.5)
        err = np.max(np.abs(rep.solutions[0].values - ref)) / np.max(np.abs(f(x)))
        add("q=0.999 vs d'Alembert t=0.5", err, 5e-2 * scale)

    return _timed(8, "q-wave solver", 30.0, body)


def criterion_9(scale: float = 1.0) -> CriterionResult:
    f = gaussian(1.0)

    def body(add):
        times = [0.1, 0.3]
        wave = solve_q_wave(WaveProblem(0.5, f, times), residual=False)
        nth = solve_q_nth(NthOrderProblem(2, 0.5, f, times), residual=False)
        err = max(np.max(np.abs(a.values - b.values)) for a, b in zip(wave.solutions, nth.solutions))
        add("n=2 vs wave solver", err, 1e-8 * scale)
        rep = solve_q_nth(NthOrderProblem(3, 0.5, f, [0.05]))
        add("n=3 residual t=0.05", rep.residual_max, 1e-3 * scale)

    return _timed(9, "n-th order solver", 60.0, body)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}
QUICK = (1, 2, 3, 4, 5, 6, 10)
FULL = tuple(range(1, 11))


def run(level: str = "quick", scale: float = 1.0) -> list[CriterionResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    numbers = QUICK if level == "quick" else FULL
    return [CRITERIA[n](scale) for n in numbers]


def format_table(results: list[CriterionResult]) -> str:
    lines = [f"{'criterion':<10} {'check':<48} {'error':>11} {'tolerance':>10}  status"]
    for r in results:
        for c in r.checks:
            lines.append(f"{r.number:<10d} {c.name:<48.48} {c.error:11.3e} {c.tolerance:10.1e}  "
                         f"{'pass' if c.passed else 'FAIL'}")
        lines.append(f"{r.number:<10d} {'runtime (s)':<48} {r.seconds:11.3f} {r.budget:10.1f}  "
                     f"{'pass' if r.seconds < r.budget else 'FAIL'}")
    lines.append(f"overall: {'PASS' if all(r.passed for r in results) else 'FAIL'}")
    return "\n".join(lines)
