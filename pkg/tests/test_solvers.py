from __future__ import annotations

import numpy as np
import pytest

from qmellin import (ConditioningError, DiffusionProblem, EvaluableFunction, GridSpec,
                     NonDecayingInputError, NthOrderProblem, WaveProblem, dq_forward,
                     solve_q_diffusion, solve_q_nth, solve_q_wave)
from qmellin import oracle, solvers
from qmellin.profiles import gaussian

# coarser than the defaults to keep the unit tests fast
X = GridSpec(-12.0, 12.0, 1025)
XI = GridSpec(-12.0, 12.0, 1025)
F = gaussian(1.0)
G = EvaluableFunction(lambda x: 0.5 * np.exp(-np.asarray(x) ** 2 / 2), 0.5, 0.0)


def reproduction(report, f):
    x = report.solutions[0].grid.points
    return np.max(np.abs(report.solutions[0].values - f(x))) / np.max(np.abs(f(x)))


# ---------------------------------------------------------------- problem validation

@pytest.mark.parametrize("times", [[], [-0.1], [float("nan")]])
def test_problem_rejects_bad_times(times):
    with pytest.raises(ValueError):
        DiffusionProblem(0.5, F, times)


def test_problem_rejects_bad_q():
    with pytest.raises(ValueError, match="q"):
        WaveProblem(1.2, F, [0.1])


@pytest.mark.parametrize("n", [1, 5])
def test_nth_rejects_unsupported_order(n):
    with pytest.raises(ValueError):
        NthOrderProblem(n, 0.5, F, [0.1])


def test_nth_rejects_too_many_initial_derivatives():
    with pytest.raises(ValueError):
        NthOrderProblem(2, 0.5, F, [0.1], g=(G, G))


def test_nth_pads_missing_initial_derivatives():
    assert NthOrderProblem(4, 0.5, F, [0.1], g=(G,)).g == (G, None, None)


# ---------------------------------------------------------------- diffusion

def test_diffusion_reproduces_initial_profile():
    rep = solve_q_diffusion(DiffusionProblem(0.5, F, [0.0, 0.3], X, XI), residual=False)
    assert reproduction(rep, F) < 1e-8


def test_diffusion_residual():
    rep = solve_q_diffusion(DiffusionProblem(0.5, F, [0.0, 0.1, 0.3], X, XI))
    assert rep.residual_max < 1e-4
    assert rep.residual is not None and rep.residual.location[1] in (0.1, 0.3)
    assert set(rep.diagnostics) >= {"fourier_error_estimate", "kernel_terms", "boundary_decay_f"}


def test_diffusion_only_t_zero_skips_residual():
    rep = solve_q_diffusion(DiffusionProblem(0.5, F, [0.0], X, XI))
    assert rep.residual is None and rep.residual_max == 0.0


def test_diffusion_kernel_is_one_at_t_zero():
    rep = solve_q_diffusion(DiffusionProblem(0.5, F, [0.0], X, XI), residual=False)
    spectrum = rep.solution.spectrum(0.0).values
    np.testing.assert_allclose(spectrum, np.exp(-XI.points**2), atol=1e-10)


def test_diffusion_classical_limit_point():
    rep = solve_q_diffusion(DiffusionProblem(0.999, F, [0.2], X, XI), residual=False)
    y = rep.solution(0.5, 0.2)
    ref = oracle.classical_heat_solution(1.0, 0.5, 0.2)
    assert abs(y - ref) / ref < 5e-2


def test_diffusion_classical_drift_is_monotone():
    ref = oracle.classical_heat_solution(1.0, X.points, 0.2)
    drift = []
    for q in (0.9, 0.99, 0.999):
        rep = solve_q_diffusion(DiffusionProblem(q, F, [0.2], X, XI), residual=False)
        drift.append(np.max(np.abs(rep.solutions[0].values - ref)))
    assert drift[0] > drift[1] > drift[2]


def test_diffusion_linearity():
    f2 = gaussian(0.5, amplitude=2.0)
    a, b = 0.7, -1.3
    combo = EvaluableFunction(lambda x: a * F(x) + b * f2(x))
    times = [0.1, 0.4]
    y1, y2, y12 = (solve_q_diffusion(DiffusionProblem(0.5, h, times, X, XI), residual=False)
                   for h in (F, f2, combo))
    for s1, s2, s12 in zip(y1.solutions, y2.solutions, y12.solutions):
        assert np.max(np.abs(s12.values - (a * s1.values + b * s2.values))) < 1e-10


def test_strict_mode_rejects_slow_decay():
    slow = GridSpec(-5.0, 5.0, 257)
    with pytest.raises(NonDecayingInputError):
        solve_q_diffusion(DiffusionProblem(0.5, lambda x: np.exp(-np.asarray(x) ** 2 / 8),
                                           [0.1], slow, XI), strict=True)


# ---------------------------------------------------------------- wave

def test_wave_reproduces_initial_profile():
    rep = solve_q_wave(WaveProblem(0.5, F, [0.0, 0.3], G, X, XI), residual=False)
    assert reproduction(rep, F) < 1e-8


@pytest.mark.parametrize("g", [None, G])
def test_wave_residual(g):
    rep = solve_q_wave(WaveProblem(0.5, F, [0.1, 0.3], g, X, XI))
    assert rep.residual_max < 1e-4


def test_wave_recovers_initial_velocity():
    rep = solve_q_wave(WaveProblem(0.5, F, [0.1], G, X, XI), residual=False)
    x = X.points[100:-100]
    # D^q_t y(x, t) = g(x) + O(t)
    d = dq_forward(0.5, lambda t: rep.solution(x, t), 1e-6)
    assert np.max(np.abs(d - G(x))) < 1e-6


def test_wave_classical_limit():
    rep = solve_q_wave(WaveProblem(0.999, F, [0.5], None, X, XI), residual=False)
    ref = oracle.classical_wave_dalembert(F, None, X.points, 0.5)
    assert np.max(np.abs(rep.solutions[0].values - ref)) / np.max(F(X.points)) < 5e-2


def test_wave_classical_limit_with_velocity():
    rep = solve_q_wave(WaveProblem(0.999, F, [0.5], G, X, XI), residual=False)
    x = np.linspace(-3, 3, 13)
    ref = oracle.classical_wave_dalembert(F, G, x, 0.5)
    assert np.max(np.abs(rep.solution(x, 0.5) - ref)) < 5e-2


def test_wave_linearity():
    a, b = 2.0, -0.5
    combo = EvaluableFunction(lambda x: a * F(x) + b * G(x))
    y1, y2, y12 = (solve_q_wave(WaveProblem(0.5, h, [0.2], None, X, XI), residual=False)
                   for h in (F, G, combo))
    lhs = y12.solutions[0].values
    rhs = a * y1.solutions[0].values + b * y2.solutions[0].values
    assert np.max(np.abs(lhs - rhs)) < 1e-10


# ---------------------------------------------------------------- n-th order

def test_mode_phases_are_roots_of_minus_one():
    for n in (2, 3, 4):
        np.testing.assert_allclose(solvers.mode_phases(n) ** n, -1, atol=1e-14)


@pytest.mark.parametrize("g", [None, G])
def test_nth_two_matches_wave(g):
    times = [0.1, 0.3]
    wave = solve_q_wave(WaveProblem(0.5, F, times, g, X, XI), residual=False)
    nth = solve_q_nth(NthOrderProblem(2, 0.5, F, times, (g,), X, XI), residual=False)
    for a, b in zip(wave.solutions, nth.solutions):
        assert np.max(np.abs(a.values - b.values)) < 1e-8


@pytest.mark.parametrize("n", [3, 4])
def test_nth_reproduces_initial_profile(n):
    rep = solve_q_nth(NthOrderProblem(n, 0.5, F, [0.0], x_grid=X, xi_grid=XI), residual=False)
    assert reproduction(rep, F) < 1e-8


def test_nth_three_residual():
    rep = solve_q_nth(NthOrderProblem(3, 0.5, F, [0.05], x_grid=X, xi_grid=XI))
    assert rep.residual_max < 1e-3


def test_nth_three_residual_with_initial_derivatives():
    rep = solve_q_nth(NthOrderProblem(3, 0.5, F, [0.05], (G, G), X, XI))
    assert rep.residual_max < 1e-3


def test_nth_requires_even_data():
    odd = EvaluableFunction(lambda x: np.asarray(x) * np.exp(-np.asarray(x) ** 2))
    with pytest.raises(ValueError, match="even"):
        solve_q_nth(NthOrderProblem(3, 0.5, odd, [0.1], x_grid=X, xi_grid=XI))
    with pytest.raises(ValueError, match="g1"):
        solve_q_nth(NthOrderProblem(3, 0.5, F, [0.1], (odd,), X, XI))


def test_nth_conditioning_error(monkeypatch):
    monkeypatch.setattr(solvers, "MAX_CONDITION", 1.0)
    with pytest.raises(ConditioningError) as info:
        solve_q_nth(NthOrderProblem(3, 0.5, F, [0.1], x_grid=X, xi_grid=XI))
    assert info.value.condition_number >= 1.0
