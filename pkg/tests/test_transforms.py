from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from qmellin import (ConsistencyError, GridSpec, NonDecayingInput, NonDecayingInputError,
                     SeriesControl, StripError, dq_forward, dq_standard, fourier_forward,
                     fourier_inverse, inverse_mellin_qgamma_kernel, inverse_mellin_residue_sum,
                     laplace_numeric, laplace_of_dq_forward_rhs, laplace_of_dq_standard_rhs,
                     mellin_numeric, mellin_of_dq_forward_power_rhs, mellin_of_dq_forward_rhs,
                     mellin_of_dq_standard_power_rhs, mellin_of_dq_standard_rhs, q_exp, q_number)
from qmellin.errors import ConvergenceError
from qmellin.profiles import gaussian
from qmellin.qderiv import dq_forward_power, dq_standard_power
from qmellin.transforms import SpectralField, simpson_weights, synthesize

X = GridSpec(-12.0, 12.0, 2049)
XI = GridSpec(-12.0, 12.0, 2049)


def exp_neg(t):
    return np.exp(-np.asarray(t))


# ---------------------------------------------------------------- grids

@pytest.mark.parametrize("args", [(1.0, 1.0, 5), (2.0, 1.0, 5), (0.0, 1.0, 1), (0.0, math.inf, 5)])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        GridSpec(*args)


@pytest.mark.parametrize("n", [5, 6, 101, 102])
def test_simpson_weights_integrate_cubics(n):
    g = GridSpec(-1.0, 2.0, n)
    x = g.points
    assert np.dot(simpson_weights(g), x**3 - x) == pytest.approx(15 / 4 - 3 / 2, rel=1e-13)


def test_refined_grid_contains_coarse_nodes():
    fine = X.refined(2)
    np.testing.assert_allclose(fine.points[::2], X.points, atol=1e-14)


# ---------------------------------------------------------------- Fourier

def test_fourier_of_gaussian():
    F = fourier_forward(gaussian(1.0), XI, X)
    xi = XI.points
    assert np.max(np.abs(F.values - np.exp(-xi**2))) < 1e-10
    assert F.convention == "symmetric-1/sqrt(2pi)"


def test_fourier_of_zero():
    F = fourier_forward(lambda x: 0 * x, XI, X)
    assert np.all(F.values == 0)


def test_fourier_of_two_sided_exponential():
    # needs a wider window: exp(-12) is far above the decay threshold
    window = GridSpec(-30.0, 30.0, 6001)
    xi = GridSpec(-5.0, 5.0, 101)
    F = fourier_forward(lambda x: np.exp(-np.abs(x)), xi, window)
    exact = math.sqrt(2 / math.pi) / (1 + xi.points**2)
    assert np.max(np.abs(F.values - exact)) < 1e-6


def test_fourier_inverse_of_gaussian():
    F = SpectralField(XI, np.exp(-XI.points**2))
    f = fourier_inverse(F, X)
    exact = gaussian(1.0)(X.points)
    assert np.max(np.abs(f.values - exact)) < 1e-8
    zero = fourier_inverse(SpectralField(XI, np.zeros(XI.n_points)), X)
    assert np.all(zero.values == 0)


def test_round_trip():
    f = gaussian(1.0)
    back = fourier_inverse(fourier_forward(f, XI, X), X)
    interior = slice(200, -200)
    assert np.max(np.abs(back.values - f(X.points))[interior]) < 1e-8


def test_synthesize_scalar_and_array():
    F = fourier_forward(gaussian(1.0), XI, X)
    assert synthesize(F, 0.5) == pytest.approx(synthesize(F, np.array([0.5]))[0])


def test_non_decaying_input_warns_or_raises():
    slow = GridSpec(-5.0, 5.0, 501)
    with pytest.warns(NonDecayingInput):
        fourier_forward(lambda x: np.exp(-x**2 / 8), XI, slow)
    with pytest.raises(NonDecayingInputError):
        fourier_forward(lambda x: np.exp(-x**2 / 8), XI, slow, strict=True)


def test_decaying_input_is_silent():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fourier_forward(gaussian(1.0), XI, X, strict=True)


# ---------------------------------------------------------------- Laplace

@pytest.mark.parametrize("h, s, expected", [
    (exp_neg, 2.0, 1 / 3),
    (lambda t: np.ones_like(np.asarray(t, dtype=float)), 2.0, 0.5),
    (lambda t: np.asarray(t) * np.exp(-np.asarray(t)), 1.0, 0.25),
    (exp_neg, 1.0 + 2.0j, 1 / (2.0 + 2.0j)),
])
def test_laplace_numeric(h, s, expected):
    assert laplace_numeric(h, s) == pytest.approx(expected, rel=1e-12)


def test_laplace_requires_positive_real_part():
    with pytest.raises(ValueError):
        laplace_numeric(exp_neg, -1.0)


def test_laplace_divergent_integrand():
    with pytest.raises(ConvergenceError):
        laplace_numeric(lambda t: np.exp(2 * np.asarray(t)), 1.0)


def hbar(p):
    return 1 / (np.asarray(p) + 1)


def test_laplace_forward_rhs_elementary():
    value = laplace_of_dq_forward_rhs(0.5, hbar, 1.0, 2.0)
    assert value == pytest.approx(2 * math.log(3 / 4), rel=1e-13)
    assert value == pytest.approx(-0.5753641, rel=1e-7)


def test_laplace_rhs_of_zero():
    zero = lambda p: 0 * np.asarray(p)  # noqa: E731
    assert laplace_of_dq_forward_rhs(0.5, zero, 0.0, 2.0) == 0
    assert laplace_of_dq_standard_rhs(0.5, zero, 0.0, 2.0) == 0


@pytest.mark.parametrize("op, rhs", [(dq_forward, laplace_of_dq_forward_rhs),
                                     (dq_standard, laplace_of_dq_standard_rhs)])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_laplace_closure(op, rhs, q):
    lhs = laplace_numeric(lambda t: op(q, exp_neg, t), 2.0)
    assert lhs == pytest.approx(rhs(q, hbar, 1.0, 2.0), rel=1e-10)


def test_laplace_standard_rhs_elementary():
    # int_s^{s/q} dp/(p+1) = ln((s/q + 1)/(s + 1))
    q, s = 0.5, 2.0
    expected = (math.log((s / q + 1) / (s + 1)) - math.log(1 / q)) / (1 - q)
    assert laplace_of_dq_standard_rhs(q, hbar, 1.0, s) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("rhs", [laplace_of_dq_forward_rhs, laplace_of_dq_standard_rhs])
def test_laplace_classical_limit(rhs):
    assert abs(rhs(0.999, hbar, 1.0, 2.0) - (-1 / 3)) < 1e-2


def test_laplace_complex_s_closure():
    s, q = 1.5 + 0.5j, 0.6
    lhs = laplace_numeric(lambda t: dq_forward(q, exp_neg, t), s)
    assert lhs == pytest.approx(laplace_of_dq_forward_rhs(q, hbar, 1.0, s), rel=1e-10)


# ---------------------------------------------------------------- Mellin

@pytest.mark.parametrize("h, s, expected", [
    (exp_neg, 2.5, math.gamma(2.5)),
    (exp_neg, 1.0, 1.0),
    (lambda t: 1 / (1 + np.asarray(t)), 0.5, math.pi),
])
def test_mellin_numeric(h, s, expected):
    assert mellin_numeric(h, s) == pytest.approx(expected, rel=1e-12)


def test_mellin_outside_strip():
    with pytest.raises(StripError):
        mellin_numeric(lambda t: 1 / (1 + np.asarray(t)), 1.5)


@pytest.mark.parametrize("q", [0.3, 0.7])
@pytest.mark.parametrize("s", [1.5, 2.5])
@pytest.mark.parametrize("h, hstar", [
    (exp_neg, math.gamma),
    (lambda t: np.exp(-np.asarray(t) ** 2), lambda s: 0.5 * math.gamma(s / 2)),
])
def test_mellin_forward_closure(q, s, h, hstar):
    lhs = mellin_numeric(lambda t: dq_forward(q, h, t), s)
    assert abs(lhs - mellin_of_dq_forward_rhs(q, hstar, s)) / abs(hstar(s)) < 1e-6


def test_mellin_forward_example():
    value = mellin_of_dq_forward_rhs(0.5, math.gamma, 2.5)
    assert value == pytest.approx(-(1 - 0.5**1.5) / 0.5 * 0.8862269254527580, rel=1e-14)


def test_mellin_forward_at_one_vanishes():
    assert mellin_of_dq_forward_rhs(0.5, lambda s: 1.0, 1.0) == 0


@pytest.mark.parametrize("s", [1.5, 2.5])
def test_mellin_forward_classical_limit(s):
    assert abs(mellin_of_dq_forward_rhs(0.999, math.gamma, s) - -(s - 1) * math.gamma(s - 1)) < 1e-2


@pytest.mark.parametrize("q", [0.3, 0.7])
@pytest.mark.parametrize("s", [1.5, 2.5])
def test_mellin_standard_closure(q, s):
    lhs = mellin_numeric(lambda t: dq_standard(q, exp_neg, t), s)
    for form in ("direct", "factored"):
        assert abs(lhs - mellin_of_dq_standard_rhs(q, math.gamma, s, form)) / math.gamma(s) < 1e-6


def test_mellin_standard_forms_agree():
    a = mellin_of_dq_standard_rhs(0.5, math.gamma, 2.5, "direct")
    b = mellin_of_dq_standard_rhs(0.5, math.gamma, 2.5, "factored")
    assert a == pytest.approx(b, rel=1e-14)
    with pytest.raises(ValueError):
        mellin_of_dq_standard_rhs(0.5, math.gamma, 2.5, "other")


def test_mellin_standard_classical_limit_matches_forward():
    a = mellin_of_dq_standard_rhs(0.999, math.gamma, 2.5)
    b = mellin_of_dq_forward_rhs(0.999, math.gamma, 2.5)
    assert abs(a - b) < 1e-2 * abs(b)


@pytest.mark.parametrize("n", [2, 3])
def test_mellin_power_closure(n):
    q, s = 0.6, 3.5
    lhs_f = mellin_numeric(lambda t: dq_forward_power(q, exp_neg, t, n), s)
    lhs_s = mellin_numeric(lambda t: dq_standard_power(q, exp_neg, t, n), s)
    assert abs(lhs_f - mellin_of_dq_forward_power_rhs(q, math.gamma, s, n)) / math.gamma(s) < 1e-6
    assert abs(lhs_s - mellin_of_dq_standard_power_rhs(q, math.gamma, s, n)) / math.gamma(s) < 1e-6


def test_mellin_power_one_matches_first_order():
    assert mellin_of_dq_forward_power_rhs(0.4, math.gamma, 2.5, 1) == mellin_of_dq_forward_rhs(0.4, math.gamma, 2.5)
    assert mellin_of_dq_standard_power_rhs(0.4, math.gamma, 2.5, 1) == pytest.approx(
        mellin_of_dq_standard_rhs(0.4, math.gamma, 2.5), rel=1e-15)


# ---------------------------------------------------------------- inverse Mellin

def test_kernel_at_t_zero():
    q = 0.5
    assert inverse_mellin_qgamma_kernel(q, 1.0, 0.0) == pytest.approx(0.5 / math.log(2), rel=1e-15)
    assert inverse_mellin_residue_sum(q, 1.0, 0.0) == pytest.approx(0.5 / math.log(2), rel=1e-15)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_residue_sum_matches_closed_form(q, x):
    closed = inverse_mellin_qgamma_kernel(q, 1.0, x)
    summed = inverse_mellin_residue_sum(q, 1.0, x)
    assert abs(summed - closed) < 1e-12 * abs(closed)


def test_kernel_classical_limit():
    q = 0.999
    norm = (1 - q) / math.log(1 / q)
    assert abs(inverse_mellin_qgamma_kernel(q, 1.0, 0.3) / norm - math.exp(-0.3)) < 1e-2


def test_kernel_check_path():
    value = inverse_mellin_qgamma_kernel(0.5, 1.0, 1.0, check=True)
    assert value == pytest.approx(0.5 / math.log(2) * q_exp(0.5, -0.25))
    with pytest.raises(ConsistencyError):
        # a truncated residue sum cannot match the closed form
        inverse_mellin_qgamma_kernel(0.5, 3.0, 1.0, SeriesControl(rel_tol=1e-2, max_terms=10_000),
                                     check=True, check_tol=1e-15)


def test_residue_sum_rejects_negative_time():
    with pytest.raises(ValueError):
        inverse_mellin_residue_sum(0.5, 1.0, -1.0)


def test_q_number_factor_in_forward_rule():
    # the rule is linear in hstar with factor -[s-1]_q
    assert mellin_of_dq_forward_rhs(0.5, lambda s: 2.0, 3.0) == pytest.approx(-2 * q_number(0.5, 2))
