"""Forward and standard q-derivatives and their iterates.

Two difference quotients are supported::

    forward   D h(t) = (h(t/q) - h(t)) / ((1 - q) t)
    standard  D h(t) = (h(t) - h(q t)) / ((1 - q) t)

The forward operator is the library default.  Functions passed in must
accept numpy arrays (``h(np.array([...]))``) and be deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .qcore import QParameter, as_q

FORWARD = "forward"
STANDARD = "standard"
VARIANTS = (FORWARD, STANDARD)


@dataclass(frozen=True)
class EvaluableFunction:
    """A function evaluable at arbitrary real or complex points.

    ``value_at_zero`` is h(0), used to regularise Laplace transforms;
    ``derivative_at_zero`` is h'(0), used for q-derivatives at t = 0.
    """

    func: Callable
    value_at_zero: Optional[complex] = None
    derivative_at_zero: Optional[complex] = None

    def __call__(self, t):
        return self.func(t)


def as_evaluable(h) -> EvaluableFunction:
    if isinstance(h, EvaluableFunction):
        return h
    if not callable(h):
        raise TypeError(f"expected a callable, got {type(h).__name__}")
    return EvaluableFunction(h)


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _ratio(qp: QParameter, variant: str) -> float:
    return 1.0 / qp.q if variant == FORWARD else qp.q


def stencil_coefficients(q: QParameter | float, n: int, variant: str = FORWARD) -> np.ndarray:
    """Coefficients ``a_k`` with ``D^n h(t) = t**-n * sum_k a_k h(r**k t)``.

    ``r`` is 1/q for the forward variant and q for the standard one.  Uses
    the homogeneity of D^n (degree -n in t), so the recursion is exact::

        forward:  a'_k = (q^n a_{k-1} - a_k) / (1 - q)
        standard: a'_k = (a_k - q^-n a_{k-1}) / (1 - q)
    """
    qp = as_q(q)
    _check_variant(variant)
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = np.array([1.0])
    r = _ratio(qp, variant)
    sign = 1.0 if variant == FORWARD else -1.0
    for m in range(n):
        shifted = np.concatenate(([0.0], a)) * r ** (-m)
        padded = np.concatenate((a, [0.0]))
        a = sign * (shifted - padded) / qp.one_minus_q
    return a


def _at_zero_mask(t):
    t_arr = np.asarray(t)
    return t_arr, t_arr == 0


def q_derivative(q: QParameter | float, h, t, variant: str = FORWARD,
                 derivative_at_zero: Optional[complex] = None):
    """One q-derivative of ``h`` at ``t`` (scalar or array).

    At t = 0 the quotient is 0/0; the continuous limit is returned when h'(0)
    is known (argument or ``h.derivative_at_zero``): h'(0)/q for the forward
    variant and h'(0) for the standard one.  Otherwise :class:`DomainError`.
    """
    qp = as_q(q)
    _check_variant(variant)
    h = as_evaluable(h)
    t_arr, zero = _at_zero_mask(t)
    dh0 = derivative_at_zero if derivative_at_zero is not None else h.derivative_at_zero
    if np.any(zero) and dh0 is None:
        raise DomainError("q-derivative at t=0 needs a derivative_at_zero hint")
    ts = np.where(zero, 1.0, t_arr)
    r = _ratio(qp, variant)
    if variant == FORWARD:
        num = np.asarray(h(r * ts)) - np.asarray(h(ts))
    else:
        num = np.asarray(h(ts)) - np.asarray(h(r * ts))
    value = num / (qp.one_minus_q * ts)
    if np.any(zero):
        limit = dh0 / qp.q if variant == FORWARD else dh0
        value = np.where(zero, limit, value)
    if np.ndim(t) == 0:
        return value[()]
    return value


def dq_forward(q: QParameter | float, h, t, derivative_at_zero: Optional[complex] = None):
    """Forward q-derivative ``(h(t/q) - h(t)) / ((1 - q) t)``."""
    return q_derivative(q, h, t, FORWARD, derivative_at_zero)


def dq_standard(q: QParameter | float, h, t, derivative_at_zero: Optional[complex] = None):
    """Standard q-derivative ``(h(t) - h(q t)) / ((1 - q) t)``."""
    return q_derivative(q, h, t, STANDARD, derivative_at_zero)


def q_derivative_power(q: QParameter | float, h, t, n: int, variant: str = FORWARD,
                       at_zero: Optional[complex] = None):
    """n-fold q-derivative via its (n+1)-point stencil.

    ``at_zero`` is the caller-supplied limit value returned at t = 0.
    """
    qp = as_q(q)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1 and at_zero is None:
        return q_derivative(qp, h, t, variant)
    h = as_evaluable(h)
    t_arr, zero = _at_zero_mask(t)
    if np.any(zero) and at_zero is None:
        raise DomainError("iterated q-derivative at t=0 needs an at_zero limit value")
    ts = np.where(zero, 1.0, t_arr)
    coeffs = stencil_coefficients(qp, n, variant)
    r = _ratio(qp, variant)
    value = sum(c * np.asarray(h(r**k * ts)) for k, c in enumerate(coeffs)) / ts**n
    if np.any(zero):
        value = np.where(zero, at_zero, value)
    if np.ndim(t) == 0:
        return np.asarray(value)[()]
    return value


def dq_forward_power(q: QParameter | float, h, t, n: int, at_zero: Optional[complex] = None):
    """``(D^q_t)^n h(t)`` for the forward variant."""
    return q_derivative_power(q, h, t, n, FORWARD, at_zero)


def dq_standard_power(q: QParameter | float, h, t, n: int, at_zero: Optional[complex] = None):
    """n-fold standard q-derivative."""
    return q_derivative_power(q, h, t, n, STANDARD, at_zero)
