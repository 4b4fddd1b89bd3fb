"""q-special functions for a real base 0 < q < 1.

Everything here is evaluated in double precision.  Infinite products and
series are truncated according to a :class:`SeriesControl`; pass
``return_info=True`` to get the truncation index back as a
:class:`SeriesInfo`.

Powers ``q**s`` with complex ``s`` use the principal branch, i.e.
``exp(s * log(q))`` with the real logarithm of q.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ConvergenceError, PoleError

Scalar = Union[int, float, complex]

#: minimum distance from s to a pole of the q-gamma function
POLE_TOL = 1e-8
#: imaginary parts of real-argument q-trig values below this (relative) are dropped
TRIG_IMAG_TOL = 1e-13
#: |z| above which the q-exponential is evaluated from its product form
SERIES_SWITCH = 1.0

_CHUNK = 4096


@dataclass(frozen=True)
class QParameter:
    """The base q in (0, 1) with cached ``1 - q`` and ``ln(1/q)``."""

    q: float
    one_minus_q: float = field(init=False, repr=False)
    ln_inv_q: float = field(init=False, repr=False)

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or math.isnan(q):
            raise ValueError(f"q must lie in the open interval (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "one_minus_q", 1.0 - q)
        object.__setattr__(self, "ln_inv_q", -math.log(q))


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by every infinite series and product."""

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if int(self.max_terms) < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SeriesInfo:
    """Truncation diagnostics: number of terms (or factors) used and the route."""

    terms: int
    method: str


def as_q(q: QParameter | float) -> QParameter:
    return q if isinstance(q, QParameter) else QParameter(q)


def _scalar_out(value, like):
    if np.ndim(like) == 0:
        value = value[()] if isinstance(value, np.ndarray) else value
        return complex(value) if np.iscomplexobj(value) else float(value)
    return value


def q_number(q: QParameter | float, x):
    """The q-number ``[x]_q = (1 - q**x) / (1 - q)``.

    Works elementwise on arrays and for complex ``x``; ``[x]_q -> x`` as q -> 1.
    """
    qp = as_q(q)
    x_arr = np.asarray(x)
    # -expm1 keeps full relative accuracy when x*ln(q) is small
    val = -np.expm1(-x_arr * qp.ln_inv_q) / qp.one_minus_q
    return _scalar_out(val, x)


def q_shifted_factorial(q: QParameter | float, a: Scalar, n: int) -> Scalar:
    """Finite q-shifted factorial ``(a; q)_n = prod_{k<n} (1 - a q^k)``."""
    qp = as_q(q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = 1.0
    qk = 1.0
    for _ in range(n):
        result *= 1 - a * qk
        qk *= qp.q
    return result


def _product_length(amax: float, qp: QParameter, ctrl: SeriesControl) -> int:
    """First index K with amax * q**K < rel_tol."""
    if amax < ctrl.rel_tol:
        return 0
    k = max(0, math.ceil(math.log(ctrl.rel_tol / amax) / math.log(qp.q)))
    while amax * qp.q**k >= ctrl.rel_tol:
        k += 1
    while k > 0 and amax * qp.q ** (k - 1) < ctrl.rel_tol:
        k -= 1
    return k


def q_pochhammer_inf(q: QParameter | float, a, ctrl: SeriesControl = DEFAULT_CONTROL,
                     return_info: bool = False):
    """Infinite q-shifted factorial ``(a; q)_inf`` by truncated product.

    Factors ``k = 0..K`` are multiplied, where K is the first index with
    ``|a| q**K < ctrl.rel_tol``; the remaining factors are within rel_tol of 1.
    ``a`` may be an array, in which case K is set by ``max |a|``.

    Raises
    ------
    ConvergenceError
        If more than ``ctrl.max_terms`` factors would be needed.
    """
    qp = as_q(q)
    a_arr = np.asarray(a)
    if not np.all(np.isfinite(a_arr)):
        raise ValueError("a must be finite")
    dtype = complex if np.iscomplexobj(a_arr) else float
    amax = float(np.max(np.abs(a_arr))) if a_arr.size else 0.0
    k_last = _product_length(amax, qp, ctrl)
    n_factors = k_last + 1
    if n_factors > ctrl.max_terms:
        raise ConvergenceError(
            f"(a;q)_inf needs {n_factors} factors for |a|={amax:g}, q={qp.q}; "
            f"max_terms={ctrl.max_terms}")
    result = np.ones(a_arr.shape, dtype=dtype)
    if amax > 0.0:
        for start in range(0, n_factors, _CHUNK):
            powers = qp.q ** np.arange(start, min(start + _CHUNK, n_factors), dtype=float)
            result = result * np.prod(1 - a_arr[..., None] * powers, axis=-1)
    value = _scalar_out(result, a)
    if return_info:
        return value, SeriesInfo(n_factors, "product")
    return value


def _pole_distance(s: complex, qp: QParameter) -> float:
    """Distance from s to the nearest pole s = -k + 2 pi i m / ln q, k >= 0."""
    k = max(0, -round(s.real))
    period = 2 * math.pi / qp.ln_inv_q
    m = round(s.imag / period)
    return abs(s - complex(-k, m * period))


def q_gamma(q: QParameter | float, s: Scalar, ctrl: SeriesControl = DEFAULT_CONTROL) -> Scalar:
    """q-gamma function ``(q;q)_inf / (q^s;q)_inf * (1-q)^(1-s)``.

    Both products are accumulated together in log space as
    ``sum_k log(1 - q^(k+1)) - log(1 - q^(s+k))``, which avoids the
    underflow of each product separately when q is close to 1.  The number
    of factors still grows like ``log(rel_tol) / log(q)``; raise
    ``ctrl.max_terms`` for q near 1.

    Raises
    ------
    PoleError
        If s is within ``POLE_TOL`` of a pole.
    """
    qp = as_q(q)
    s_c = complex(s)
    if _pole_distance(s_c, qp) < POLE_TOL:
        raise PoleError(f"q-gamma has a pole near s={s!r}")
    lnq = -qp.ln_inv_q
    # smallest K with max(q^(K+1), |q^(s+K)|) < rel_tol
    lead = max(qp.q, math.exp(s_c.real * lnq))
    n_factors = _product_length(lead, qp, ctrl) + 1
    if n_factors > ctrl.max_terms:
        raise ConvergenceError(
            f"q_gamma needs {n_factors} factors at q={qp.q}; max_terms={ctrl.max_terms}")
    log_sum = 0j
    for start in range(0, n_factors, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n_factors), dtype=float)
        num = np.log1p(-np.exp((k + 1) * lnq))
        den = np.log1p(-np.exp((s_c + k) * lnq))
        log_sum += np.sum(num - den)
    value = np.exp(log_sum + (1 - s_c) * math.log(qp.one_minus_q))
    if isinstance(s, (int, float, np.integer, np.floating)):
        return float(value.real)
    return complex(value)


def q_gamma_residue(q: QParameter | float, n: int) -> float:
    """Residue of the q-gamma function at s = -n.

    ``(1-q)^(n+1) / ((q^-n; q)_n ln(1/q))`` with the denominator rewritten as
    ``(-1/q)^n q^(-n(n-1)/2) (q;q)_n`` so no powers q^-n are formed.
    """
    qp = as_q(q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    q_fact = q_shifted_factorial(qp, qp.q, n)
    # (1-q)^(n+1) * (-q)^n * q^(n(n-1)/2) / ((q;q)_n * ln(1/q))
    log_mag = ((n + 1) * math.log(qp.one_minus_q) + n * math.log(qp.q)
               + 0.5 * n * (n - 1) * math.log(qp.q) - math.log(q_fact) - math.log(qp.ln_inv_q))
    return (-1) ** n * math.exp(log_mag)


def _q_exp_series(qp: QParameter, z: np.ndarray, ctrl: SeriesControl) -> tuple[np.ndarray, int]:
    total = np.ones(z.shape, dtype=z.dtype)
    term = np.ones(z.shape, dtype=z.dtype)
    qn = 1.0
    for n in range(ctrl.max_terms):
        # t_{n+1} = t_n * q^n z / (1 - q^(n+1))
        term = term * (qn * z) / (-math.expm1((n + 1) * -qp.ln_inv_q))
        total = total + term
        qn *= qp.q
        if np.all(np.abs(term) <= ctrl.rel_tol * np.abs(total)):
            return total, n + 2
    raise ConvergenceError(f"q_exp series did not converge in {ctrl.max_terms} terms")


def q_exp(q: QParameter | float, z, ctrl: SeriesControl = DEFAULT_CONTROL,
          method: str = "auto", return_info: bool = False):
    """q-exponential ``E_q(z) = sum q^(n(n-1)/2) z^n / (q;q)_n = (-z; q)_inf``.

    ``method="auto"`` sums the series for ``|z| <= 1`` and multiplies the
    product form beyond that, where the alternating series cancels badly.
    ``"series"`` and ``"product"`` force one route.  Accepts arrays.
    """
    qp = as_q(q)
    z_arr = np.asarray(z)
    if not np.all(np.isfinite(z_arr)):
        raise ValueError("z must be finite")
    z_arr = z_arr.astype(complex if np.iscomplexobj(z_arr) else float)
    if method not in ("auto", "series", "product"):
        raise ValueError(f"unknown method {method!r}")

    if method == "auto":
        big = np.abs(z_arr) > SERIES_SWITCH
    else:
        big = np.full(z_arr.shape, method == "product")
    out = np.empty(z_arr.shape, dtype=z_arr.dtype)
    terms = 0
    used = []
    if np.any(~big):
        out[~big], n_series = _q_exp_series(qp, z_arr[~big], ctrl)
        terms = max(terms, n_series)
        used.append("series")
    if np.any(big):
        out[big], info = q_pochhammer_inf(qp, -z_arr[big], ctrl, return_info=True)
        terms = max(terms, info.terms)
        used.append("product")
    value = _scalar_out(out, z)
    if return_info:
        return value, SeriesInfo(terms, "+".join(used) or "series")
    return value


def _real_if_close(value, x, scale):
    """Drop negligible imaginary parts for real-argument q-trig values."""
    if np.iscomplexobj(np.asarray(x)):
        return value
    imag = np.abs(np.imag(value))
    bad = imag > TRIG_IMAG_TOL * np.maximum(scale, np.finfo(float).tiny)
    if np.any(bad):
        warnings.warn("q-trig value of a real argument has a non-negligible imaginary part",
                      RuntimeWarning, stacklevel=3)
        return value
    return np.real(value)


def q_sin(q: QParameter | float, x, ctrl: SeriesControl = DEFAULT_CONTROL):
    """q-Sine ``(E_q(ix) - E_q(-ix)) / 2i``; real for real ``x``."""
    x_arr = np.asarray(x)
    plus = np.asarray(q_exp(q, 1j * x_arr, ctrl))
    minus = np.asarray(q_exp(q, -1j * x_arr, ctrl))
    value = (plus - minus) / 2j
    value = _real_if_close(value, x_arr, np.maximum(np.abs(plus), np.abs(minus)))
    return _scalar_out(np.asarray(value), x)


def q_cos(q: QParameter | float, x, ctrl: SeriesControl = DEFAULT_CONTROL):
    """q-Cosine ``(E_q(ix) + E_q(-ix)) / 2``; real for real ``x``."""
    x_arr = np.asarray(x)
    plus = np.asarray(q_exp(q, 1j * x_arr, ctrl))
    minus = np.asarray(q_exp(q, -1j * x_arr, ctrl))
    value = (plus + minus) / 2
    value = _real_if_close(value, x_arr, np.maximum(np.abs(plus), np.abs(minus)))
    return _scalar_out(np.asarray(value), x)
