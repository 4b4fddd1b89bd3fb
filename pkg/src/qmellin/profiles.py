"""Named initial profiles for the command line.

Specs look like ``gaussian(b=1)``, ``sech(width=2)``,
``box-smoothed(half_width=2, edge=0.5)`` or ``zero``.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .qderiv import EvaluableFunction


def gaussian(b: float = 1.0, amplitude: float = 1.0) -> EvaluableFunction:
    """``amplitude * exp(-x^2 / 4b) / sqrt(2b)``; its transform is ``amplitude * exp(-b xi^2)``."""
    if b <= 0:
        raise ValueError("gaussian needs b > 0")
    norm = amplitude / math.sqrt(2 * b)
    return EvaluableFunction(lambda x: norm * np.exp(-np.asarray(x) ** 2 / (4 * b)),
                             value_at_zero=norm, derivative_at_zero=0.0)


def sech(width: float = 1.0, amplitude: float = 1.0) -> EvaluableFunction:
    if width <= 0:
        raise ValueError("sech needs width > 0")
    return EvaluableFunction(lambda x: amplitude / np.cosh(np.asarray(x) / width),
                             value_at_zero=amplitude, derivative_at_zero=0.0)


def box_smoothed(half_width: float = 1.0, edge: float = 0.25,
                 amplitude: float = 1.0) -> EvaluableFunction:
    """Box of half-width ``half_width`` with tanh edges of scale ``edge``."""
    if half_width <= 0 or edge <= 0:
        raise ValueError("box-smoothed needs half_width > 0 and edge > 0")

    def f(x):
        x = np.asarray(x)
        return 0.5 * amplitude * (np.tanh((x + half_width) / edge) - np.tanh((x - half_width) / edge))

    return EvaluableFunction(f, value_at_zero=float(f(0.0)), derivative_at_zero=0.0)


def zero() -> EvaluableFunction:
    return EvaluableFunction(lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                             value_at_zero=0.0, derivative_at_zero=0.0)


FAMILIES = {
    "gaussian": gaussian,
    "sech": sech,
    "box-smoothed": box_smoothed,
    "zero": zero,
}

_SPEC = re.compile(r"^\s*([a-z][a-z\-]*)\s*(?:\((.*)\))?\s*$")


def parse_profile(spec: str) -> EvaluableFunction:
    """Build a profile from ``name(key=value, ...)``; a bare number is taken as
    the first parameter (``gaussian(1)`` means b = 1)."""
    m = _SPEC.match(spec)
    if not m or m.group(1) not in FAMILIES:
        raise ValueError(f"unknown profile {spec!r}; expected one of {sorted(FAMILIES)}")
    factory = FAMILIES[m.group(1)]
    args, kwargs = [], {}
    for part in filter(None, (p.strip() for p in (m.group(2) or "").split(","))):
        key, eq, value = part.partition("=")
        try:
            if eq:
                kwargs[key.strip().replace("-", "_")] = float(value)
            else:
                args.append(float(key))
        except ValueError:
            raise ValueError(f"bad profile parameter {part!r} in {spec!r}") from None
    try:
        return factory(*args, **kwargs)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {m.group(1)}: {exc}") from None
