"""Exception and warning types raised by qmellin."""

from __future__ import annotations


class QCalcError(Exception):
    """Base class for all library errors."""


class PoleError(QCalcError, ValueError):
    """Argument lies on (or too close to) a pole of the q-gamma function."""


class DomainError(QCalcError, ValueError):
    """Operator evaluated outside its domain, e.g. a q-derivative at t = 0."""


class ConvergenceError(QCalcError, ArithmeticError):
    """A series, product or quadrature failed to converge within its budget."""


class StripError(ConvergenceError):
    """A Mellin integral diverges for the requested s (s outside the strip)."""


class ConditioningError(QCalcError, ArithmeticError):
    """A linear system is too ill-conditioned to solve reliably."""

    def __init__(self, message: str, condition_number: float):
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.condition_number = condition_number


class ConsistencyError(QCalcError, ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""


class NonDecayingInputError(QCalcError, ValueError):
    """Input does not decay at the window ends (strict mode)."""


class NonDecayingInput(UserWarning):
    """Input does not decay at the window ends; truncation error may be large."""
