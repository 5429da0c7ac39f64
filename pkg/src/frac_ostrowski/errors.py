"""Exception and warning types shared across the package."""


class FracOstrowskiError(Exception):
    """Base class for all package errors."""


class DomainError(FracOstrowskiError, ValueError):
    """An argument lies outside the set where the quantity is defined."""


class RangeError(FracOstrowskiError, OverflowError):
    """The result is not representable in double precision."""


class EvaluationError(FracOstrowskiError, ArithmeticError):
    """A function could not be evaluated at some point.

    ``where`` carries the offending abscissa when one is known.
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class NondifferentiableError(EvaluationError):
    """Derivative requested at a point where it does not exist (abs at 0)."""


class ParseError(FracOstrowskiError, ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None, name=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position
        self.name = name


class AccuracyWarning(UserWarning):
    """Quadrature stopped before reaching the requested tolerance."""
