"""Exception types shared across the package."""


class HeatGradError(Exception):
    """Base class for all errors raised by heatgrad."""


class DomainError(HeatGradError, ValueError):
    """An argument lies outside the documented domain of a function."""


class UnsupportedExponentError(DomainError):
    """The Lebesgue exponent is outside (1, inf]."""


class PreconditionError(HeatGradError, ValueError):
    """The hypothesis of a checked statement does not hold for the input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConvergenceError(HeatGradError, ArithmeticError):
    """A numerical procedure ran out of budget before meeting its tolerance.

    The best available estimate is kept on the exception so callers can
    still report a partial result.
    """

    def __init__(self, message, value=None, err_est=None):
        super().__init__(message)
        self.value = value
        self.err_est = err_est
