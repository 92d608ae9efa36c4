"""Exception types raised across the package."""


class SfqecError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(SfqecError, ValueError):
    pass


class ParameterRangeError(SfqecError, ValueError):
    pass


class DimensionMismatchError(SfqecError, ValueError):
    pass


class NotPSDError(SfqecError, ValueError):
    pass


class NumericFailureError(SfqecError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TruncationError(SfqecError):
    """A constructed state leaks too much weight into the top Fock levels."""

    def __init__(self, message, tail_mass=None):
        super().__init__(message)
        self.tail_mass = tail_mass


class InvalidCodeError(SfqecError, ValueError):
    pass


class IllConditionedCodeError(SfqecError, ValueError):
    pass


class NoSolutionError(SfqecError):
    pass


class DegenerateChannelError(SfqecError):
    pass


class SolverFailureError(SfqecError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}
