"""Exception types shared across the package."""


class MinrankError(Exception):
    """Base class for all package errors."""


class ParameterError(MinrankError, ValueError):
    """An argument is outside its documented domain."""


class NumericError(MinrankError, ArithmeticError):
    """Non-finite input or a numerical procedure that failed."""


class SolverError(NumericError):
    """A root finder could not bracket or converge."""


class DataError(MinrankError):
    """Computed data violated an invariant it must satisfy."""


class SizeLimitError(MinrankError):
    """An exact search exceeded its work budget."""
