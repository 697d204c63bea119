"""
Domain exceptions.

The error handler in ``cprng.middlewares.error_middleware`` maps these by
class name to process exit codes.
"""


class CprngError(Exception):
    """Base class for all library errors."""


class CouplingError(CprngError, ValueError):
    """Ill-formed coupling configuration (dimension or coupling constants)."""


class NumericalCorruptionError(CprngError, ArithmeticError):
    """A state component became non-finite or left [-1, 1]."""

    def __init__(self, message: str, step: int = -1):
        super().__init__(message)
        self.step = step


class OutOfRangeError(CprngError, ValueError):
    """A value handed to a histogram lies outside [-1, 1]."""


class UndefinedEstimateError(CprngError):
    """An estimate was requested from too few points."""


class UndefinedGapError(CprngError):
    """A minimum gap was requested from fewer than two samples."""


class PartitionMismatchError(CprngError, ValueError):
    """Two accumulators with different partitions cannot be merged."""


class ResourceGuardError(CprngError):
    """The requested experiment exceeds the configured memory budget."""


class FlagError(CprngError, ValueError):
    """Invalid command-line flag combination."""


class OutputError(CprngError, OSError):
    """Output could not be written."""
