"""
Error handling for the command line: exceptions become stable exit codes.
"""
import traceback
from typing import Callable, Dict

from cprng.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_IO = 4
EXIT_NUMERICAL = 5
EXIT_UNDEFINED = 6


class ErrorHandler:
    """Runs a command and turns any exception into an exit code."""

    # Map exception class names to exit codes
    exception_map: Dict[str, int] = {
        # Flag and configuration errors
        "FlagError": EXIT_USAGE,
        "ValidationError": EXIT_USAGE,
        "CouplingError": EXIT_USAGE,

        # Resource guard
        "ResourceGuardError": EXIT_RESOURCE,
        "MemoryError": EXIT_RESOURCE,

        # I/O errors
        "OutputError": EXIT_IO,
        "OSError": EXIT_IO,
        "FileNotFoundError": EXIT_IO,
        "PermissionError": EXIT_IO,
        "IsADirectoryError": EXIT_IO,
        "BrokenPipeError": EXIT_IO,

        # Corrupted numerics
        "NumericalCorruptionError": EXIT_NUMERICAL,
        "OutOfRangeError": EXIT_NUMERICAL,

        # Not enough data for an estimate
        "UndefinedEstimateError": EXIT_UNDEFINED,
        "UndefinedGapError": EXIT_UNDEFINED,
    }

    def run(self, command: Callable[[], int]) -> int:
        """Run the command; return its exit code or the mapped error code."""
        try:
            return command()
        except KeyboardInterrupt:
            logger.warning("Interrupted")
            return 130
        except Exception as exc:
            return self.handle_exception(exc)

    def handle_exception(self, exc: Exception) -> int:
        """Log the exception and return its exit code."""
        code = self.get_exit_code(exc)
        logger.error(f"{exc.__class__.__name__}: {exc} | exit code {code}")
        logger.debug(f"Exception traceback: {traceback.format_exc()}")
        return code

    def get_exit_code(self, exc: Exception) -> int:
        """Exit code for an exception, walking its class hierarchy."""
        for cls in type(exc).__mro__:
            if cls.__name__ in self.exception_map:
                return self.exception_map[cls.__name__]
        return EXIT_INTERNAL
