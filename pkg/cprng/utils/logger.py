"""
Loguru setup shared by the command line and the experiment drivers.

Logs always go to standard error; standard output is reserved for data.
"""
import sys
from typing import Optional

from loguru import logger

from cprng.config.settings import get_settings


def setup_logging(level: Optional[str] = None) -> None:
    """
    Configure application-wide logging.

    Args:
        level: Optional level overriding the configured LOG_LEVEL
    """
    settings = get_settings()
    level = (level or settings.LOG_LEVEL).upper()

    # Remove default logger
    logger.remove()

    logger.add(
        sys.stderr,
        format=settings.LOG_FORMAT,
        level=level,
        backtrace=True,
        diagnose=settings.DEBUG,
    )

    if settings.LOG_FILE:
        logger.add(
            settings.LOG_FILE,
            format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}",
            level=level,
            rotation=settings.LOG_ROTATION,
            retention=settings.LOG_RETENTION,
            backtrace=True,
        )

    logger.debug(f"Logging initialized for {settings.APP_NAME} at {level}")


def get_logger(name: Optional[str] = None):
    """
    Get a logger instance for a specific module.

    Args:
        name: Module name, typically __name__

    Returns:
        Logger instance
    """
    return logger.bind(name=name)
