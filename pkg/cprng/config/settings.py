"""
Runtime settings and configuration management.

Experiment parameters are always given on the command line; the settings
below only tune the runtime (logging, chunking, resource guards, workers).
"""
from functools import lru_cache
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="CPRNG_",
        case_sensitive=True,
        extra="ignore",
    )

    # Core settings
    APP_NAME: str = "cprng"
    DEBUG: bool = False

    # Generator defaults
    DEFAULT_TRANSIENT: int = 1000
    CHUNK_SIZE: int = 1 << 20

    # Resource guards
    MAX_HISTOGRAM_CELLS: int = 50_000_000
    MAX_DISC_1D: int = 10_000_000
    MAX_DISC_2D: int = 1_000

    # Parallel seed scans
    WORKERS: int = 1

    # Cycle check and benchmark
    CYCLE_BUDGET: int = 10_000_000
    BENCH_STEPS: int = 100_000_000
    BENCH_WARMUP: int = 1_000_000
    BENCH_FLOOR_STEPS_PER_S: float = 1.0e7

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    LOG_FILE: Optional[str] = None
    LOG_ROTATION: str = "10 MB"
    LOG_RETENTION: str = "1 week"

    @field_validator("CHUNK_SIZE", "WORKERS", "MAX_HISTOGRAM_CELLS", "MAX_DISC_1D", "MAX_DISC_2D")
    @classmethod
    def positive(cls, v: int) -> int:
        """Sizes and counts must be at least one."""
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("DEFAULT_TRANSIENT", "CYCLE_BUDGET", "BENCH_STEPS", "BENCH_WARMUP")
    @classmethod
    def non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must be >= 0")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def known_level(cls, v: str) -> str:
        """Normalize the log level name."""
        level = v.upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return level


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
