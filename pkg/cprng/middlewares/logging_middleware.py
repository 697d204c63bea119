"""
Run logging for experiments and generator commands.
"""
import time
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

from cprng.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class RunTimer:
    """Identity and wall time of one run."""

    name: str
    run_id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    started: float = field(default_factory=time.perf_counter)
    finished: Optional[float] = None

    @property
    def elapsed(self) -> float:
        end = self.finished if self.finished is not None else time.perf_counter()
        return end - self.started


@contextmanager
def log_run(name: str, **echo: Any) -> Iterator[RunTimer]:
    """
    Log the start, completion or failure of a run.

    Usage:
        with log_run("density_sweep", p=4, n_disc=[100]) as timer:
            ...
        metadata["wall_time_s"] = timer.elapsed
    """
    timer = RunTimer(name=name)
    config = " | ".join(f"{k}={v}" for k, v in echo.items())
    logger.info(f"Run started | ID: {timer.run_id} | {name}" + (f" | {config}" if config else ""))
    try:
        yield timer
    except Exception as e:
        timer.finished = time.perf_counter()
        logger.error(
            f"Run failed | ID: {timer.run_id} | "
            f"Error: {e.__class__.__name__}: {e} | "
            f"Duration: {timer.elapsed:.4f}s"
        )
        raise
    timer.finished = time.perf_counter()
    logger.info(f"Run completed | ID: {timer.run_id} | Duration: {timer.elapsed:.4f}s")
