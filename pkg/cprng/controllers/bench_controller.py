"""
Throughput benchmark of the coupled recurrence.
"""
import time
from typing import Any, Dict, List

from cprng.controllers.base_controller import BaseController
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentSpec
from cprng.utils.logger import get_logger

logger = get_logger(__name__)


class BenchController(BaseController):
    """Steady-state steps per second; one step yields p chaotic numbers."""

    kind = ExperimentKind.BENCH
    columns = ["p", "steps", "seconds", "steps_per_s", "numbers_per_s"]

    def describe(self, spec: ExperimentSpec) -> Dict[str, Any]:
        return {"p": spec.coupling.p, "eps1": spec.coupling.eps1, "steps": self.steps(spec)}

    def steps(self, spec: ExperimentSpec) -> int:
        return spec.bench_steps or self.settings.BENCH_STEPS

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        generator = self.generator(spec)
        steps = self.steps(spec)

        # warm-up also triggers compilation of the kernel
        generator.advance(self.settings.BENCH_WARMUP)

        start = time.perf_counter()
        generator.advance(steps)
        seconds = time.perf_counter() - start

        p = spec.coupling.p
        steps_per_s = steps / seconds if seconds > 0 else float("inf")
        logger.info(f"{steps_per_s:.4g} steps/s, {p * steps_per_s:.4g} numbers/s")
        metadata["floor_steps_per_s"] = self.settings.BENCH_FLOOR_STEPS_PER_S
        metadata["below_floor"] = steps_per_s < self.settings.BENCH_FLOOR_STEPS_PER_S
        return [[p, steps, seconds, steps_per_s, p * steps_per_s]]


# Create singleton instance
bench_controller = BenchController()
