"""
Cycle check: Brent's algorithm on the orbit of the initial vector.
"""
from typing import Any, Dict, List

from cprng.controllers.base_controller import BaseController
from cprng.models.cycle import find_cycle
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentSpec
from cprng.utils.logger import get_logger

logger = get_logger(__name__)


class CycleCheckController(BaseController):
    """Reports (tail, cycle) or that no cycle appeared within the step budget."""

    kind = ExperimentKind.CYCLE_CHECK
    columns = ["found", "tail", "cycle", "steps", "budget"]

    def describe(self, spec: ExperimentSpec) -> Dict[str, Any]:
        return {"p": spec.coupling.p, "eps1": spec.coupling.eps1, "budget": self.budget(spec)}

    def budget(self, spec: ExperimentSpec) -> int:
        return self.settings.CYCLE_BUDGET if spec.cycle_budget is None else spec.cycle_budget

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        # the orbit starts at x0 itself: no transient
        report = find_cycle(self.generator(spec), self.budget(spec))
        if report.found:
            logger.info(f"Cycle found: tail {report.tail}, length {report.cycle}")
        else:
            logger.info(f"No cycle within {report.budget} steps")
        return [[int(report.found), report.tail, report.cycle, report.steps, report.budget]]


# Create singleton instance
cycle_check_controller = CycleCheckController()
