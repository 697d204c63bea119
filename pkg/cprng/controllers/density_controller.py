"""
Density sweep: E1 and E2^2 of the component densities over N_iter x N_disc.
"""
from typing import Any, Dict, List

from cprng.controllers.base_controller import BaseController
from cprng.models.histogram import HistogramAccumulator1D, density, discrepancy_l1, discrepancy_l2_squared
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentSpec


class DensitySweepController(BaseController):
    """One generator pass; per-(component, M) accumulators read at every checkpoint."""

    kind = ExperimentKind.DENSITY_SWEEP
    columns = ["n_iter", "n_disc", "component", "e1", "e2_sq"]

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        self.guard_1d(spec.disc_list, len(spec.components))
        accumulators = {
            (c, m): HistogramAccumulator1D.with_boxes(m) for c in spec.components for m in spec.disc_list
        }

        rows: List[List[Cell]] = []
        for n_iter, blocks in self.checkpoints(self.generator(spec), spec.iters_list):
            for block in blocks:
                for (c, _), acc in accumulators.items():
                    acc.tally_many(block[:, c])
            for (c, m), acc in accumulators.items():
                if acc.n == 0:
                    rows.append([n_iter, m, c, None, None])
                    continue
                est = density(acc)
                self.keep_grid(spec, metadata, n_iter, est, n_disc=m, component=c)
                rows.append([n_iter, m, c, discrepancy_l1(est), discrepancy_l2_squared(est)])
        return rows


# Create singleton instance
density_sweep_controller = DensitySweepController()
