"""
Correlation between components: E_C1 and E_C2^2 for every requested pair.
"""
from itertools import combinations
from typing import Any, Dict, List, Tuple

from cprng.controllers.base_controller import BaseController
from cprng.models.histogram import HistogramAccumulator2D, correlation, discrepancy_l1, discrepancy_l2_squared
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentSpec


class CorrelationController(BaseController):
    """Tallies all pairs (x^k, x^l), k < l, in a single generator pass."""

    kind = ExperimentKind.CORRELATION
    columns = ["n_iter", "n_disc", "comp_k", "comp_l", "ec1", "ec2_sq"]

    def pairs(self, spec: ExperimentSpec) -> List[Tuple[int, int]]:
        if spec.pairs:
            return list(dict.fromkeys(tuple(sorted(pair)) for pair in spec.pairs))
        return list(combinations(range(spec.coupling.p), 2))

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        pairs = self.pairs(spec)
        self.guard_2d(spec.disc_list, len(pairs))
        accumulators = {(k, l, m): HistogramAccumulator2D.with_boxes(m) for k, l in pairs for m in spec.disc_list}

        rows: List[List[Cell]] = []
        for n_iter, blocks in self.checkpoints(self.generator(spec), spec.iters_list):
            for block in blocks:
                for (k, l, _), acc in accumulators.items():
                    acc.tally_many(block[:, k], block[:, l])
            for (k, l, m), acc in accumulators.items():
                if acc.n == 0:
                    rows.append([n_iter, m, k, l, None, None])
                    continue
                est = correlation(acc)
                self.keep_grid(spec, metadata, n_iter, est, n_disc=m, comp_k=k, comp_l=l)
                rows.append([n_iter, m, k, l, discrepancy_l1(est), discrepancy_l2_squared(est)])
        metadata["pairs"] = [list(pair) for pair in pairs]
        return rows


# Create singleton instance
correlation_controller = CorrelationController()
