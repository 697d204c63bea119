"""
Autocorrelation sweep: E_AC1 of consecutive sampled values (or of a raw
component, which shows the tent graph and serves as the baseline).
"""
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from cprng.controllers.base_controller import BaseController
from cprng.models.histogram import LaggedPairAccumulator, discrepancy_l1, discrepancy_l2_squared
from cprng.models.sampler import MixingSampler, ThresholdSampler
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentSpec
from cprng.schemas.sampler import MixingSamplerConfig
from cprng.utils.logger import get_logger

logger = get_logger(__name__)


class AutocorrelationSweepController(BaseController):
    """Generator -> sampler -> lagged pair histograms, read at each checkpoint."""

    kind = ExperimentKind.AUTOCORRELATION_SWEEP
    columns = ["n_iter", "n_sampl", "n_disc", "eac1", "eac2_sq"]

    def sampler(self, spec: ExperimentSpec):
        if spec.sampler is None:
            return None
        if isinstance(spec.sampler, MixingSamplerConfig):
            return MixingSampler(spec.sampler, sys.maxsize, keep=False)
        return ThresholdSampler(spec.sampler, sys.maxsize, keep=False)

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        self.guard_2d(spec.disc_list, 1)
        sampler = self.sampler(spec)
        component = spec.components[0]
        accumulators = {m: LaggedPairAccumulator(m, spec.lag) for m in spec.disc_list}

        last_index: Optional[int] = None
        smallest_gap: Optional[int] = None
        rows: List[List[Cell]] = []
        for n_iter, blocks in self.checkpoints(self.generator(spec), spec.iters_list):
            for block in blocks:
                if sampler is None:
                    values = block[:, component]
                else:
                    piece = sampler.feed(block)
                    values = piece.values
                    if len(piece):
                        indices = piece.source_indices
                        if last_index is not None:
                            indices = np.concatenate(([last_index], indices))
                        if indices.size > 1:
                            gap = int(np.min(np.diff(indices)))
                            smallest_gap = gap if smallest_gap is None else min(smallest_gap, gap)
                        last_index = int(indices[-1])
                for acc in accumulators.values():
                    acc.feed(values)

            for m, acc in accumulators.items():
                n_sampl = acc.values_seen
                if acc.histogram.n == 0:
                    logger.warning(f"Only {n_sampl} value(s) at n_iter={n_iter}; E_AC undefined")
                    rows.append([n_iter, n_sampl, m, None, None])
                    continue
                est = acc.estimate()
                self.keep_grid(spec, metadata, n_iter, est, n_disc=m)
                rows.append([n_iter, n_sampl, m, discrepancy_l1(est), discrepancy_l2_squared(est)])

        if sampler is not None:
            metadata["n_sampled"] = sampler.emitted
            metadata["selection_fraction"] = sampler.emitted / spec.iters_list[-1] if spec.iters_list[-1] else 0.0
            metadata["min_gap"] = smallest_gap
        else:
            metadata["component"] = component
        metadata["lag"] = spec.lag
        return rows


# Create singleton instance
autocorrelation_sweep_controller = AutocorrelationSweepController()
