"""
Seed scan: E1 and E2^2 for a family of initial vectors, with a summary.
"""
from multiprocessing import Pool
from typing import Any, Dict, List, Tuple

import numpy as np

from cprng.controllers.base_controller import BaseController
from cprng.models.histogram import HistogramAccumulator1D, density, discrepancy_l1, discrepancy_l2_squared
from cprng.models.tent_map import GeneratorState
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentResult, ExperimentSpec
from cprng.utils.logger import get_logger

logger = get_logger(__name__)


def scan_seeds(payload: Tuple[Dict[str, Any], List[int], int]) -> List[List[Cell]]:
    """
    Rows for a batch of seeds. Module-level so worker processes can run it.

    Each seed gets its own generator, so every row is reproducible alone.
    """
    spec_data, seeds, chunk_size = payload
    spec = ExperimentSpec.model_validate(spec_data)
    component = spec.components[0]
    n_iter = spec.iters_list[-1]

    rows: List[List[Cell]] = []
    for k in seeds:
        x0 = spec.seed_scan.x0(k)
        generator = GeneratorState(spec.coupling, x0, transient=spec.transient)
        generator.warm_up()
        accumulators = [HistogramAccumulator1D.with_boxes(m) for m in spec.disc_list]
        for block in generator.iterate_chunks(n_iter, chunk_size):
            for acc in accumulators:
                acc.tally_many(block[:, component])
        for acc in accumulators:
            est = density(acc)
            rows.append([k, acc.partition.m, discrepancy_l1(est), discrepancy_l2_squared(est)])
    return rows


class SeedScanController(BaseController):
    """Independent generators per seed; batches fan out to a process pool."""

    kind = ExperimentKind.SEED_SCAN
    columns = ["seed", "n_disc", "e1", "e2_sq"]
    summary_columns = ["n_disc", "statistic", "e1", "e2_sq"]

    def describe(self, spec: ExperimentSpec) -> Dict[str, Any]:
        echo = super().describe(spec)
        echo["seeds"] = spec.seed_scan.count
        return echo

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        self.guard_1d(spec.disc_list, 1)
        count = spec.seed_scan.count
        workers = min(spec.workers or self.settings.WORKERS, count)

        seeds = list(range(1, count + 1))
        batches = [seeds[i::workers] for i in range(workers)] if workers > 1 else [seeds]
        payloads = [(spec.model_dump(mode="json"), batch, self.settings.CHUNK_SIZE) for batch in batches]

        if workers > 1:
            logger.info(f"Scanning {count} seeds on {workers} workers")
            with Pool(workers) as pool:
                batch_rows = pool.map(scan_seeds, payloads)
        else:
            batch_rows = [scan_seeds(payload) for payload in payloads]

        rows = sorted((row for batch in batch_rows for row in batch), key=lambda row: (row[0], row[1]))
        metadata["summary"] = self.summarize(rows, spec)
        metadata["e1_histogram"] = self.histograms(rows, spec)
        metadata["workers"] = workers
        return rows

    def summarize(self, rows: List[List[Cell]], spec: ExperimentSpec) -> ExperimentResult:
        """min / max / mean of E1 and E2^2 per discretisation."""
        summary: List[List[Cell]] = []
        for m in spec.disc_list:
            e1 = np.array([row[2] for row in rows if row[1] == m])
            e2 = np.array([row[3] for row in rows if row[1] == m])
            for name, reduce in (("min", np.min), ("max", np.max), ("mean", np.mean)):
                summary.append([m, name, float(reduce(e1)), float(reduce(e2))])
        return ExperimentResult(kind=self.kind, columns=self.summary_columns, rows=summary)

    def histograms(self, rows: List[List[Cell]], spec: ExperimentSpec) -> Dict[str, Dict[str, List[float]]]:
        """Distribution of E1 over the seeds, per discretisation."""
        out = {}
        for m in spec.disc_list:
            counts, edges = np.histogram([row[2] for row in rows if row[1] == m], bins=spec.histogram_bins)
            out[str(m)] = {"edges": edges.tolist(), "counts": counts.tolist()}
        return out


# Create singleton instance
seed_scan_controller = SeedScanController()
