"""
Base controller with the plumbing shared by all experiment controllers.
"""
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from cprng.config.settings import Settings, get_settings
from cprng.middlewares.logging_middleware import log_run
from cprng.models.histogram import Estimate
from cprng.models.tent_map import GeneratorState
from cprng.schemas.experiment import Cell, ExperimentKind, ExperimentResult, ExperimentSpec
from cprng.utils.exceptions import ResourceGuardError
from cprng.utils.logger import get_logger

logger = get_logger(__name__)


class BaseController:
    """
    Template for experiment controllers.

    Subclasses set ``kind`` and ``columns`` and implement ``execute``, which
    returns the rows and fills ``metadata``. ``run`` validates the experiment
    spec, wraps the execution in run logging and records the wall time.
    """

    kind: ExperimentKind
    columns: List[str]

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize with runtime settings.

        Args:
            settings: Settings instance; the cached global one (read at run time) by default
        """
        self._settings = settings

    @property
    def settings(self) -> Settings:
        return self._settings or get_settings()

    def run(self, spec: ExperimentSpec) -> ExperimentResult:
        """
        Run the experiment described by ``spec``.

        Raises:
            ValueError: If the experiment spec is for another experiment kind
        """
        if spec.kind is not self.kind:
            raise ValueError(f"{type(self).__name__} runs {self.kind.value}, got {spec.kind.value}")

        metadata: Dict[str, Any] = {"config": spec.echo()}
        with log_run(self.kind.value, **self.describe(spec)) as timer:
            rows = self.execute(spec, metadata)
        metadata["run_id"] = timer.run_id
        metadata["wall_time_s"] = timer.elapsed
        return self.build_result(rows, metadata)

    def build_result(self, rows: List[List[Cell]], metadata: Dict[str, Any]) -> ExperimentResult:
        summary = metadata.pop("summary", None)
        return ExperimentResult(kind=self.kind, columns=self.columns, rows=rows, metadata=metadata, summary=summary)

    def describe(self, spec: ExperimentSpec) -> Dict[str, Any]:
        """Key parameters echoed in the run log."""
        return {"p": spec.coupling.p, "eps1": spec.coupling.eps1, "n_iter": spec.iters_list, "n_disc": spec.disc_list}

    def execute(self, spec: ExperimentSpec, metadata: Dict[str, Any]) -> List[List[Cell]]:
        raise NotImplementedError

    def generator(self, spec: ExperimentSpec, x0: Optional[Sequence[float]] = None) -> GeneratorState:
        """A fresh generator for the experiment spec (or for an explicit initial vector)."""
        return GeneratorState(spec.coupling, spec.x0 if x0 is None else x0, transient=spec.transient)

    def checkpoints(self, generator: GeneratorState, iters_list: Sequence[int]) -> Iterator[Tuple[int, Iterator[np.ndarray]]]:
        """
        Single pass over the post-transient stream, cut at each checkpoint.

        Yields (n_iter, blocks); the blocks of one checkpoint must be consumed
        before asking for the next. Counts are cumulative across checkpoints.
        """
        generator.warm_up()
        done = 0
        for target in iters_list:
            yield target, generator.iterate_chunks(target - done, self.settings.CHUNK_SIZE)
            done = target

    def keep_grid(self, spec: ExperimentSpec, metadata: Dict[str, Any], n_iter: int, est: Estimate, **labels: Any) -> None:
        """Keep the estimate of the last checkpoint under metadata["grids"] when the spec asks for it."""
        if spec.keep_grids and n_iter == spec.iters_list[-1]:
            metadata.setdefault("grids", []).append(({"n_iter": n_iter, **labels}, est))

    def guard_1d(self, discs: Sequence[int], accumulators: int) -> None:
        """
        Reject 1-D histograms that exceed the configured limits.

        Raises:
            ResourceGuardError: If a partition or the total is too large
        """
        if max(discs) > self.settings.MAX_DISC_1D:
            raise ResourceGuardError(f"n_disc {max(discs)} exceeds MAX_DISC_1D={self.settings.MAX_DISC_1D}")
        self._guard_total(sum(discs) * accumulators)

    def guard_2d(self, discs: Sequence[int], accumulators: int) -> None:
        """
        Reject 2-D histograms that exceed the configured limits.

        Raises:
            ResourceGuardError: If a partition or the total is too large
        """
        if max(discs) > self.settings.MAX_DISC_2D:
            raise ResourceGuardError(f"n_disc {max(discs)} per axis exceeds MAX_DISC_2D={self.settings.MAX_DISC_2D}")
        self._guard_total(sum(m * m for m in discs) * accumulators)

    def _guard_total(self, cells: int) -> None:
        if cells > self.settings.MAX_HISTOGRAM_CELLS:
            raise ResourceGuardError(
                f"experiment needs {cells} histogram cells, budget is MAX_HISTOGRAM_CELLS={self.settings.MAX_HISTOGRAM_CELLS}"
            )
        logger.debug(f"Histogram cells: {cells}")
