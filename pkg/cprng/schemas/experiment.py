"""
Experiment specification and result schemas.
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from cprng.schemas.coupling import CouplingConfig
from cprng.schemas.presets import (
    SEED_SCAN_BASE,
    SEED_SCAN_MULTIPLIERS,
    SEED_SCAN_STRIDE_4,
    default_x0,
)
from cprng.schemas.sampler import MixingSamplerConfig, ThresholdSamplerConfig

Cell = Union[int, float, str, None]

STATISTIC_DIGITS = 8


class ExperimentKind(str, Enum):
    """Available experiments."""

    DENSITY_SWEEP = "density_sweep"
    CORRELATION = "correlation"
    AUTOCORRELATION_SWEEP = "autocorrelation_sweep"
    SEED_SCAN = "seed_scan"
    CYCLE_CHECK = "cycle_check"
    BENCH = "bench"


class SeedScanConfig(BaseModel):
    """Initial vectors x_{0,k}^j = base_j + stride * multiplier_j * k for k = 1..count."""

    base: List[float] = Field(default_factory=lambda: list(SEED_SCAN_BASE))
    stride: float = SEED_SCAN_STRIDE_4
    multipliers: List[float] = Field(default_factory=lambda: list(SEED_SCAN_MULTIPLIERS))
    count: int = Field(1000, ge=1)

    @model_validator(mode="after")
    def consistent(self) -> "SeedScanConfig":
        if len(self.base) != len(self.multipliers):
            raise ValueError("seed base and multipliers must have the same length")
        for k in (1, self.count):
            if any(abs(v) > 1.0 for v in self.x0(k)):
                raise ValueError(f"seed {k} leaves [-1, 1]: {self.x0(k)}")
        return self

    def x0(self, k: int) -> List[float]:
        """Initial vector of seed k."""
        return [b + self.stride * (m * k) for b, m in zip(self.base, self.multipliers)]

    def truncated(self, p: int) -> "SeedScanConfig":
        """The same scan restricted to the first p components."""
        if p > len(self.base):
            raise ValueError(f"seed scan defines {len(self.base)} components, system has p={p}")
        return self.model_copy(update={"base": self.base[:p], "multipliers": self.multipliers[:p]})


class ExperimentSpec(BaseModel):
    """Everything needed to run one experiment."""

    kind: ExperimentKind
    coupling: CouplingConfig = Field(default_factory=CouplingConfig)
    x0: Optional[List[float]] = None
    transient: Optional[int] = Field(None, ge=0)

    # analysis parameters
    disc_list: List[int] = Field(default_factory=lambda: [100])
    iters_list: List[int] = Field(default_factory=lambda: [1_000_000])
    components: List[int] = Field(default_factory=lambda: [0])
    pairs: Optional[List[Tuple[int, int]]] = None
    lag: int = Field(1, ge=1)
    keep_grids: bool = False

    # sampler parameters
    threshold_sampler: Optional[ThresholdSamplerConfig] = None
    mixing_sampler: Optional[MixingSamplerConfig] = None

    # seed scan parameters
    seed_scan: Optional[SeedScanConfig] = None
    histogram_bins: int = Field(20, ge=1)
    workers: Optional[int] = Field(None, ge=1)

    # cycle check / benchmark
    cycle_budget: Optional[int] = Field(None, ge=0)
    bench_steps: Optional[int] = Field(None, ge=1)

    @field_validator("iters_list")
    @classmethod
    def strictly_increasing(cls, v: List[int]) -> List[int]:
        """Checkpoints must be positive and strictly increasing."""
        if not v:
            raise ValueError("at least one iteration count is required")
        if v[0] < 0 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("iteration counts must be >= 0 and strictly increasing")
        return v

    @field_validator("disc_list")
    @classmethod
    def positive_discs(cls, v: List[int]) -> List[int]:
        if not v or any(m < 1 for m in v):
            raise ValueError("discretisation numbers must be >= 1")
        return v

    @model_validator(mode="after")
    def components_in_range(self) -> "ExperimentSpec":
        """Resolve the initial vector and check every component index against p."""
        p = self.coupling.p
        if self.x0 is None:
            self.x0 = default_x0(p)
            if self.x0 is None and self.kind is not ExperimentKind.SEED_SCAN:
                raise ValueError(f"no default initial vector for p={p}; give x0 explicitly")
        if self.x0 is not None and len(self.x0) != p:
            raise ValueError(f"x0 has {len(self.x0)} components, expected p={p}")

        indices = list(self.components)
        if self.pairs is not None:
            for k, l in self.pairs:
                if k == l:
                    raise ValueError(f"pair ({k}, {l}) must use two different components")
                indices += [k, l]
        if self.threshold_sampler and self.mixing_sampler:
            raise ValueError("choose either threshold sampling or mixing, not both")
        sampler = self.threshold_sampler or self.mixing_sampler
        if sampler is not None:
            indices.append(sampler.max_component)
        if any(i < 0 or i >= p for i in indices):
            raise ValueError(f"component indices must lie in [0, {p})")
        if self.kind is ExperimentKind.CORRELATION and p < 2:
            raise ValueError("correlation needs p >= 2")

        if self.kind is ExperimentKind.SEED_SCAN:
            scan = self.seed_scan or SeedScanConfig()
            self.seed_scan = scan.truncated(p) if len(scan.base) > p else scan
            if len(self.seed_scan.base) != p:
                raise ValueError(f"seed scan defines {len(self.seed_scan.base)} components, system has p={p}")
        return self

    @property
    def sampler(self) -> Optional[Union[ThresholdSamplerConfig, MixingSamplerConfig]]:
        return self.threshold_sampler or self.mixing_sampler

    def echo(self) -> Dict[str, Any]:
        """Compact configuration echo for logs and result metadata."""
        echo = {
            "kind": self.kind.value,
            "p": self.coupling.p,
            "a": self.coupling.a,
            "eps": self.coupling.eps_vector,
            "x0": self.x0,
            "transient": self.transient,
        }
        if self.sampler is not None:
            echo["sampler"] = self.sampler.model_dump()
        return echo


class ExperimentResult(BaseModel):
    """A table of rows, one per parameter cell, plus run metadata."""

    kind: ExperimentKind
    columns: List[str]
    rows: List[List[Cell]] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)
    summary: Optional["ExperimentResult"] = None

    @model_validator(mode="after")
    def row_width(self) -> "ExperimentResult":
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row} does not match columns {self.columns}")
        return self

    def column(self, name: str) -> List[Cell]:
        """All values of one column."""
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def to_csv(self, path_or_buf=None, digits: int = STATISTIC_DIGITS) -> Optional[str]:
        """Write the rows as CSV with a header; floats with ``digits`` significant digits."""
        return self.to_frame().to_csv(path_or_buf, index=False, float_format=f"%.{digits}g")

    @classmethod
    def from_csv(cls, path_or_buf, kind: ExperimentKind) -> "ExperimentResult":
        """Parse a CSV written by ``to_csv``."""
        frame = pd.read_csv(path_or_buf)
        rows = [[_native(v) for v in row] for row in frame.itertuples(index=False, name=None)]
        return cls(kind=kind, columns=list(frame.columns), rows=rows)


def _native(value: Any) -> Cell:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and value != value:
        return None
    return value


ExperimentResult.model_rebuild()
