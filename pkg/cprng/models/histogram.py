"""
Box-count histograms over [-1, 1] and [-1, 1]^2 and the estimates built on them.

Box i of the M-box partition is [s_i, s_{i+1}) with s_i = -1 + 2i/M, except
the last box, which is closed at 1. Densities are normalised on [-1, 1]
(uniform value 0.5), correlations on the square (uniform value 0.25).
Discrepancies are the L1 and squared L2 norms of estimate/uniform - 1 under
the normalised Lebesgue measure, i.e. plain means over the boxes.
"""
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Union

import numpy as np
import numpy.typing as npt

from cprng.models.tent_map import STATE_HIGH, STATE_LOW
from cprng.utils.exceptions import OutOfRangeError, PartitionMismatchError, UndefinedEstimateError

if TYPE_CHECKING:
    from cprng.models.sampler import SampledStream

FloatArray = npt.NDArray[np.float64]


def box_edge(i, m: int):
    """Left edge s_i = -1 + 2i/M (works on scalars and integer arrays)."""
    return -1.0 + 2.0 * i / m


def box_indices(xs: npt.ArrayLike, m: int) -> npt.NDArray[np.int64]:
    """
    Box index of every value.

    The floor formula floor((x + 1) M / 2) is corrected against the exact
    edges so that s_i always lands in box i and 1 lands in box M - 1.
    Rounding overshoot up to RANGE_TOLERANCE counts as the nearest end box.

    Raises:
        OutOfRangeError: If a value is outside [-1, 1] or NaN
    """
    xs = np.asarray(xs, dtype=np.float64)
    inside = (xs >= STATE_LOW) & (xs <= STATE_HIGH)
    if xs.size and not np.all(inside):
        bad = xs[~inside]
        raise OutOfRangeError(f"{bad.size} value(s) outside [-1, 1], first {bad.flat[0]!r}")

    idx = np.floor((xs + 1.0) * (m / 2.0)).astype(np.int64)
    np.clip(idx, 0, m - 1, out=idx)
    idx -= xs < box_edge(idx, m)
    idx += (idx < m - 1) & (xs >= box_edge(idx + 1, m))
    np.clip(idx, 0, m - 1, out=idx)
    return idx


@dataclass(frozen=True)
class Partition1D:
    """Regular partition of [-1, 1] into M boxes of width 2/M."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("partition needs at least one box")

    @property
    def width(self) -> float:
        return 2.0 / self.m

    def edges(self) -> FloatArray:
        return box_edge(np.arange(self.m + 1), self.m)

    def index(self, x: float) -> int:
        return int(box_indices(np.array([x]), self.m)[0])


@dataclass(frozen=True)
class Partition2D:
    """Regular partition of [-1, 1]^2 into M x M boxes of area (2/M)^2."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("partition needs at least one box per axis")

    @property
    def area(self) -> float:
        return (2.0 / self.m) ** 2

    def index(self, x: float, y: float) -> tuple:
        return (int(box_indices(np.array([x]), self.m)[0]), int(box_indices(np.array([y]), self.m)[0]))


@dataclass
class HistogramAccumulator1D:
    """Counts #r_i of values per box. Single writer; combine with ``merge``."""

    partition: Partition1D
    counts: npt.NDArray[np.uint64] = field(default=None)
    n: int = 0

    def __post_init__(self):
        if self.counts is None:
            self.counts = np.zeros(self.partition.m, dtype=np.uint64)

    @classmethod
    def with_boxes(cls, m: int) -> "HistogramAccumulator1D":
        return cls(Partition1D(m))

    def tally(self, x: float) -> "HistogramAccumulator1D":
        """Count one value."""
        self.counts[self.partition.index(x)] += np.uint64(1)
        self.n += 1
        return self

    def tally_many(self, xs: npt.ArrayLike) -> "HistogramAccumulator1D":
        """Count every value of an array."""
        idx = box_indices(xs, self.partition.m)
        _add_counts(self.counts, idx)
        self.n += int(idx.size)
        return self


@dataclass
class HistogramAccumulator2D:
    """Counts #r_ij of pairs per box of the square partition."""

    partition: Partition2D
    counts: npt.NDArray[np.uint64] = field(default=None)
    n: int = 0

    def __post_init__(self):
        if self.counts is None:
            self.counts = np.zeros((self.partition.m, self.partition.m), dtype=np.uint64)

    @classmethod
    def with_boxes(cls, m: int) -> "HistogramAccumulator2D":
        return cls(Partition2D(m))

    def tally(self, x: float, y: float) -> "HistogramAccumulator2D":
        """Count one pair."""
        self.counts[self.partition.index(x, y)] += np.uint64(1)
        self.n += 1
        return self

    def tally_many(self, xs: npt.ArrayLike, ys: npt.ArrayLike) -> "HistogramAccumulator2D":
        """Count the pairs (xs[k], ys[k])."""
        m = self.partition.m
        i = box_indices(xs, m)
        j = box_indices(ys, m)
        if i.shape != j.shape:
            raise ValueError("x and y must have the same length")
        _add_counts(self.counts.reshape(-1), i * m + j)
        self.n += int(i.size)
        return self


Accumulator = Union[HistogramAccumulator1D, HistogramAccumulator2D]


def tally_1d(acc: HistogramAccumulator1D, x: float) -> HistogramAccumulator1D:
    """Count x in its box; the accumulator is updated in place and returned."""
    return acc.tally(x)


def tally_2d(acc: HistogramAccumulator2D, x: float, y: float) -> HistogramAccumulator2D:
    return acc.tally(x, y)


def _add_counts(flat_counts: npt.NDArray[np.uint64], idx: npt.NDArray[np.int64]) -> None:
    if idx.size == 0:
        return
    if idx.size * 8 >= flat_counts.size:
        flat_counts += np.bincount(idx, minlength=flat_counts.size).astype(np.uint64)
    else:
        np.add.at(flat_counts, idx, np.uint64(1))


def merge(a: Accumulator, b: Accumulator) -> Accumulator:
    """
    Sum two accumulators over the same partition into a new one.

    Raises:
        PartitionMismatchError: If the partitions differ
    """
    if type(a) is not type(b) or a.partition != b.partition:
        raise PartitionMismatchError(f"cannot merge {a.partition} with {b.partition}")
    return type(a)(partition=a.partition, counts=a.counts + b.counts, n=a.n + b.n)


@dataclass(frozen=True)
class DensityEstimate:
    """Step density P_{M,N}; uniform value 0.5."""

    values: FloatArray
    uniform = 0.5

    @property
    def m(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class CorrelationEstimate:
    """Step density C_{M,N} on the square; uniform value 0.25."""

    values: FloatArray
    uniform = 0.25

    @property
    def m(self) -> int:
        return self.values.shape[0]


Estimate = Union[DensityEstimate, CorrelationEstimate]


def density(acc: HistogramAccumulator1D) -> DensityEstimate:
    """
    P_i = (1/2) (M/N) #r_i.

    Raises:
        UndefinedEstimateError: If nothing was tallied
    """
    if acc.n == 0:
        raise UndefinedEstimateError("density of an empty accumulator")
    m = acc.partition.m
    return DensityEstimate(values=0.5 * (m / acc.n) * acc.counts.astype(np.float64))


def correlation(acc: HistogramAccumulator2D) -> CorrelationEstimate:
    """
    C_ij = (1/4) (M^2/N) #r_ij.

    Raises:
        UndefinedEstimateError: If nothing was tallied
    """
    if acc.n == 0:
        raise UndefinedEstimateError("correlation of an empty accumulator")
    m = acc.partition.m
    return CorrelationEstimate(values=0.25 * (m * m / acc.n) * acc.counts.astype(np.float64))


def _relative_deviation(est: Estimate) -> FloatArray:
    return est.values / est.uniform - 1.0


def discrepancy_l1(est: Estimate) -> float:
    """E1 (or E_C1): mean of |estimate/uniform - 1| over the boxes. Lies in [0, 2]."""
    return float(np.mean(np.abs(_relative_deviation(est))))


def discrepancy_l2_squared(est: Estimate) -> float:
    """E2^2 (or E_C2^2): mean of (estimate/uniform - 1)^2 over the boxes."""
    dev = _relative_deviation(est)
    return float(np.mean(dev * dev))


def grid_table(est: Estimate) -> Dict[str, npt.NDArray]:
    """
    Per-box columns of an estimate, row-major: box index ``i`` (and ``j`` on
    the square), the estimate and its deviation from the uniform value.
    """
    values = est.values
    table: Dict[str, npt.NDArray] = {}
    if values.ndim == 1:
        table["i"] = np.arange(values.shape[0])
    else:
        i, j = np.indices(values.shape)
        table["i"] = i.ravel()
        table["j"] = j.ravel()
    table["value"] = values.ravel()
    table["deviation"] = values.ravel() - est.uniform
    return table


class LaggedPairAccumulator:
    """
    Tallies (v_k, v_{k+lag}) for a value stream that arrives in pieces.

    The last ``lag`` values of each piece are carried over, so the pairs are
    exactly those of the concatenated stream (overlapping pairs).
    """

    def __init__(self, m: int, lag: int = 1):
        if lag < 1:
            raise ValueError("lag must be >= 1")
        self.lag = lag
        self.histogram = HistogramAccumulator2D.with_boxes(m)
        self.values_seen = 0
        self._tail = np.empty(0)

    def feed(self, values: npt.ArrayLike) -> "LaggedPairAccumulator":
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            return self
        joined = np.concatenate((self._tail, values)) if self._tail.size else values
        if joined.size > self.lag:
            self.histogram.tally_many(joined[: -self.lag], joined[self.lag:])
        self._tail = joined[-self.lag:].copy()
        self.values_seen += int(values.size)
        return self

    def estimate(self) -> CorrelationEstimate:
        if self.histogram.n == 0:
            raise UndefinedEstimateError(f"need at least {self.lag + 1} values for lag-{self.lag} pairs")
        return correlation(self.histogram)


def autocorrelation_estimate(values: Union[npt.ArrayLike, "SampledStream"], m: int, lag: int = 1) -> CorrelationEstimate:
    """
    AC_{M,N}: the correlation estimate of consecutive pairs (v_k, v_{k+lag}).

    Accepts a SampledStream (its ``values`` are used) or a plain array.

    Raises:
        UndefinedEstimateError: If there are fewer than lag + 1 values
    """
    values = getattr(values, "values", values)
    return LaggedPairAccumulator(m, lag).feed(values).estimate()

