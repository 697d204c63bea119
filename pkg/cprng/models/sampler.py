"""
Chaotic sampling and mixing of the components of the coupled system.

Threshold rule: emit x_n^l exactly when x_n^m lies in ]T, 1[.
Mixing rule: emit x_n^{l1} when x_n^m is in ]T1, T2[, x_n^{l2} when in
[T2, T3[ and x_n^{l3} when in [T3, 1[; emit nothing otherwise.

Indices are positions in the consumed stream (0 = first state handed in),
so callers that warm the generator up first get post-transient positions.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Union

import numpy as np
import numpy.typing as npt

from cprng.schemas.sampler import MixingSamplerConfig, ThresholdSamplerConfig
from cprng.utils.exceptions import UndefinedGapError

StateBlocks = Union[npt.NDArray[np.float64], Iterable[npt.NDArray[np.float64]]]


@dataclass
class SampledStream:
    """Sampled values with the stream positions p_q they came from."""

    values: npt.NDArray[np.float64] = field(default_factory=lambda: np.empty(0))
    source_indices: npt.NDArray[np.int64] = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    bands: npt.NDArray[np.int8] = field(default_factory=lambda: np.empty(0, dtype=np.int8))

    def __len__(self) -> int:
        return int(self.values.size)


class _StreamingSampler:
    """Keeps the global stream offset and the output budget across blocks."""

    def __init__(self, max_out: int, keep: bool = True):
        if max_out < 0:
            raise ValueError("max_out must be >= 0")
        self.max_out = max_out
        self.keep = keep
        self.offset = 0
        self._values: List[np.ndarray] = []
        self._indices: List[np.ndarray] = []
        self._bands: List[np.ndarray] = []
        self.emitted = 0

    @property
    def done(self) -> bool:
        return self.emitted >= self.max_out

    def _select(self, block: np.ndarray):
        raise NotImplementedError

    def feed(self, block: npt.NDArray[np.float64]) -> SampledStream:
        """
        Sample one (k, p) block; returns what this block contributed.

        Stops contributing once ``max_out`` values were emitted in total.
        """
        block = np.asarray(block, dtype=np.float64)
        if block.ndim != 2:
            raise ValueError("expected a (k, p) block of state vectors")
        if block.shape[1] <= self.cfg.max_component:
            raise ValueError(f"sampler uses component {self.cfg.max_component} but states have p={block.shape[1]}")
        rows, values, bands = self._select(block)
        room = self.max_out - self.emitted
        rows, values, bands = rows[:room], values[:room], bands[:room]

        piece = SampledStream(values=values, source_indices=rows.astype(np.int64) + self.offset, bands=bands)
        self.offset += block.shape[0]
        self.emitted += len(piece)
        if self.keep:
            self._values.append(piece.values)
            self._indices.append(piece.source_indices)
            self._bands.append(piece.bands)
        return piece

    def result(self) -> SampledStream:
        if not self._values:
            return SampledStream()
        return SampledStream(
            values=np.concatenate(self._values),
            source_indices=np.concatenate(self._indices),
            bands=np.concatenate(self._bands),
        )

    def run(self, stream: StateBlocks) -> SampledStream:
        if isinstance(stream, np.ndarray):
            stream = [stream]
        for block in stream:
            if self.done:
                break
            self.feed(block)
        return self.result()


class ThresholdSampler(_StreamingSampler):
    """Streaming form of ``sample_threshold``."""

    def __init__(self, cfg: ThresholdSamplerConfig, max_out: int, keep: bool = True):
        super().__init__(max_out, keep)
        self.cfg = cfg

    def _select(self, block):
        control = block[:, self.cfg.control]
        rows = np.flatnonzero((control > self.cfg.threshold) & (control < 1.0))
        values = block[rows, self.cfg.source]
        return rows, values, np.zeros(rows.size, dtype=np.int8)


class MixingSampler(_StreamingSampler):
    """Streaming form of ``sample_mixed``."""

    def __init__(self, cfg: MixingSamplerConfig, max_out: int, keep: bool = True):
        super().__init__(max_out, keep)
        self.cfg = cfg

    def _select(self, block):
        t1, t2, t3 = self.cfg.thresholds
        control = block[:, self.cfg.control]
        band = np.full(control.shape, -1, dtype=np.int8)
        band[(control > t1) & (control < t2)] = 0
        band[(control >= t2) & (control < t3)] = 1
        band[(control >= t3) & (control < 1.0)] = 2

        rows = np.flatnonzero(band >= 0)
        bands = band[rows]
        sources = np.asarray(self.cfg.sources)[bands]
        values = block[rows, sources]
        return rows, values, bands


def sample_threshold(stream: StateBlocks, cfg: ThresholdSamplerConfig, max_out: int) -> SampledStream:
    """
    Emit x_n^source whenever x_n^control > T (strictly, and below 1).

    ``stream`` is one (n, p) array or an iterable of such blocks. Stops
    after ``max_out`` values or at the end of the stream; an empty result is
    valid.
    """
    return ThresholdSampler(cfg, max_out).run(stream)


def sample_mixed(stream: StateBlocks, cfg: MixingSamplerConfig, max_out: int) -> SampledStream:
    """Route x_n^{l1}, x_n^{l2} or x_n^{l3} by the threshold band of x_n^control."""
    return MixingSampler(cfg, max_out).run(stream)


def min_gap(s: SampledStream) -> int:
    """
    Smallest distance p_{q+1} - p_q between consecutive sampled positions.

    Raises:
        UndefinedGapError: If the stream has fewer than two samples
    """
    if len(s) < 2:
        raise UndefinedGapError(f"min_gap needs at least 2 samples, got {len(s)}")
    return int(np.min(np.diff(s.source_indices)))
