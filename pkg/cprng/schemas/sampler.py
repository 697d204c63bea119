"""
Sampler configuration schemas.
"""
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ThresholdSamplerConfig(BaseModel):
    """Select the source component whenever the control component exceeds T."""

    model_config = ConfigDict(frozen=True)

    source: int = Field(0, ge=0)
    control: int = Field(3, ge=0)
    threshold: float = Field(0.998, gt=-1.0, lt=1.0)

    @model_validator(mode="after")
    def distinct_components(self) -> "ThresholdSamplerConfig":
        if self.source == self.control:
            raise ValueError("source and control components must differ")
        return self

    @property
    def max_component(self) -> int:
        return max(self.source, self.control)


class MixingSamplerConfig(BaseModel):
    """
    Route the output among three sources by the band of the control value.

    Bands: ]T1, T2[ selects sources[0], [T2, T3[ selects sources[1],
    [T3, 1[ selects sources[2].
    """

    model_config = ConfigDict(frozen=True)

    sources: Tuple[int, int, int] = (0, 1, 2)
    control: int = Field(3, ge=0)
    thresholds: Tuple[float, float, float] = (0.998, 0.9987, 0.9994)

    @model_validator(mode="after")
    def ordered_and_distinct(self) -> "MixingSamplerConfig":
        t1, t2, t3 = self.thresholds
        if not -1.0 < t1 < t2 < t3 < 1.0:
            raise ValueError("thresholds must satisfy -1 < T1 < T2 < T3 < 1")
        indices = (*self.sources, self.control)
        if min(indices) < 0:
            raise ValueError("component indices must be >= 0")
        if len(set(indices)) != 4:
            raise ValueError("the three sources and the control component must be distinct")
        return self

    @property
    def max_component(self) -> int:
        return max(*self.sources, self.control)
