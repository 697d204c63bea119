"""
Coupling configuration schema for the p-dimensional tent map system.
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


DEFAULT_EPS1 = 1e-14


class RatioRule(str, Enum):
    """How the per-row coupling constants are derived."""

    LINEAR = "linear"
    EXPLICIT = "explicit"


class CouplingConfig(BaseModel):
    """
    Dimension, tent slope and per-row coupling constants.

    Under the linear rule ``eps[i] = (i + 1) * eps1`` (0-based). Under the
    explicit rule the caller supplies the whole vector and ``eps1`` is
    ignored.
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(4, ge=1)
    a: float = 2.0
    eps1: float = DEFAULT_EPS1
    ratio_rule: RatioRule = RatioRule.LINEAR
    eps: Optional[List[float]] = None

    @model_validator(mode="after")
    def build_eps(self) -> "CouplingConfig":
        """Derive the coupling vector and check row dominance."""
        if self.ratio_rule is RatioRule.LINEAR:
            eps = [(i + 1) * self.eps1 for i in range(self.p)]
            object.__setattr__(self, "eps", eps)
        elif self.eps is None or len(self.eps) != self.p:
            raise ValueError(f"explicit coupling needs exactly p={self.p} constants")

        for i, e in enumerate(self.eps):
            if not e >= 0.0:
                raise ValueError(f"eps[{i}]={e} must be >= 0")
            if self.p > 1 and not 1.0 - (self.p - 1) * e > 0.0:
                raise ValueError(
                    f"eps[{i}]={e} outside [0, 1/(p-1)) for p={self.p}; diagonal would not be positive"
                )
        return self

    @property
    def eps_vector(self) -> List[float]:
        """The coupling constants (eps_1, ..., eps_p)."""
        return list(self.eps)
