from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Union

Mass = Union[float, Fraction]


@dataclass(frozen=True)
class RegularTreeParams:
    """Degree of the ambient infinite regular tree."""

    delta: int

    def __post_init__(self):
        if not isinstance(self.delta, numbers.Integral) or self.delta < 3:
            raise ValueError(f"degree must be an integer >= 3, got {self.delta!r}")


def check_delta(delta) -> int:
    if isinstance(delta, RegularTreeParams):
        return delta.delta
    return RegularTreeParams(delta).delta


class Kind(str, Enum):
    EXACT = "exact-finite-n"
    LIMIT = "limit-closed-form"
    LOWER_BOUND = "lower-bound"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class DistanceDistribution:
    """Probability mass over source-to-estimate distances.

    ``upper`` is only set for bound-valued targets, where ``masses`` holds
    the lower end of each interval.
    """

    masses: Mapping[int, Mass]
    kind: Kind
    meta: Mapping[str, object] = field(default_factory=dict)
    upper: Optional[Mapping[int, Mass]] = None

    def __post_init__(self):
        for d, p in self.masses.items():
            if d < 0:
                raise ValueError(f"negative distance {d}")
            if not -1e-12 <= p <= 1 + 1e-12:
                raise ValueError(f"mass at d={d} outside [0, 1]: {p}")
        if float(sum(self.masses.values())) > 1 + 1e-9:
            raise ValueError("masses sum to more than one")

    def __getitem__(self, d: int) -> Mass:
        return self.masses.get(d, 0)

    @property
    def support(self) -> list[int]:
        return sorted(self.masses)

    def total(self) -> Mass:
        return sum(self.masses.values())

    def cumulative(self, d: int) -> Mass:
        return sum(p for k, p in self.masses.items() if k <= d)
