"""Polya urn view of how later infections split around one infected node."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import check_delta


@dataclass(frozen=True)
class UrnSpec:
    initial_counts: tuple
    increment: int
    draws: int

    def __post_init__(self):
        if not self.initial_counts or any(b < 1 for b in self.initial_counts):
            raise ValueError("initial ball counts must be positive")
        if self.increment < 1:
            raise ValueError("increment must be positive")
        if self.draws < 0:
            raise ValueError("number of draws must be non-negative")

    @classmethod
    def for_node(cls, delta, k: int, draws: int) -> "UrnSpec":
        """Urn for the k-th infected node; the last colour is the source side.

        Colours 1..delta-1 start with one ball, the source-side colour with
        (k-1)(delta-2)+1 balls, and each draw adds delta-2 balls.
        """
        delta = check_delta(delta)
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        counts = (1,) * (delta - 1) + ((k - 1) * (delta - 2) + 1,)
        return cls(counts, delta - 2, draws)


def sample_urn(spec: UrnSpec, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw counts per colour; vectorised over ``size`` independent urns."""
    shape = 1 if size is None else size
    balls = np.tile(np.asarray(spec.initial_counts, dtype=np.float64), (shape, 1))
    drawn = np.zeros_like(balls, dtype=np.int64)
    rows = np.arange(shape)
    for _ in range(spec.draws):
        cum = np.cumsum(balls, axis=1)
        u = rng.random(shape) * cum[:, -1]
        colour = (cum <= u[:, None]).sum(axis=1)
        drawn[rows, colour] += 1
        balls[rows, colour] += spec.increment
    return drawn[0] if size is None else drawn
