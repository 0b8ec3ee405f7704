"""Shared sample containers for solutions of second-order linear ODEs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .errors import InvalidParameterError

# A candidate solution: maps a time to a fully differentiated sample.
Candidate = Callable[[float], "SolutionSample"]


@dataclass(frozen=True)
class SolutionSample:
    """Value and first two derivatives of a scalar solution at one time."""

    t: float
    y: complex
    dy: complex
    d2y: complex


@dataclass(frozen=True)
class TimeSeries:
    """Solution sampled on a strictly increasing grid (struct-of-arrays)."""

    grid: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    d2y: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.grid)
        if not (len(self.y) == len(self.dy) == len(self.d2y) == n):
            raise InvalidParameterError("grid and sample arrays must have equal length")
        if n > 1 and not np.all(np.diff(self.grid) > 0):
            raise InvalidParameterError("grid must be strictly increasing")

    def __len__(self) -> int:
        return len(self.grid)

    def __getitem__(self, i: int) -> SolutionSample:
        return SolutionSample(
            float(self.grid[i]), complex(self.y[i]), complex(self.dy[i]), complex(self.d2y[i])
        )

    def __iter__(self) -> Iterator[SolutionSample]:
        for i in range(len(self)):
            yield self[i]

    @property
    def values(self) -> list[SolutionSample]:
        return list(self)
