"""Guessing functions: value -> box / position mappings.

Boxes are 1-based throughout the public surface (box 1 holds the smallest
keys, box N the largest).  The global map is a straight line through the two
terminals ``(x_min, 1)`` and ``(x_max, N)`` or, in the statistical variant,
a line laid over ``(mean - 3 sigma, mean + 3 sigma)``.  The refined map adjusts
the global map inside each box using the prefix-sum occupancy table.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import accumulate
from typing import Union

from .errors import (
    DegenerateMapper,
    EmptyBox,
    EmptyInput,
    NonFiniteKey,
    OutOfRange,
    RangeOverflow,
)


def as_keys(records: Iterable[float]) -> list[float]:
    """Copy ``records`` into a list of floats, rejecting NaN and infinities."""
    keys = list(map(float, records))
    if not all(map(math.isfinite, keys)):
        for i, x in enumerate(keys):
            if not math.isfinite(x):
                raise NonFiniteKey(i, x)
    return keys


@dataclass(frozen=True)
class TwoTerminalMapper:
    x_min: float
    x_max: float
    n_boxes: int
    k_global: float
    degenerate: bool

    @classmethod
    def from_bounds(cls, x_min: float, x_max: float, n_boxes: int) -> TwoTerminalMapper:
        if n_boxes < 1:
            raise ValueError("n_boxes must be >= 1")
        if not x_min <= x_max:
            raise ValueError(f"x_min {x_min!r} > x_max {x_max!r}")
        if x_max == x_min or n_boxes == 1:
            return cls(x_min, x_max, n_boxes, 0.0, True)
        span = x_max - x_min
        k = (n_boxes - 1) / span
        if not (math.isfinite(span) and math.isfinite(k)):
            raise RangeOverflow(f"key span {x_min!r}..{x_max!r} gives slope {k!r}")
        return cls(x_min, x_max, n_boxes, k, False)

    @property
    def origin(self) -> float:
        return self.x_min


@dataclass(frozen=True)
class StatisticalMapper:
    mean: float
    sigma: float
    n_boxes: int
    k_global: float
    degenerate: bool

    @classmethod
    def from_moments(cls, mean: float, sigma: float, n_boxes: int) -> StatisticalMapper:
        if n_boxes < 1:
            raise ValueError("n_boxes must be >= 1")
        if not sigma >= 0.0:
            raise ValueError(f"sigma must be >= 0, got {sigma!r}")
        if sigma == 0.0 or n_boxes == 1:
            return cls(mean, sigma, n_boxes, 0.0, True)
        width = 6.0 * sigma
        k = n_boxes / width
        origin = mean - 3.0 * sigma
        if not (math.isfinite(width) and math.isfinite(origin) and math.isfinite(k)):
            raise RangeOverflow(f"mean {mean!r}, sigma {sigma!r} give slope {k!r}")
        return cls(mean, sigma, n_boxes, k, False)

    @property
    def origin(self) -> float:
        """Left edge of the six-sigma window, which lands on box 1."""
        return self.mean - 3.0 * self.sigma


Mapper = Union[TwoTerminalMapper, StatisticalMapper]


def build_two_terminal_mapper(records: Iterable[float]) -> TwoTerminalMapper:
    keys = as_keys(records)
    if not keys:
        raise EmptyInput("cannot build a mapper from no records")
    return TwoTerminalMapper.from_bounds(min(keys), max(keys), len(keys))


def map_g1(m: TwoTerminalMapper, x: float) -> int:
    """Box index ``floor((x - x_min) * k_global) + 1``; x_max always lands in box N."""
    if m.degenerate:
        raise DegenerateMapper("two-terminals mapper is degenerate; use box 1")
    if not m.x_min <= x <= m.x_max:
        raise OutOfRange(x, m.x_min, m.x_max)
    # the product rounds either way at x_max: N + 1 and N - 1 both occur
    if x == m.x_max:
        return m.n_boxes
    return min(math.floor((x - m.x_min) * m.k_global) + 1, m.n_boxes)


def population_moments(keys: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation, centred in a second pass."""
    n = len(keys)
    try:
        mean = math.fsum(keys) / n
        var = math.fsum((x - mean) ** 2 for x in keys) / n
    except OverflowError as exc:
        raise RangeOverflow(f"moments overflow: {exc}") from None
    if not (math.isfinite(mean) and math.isfinite(var)):
        raise RangeOverflow("moments overflow")
    return mean, math.sqrt(var)


def build_statistical_mapper(records: Iterable[float]) -> StatisticalMapper:
    keys = as_keys(records)
    if not keys:
        raise EmptyInput("cannot build a mapper from no records")
    return statistical_mapper_for(keys)


def statistical_mapper_for(keys: Sequence[float]) -> StatisticalMapper:
    """Statistical mapper for already validated, non-empty keys."""
    mean, sigma = population_moments(keys)
    if sigma == 0.0 and min(keys) != max(keys):
        # squared deviations underflowed (e.g. keys near 1e-200): unequal keys, no usable slope
        raise RangeOverflow(f"sigma underflows to 0 for keys spanning {min(keys)!r}..{max(keys)!r}")
    return StatisticalMapper.from_moments(mean, sigma, len(keys))


def map_stat(m: StatisticalMapper, x: float) -> int:
    """Box index over the six-sigma window, clamped into [1, N]."""
    if m.degenerate:
        raise DegenerateMapper("statistical mapper is degenerate; use box 1")
    t = (x - m.origin) * m.k_global
    # compare before flooring: t may be huge or infinite far outside the window
    if t >= m.n_boxes:
        return m.n_boxes
    if t < 0.0:
        return 1
    return math.floor(t) + 1


def box_of(m: Mapper, x: float) -> int:
    if isinstance(m, TwoTerminalMapper):
        return map_g1(m, x)
    return map_stat(m, x)


@dataclass(frozen=True)
class DistributionArray:
    """Prefix sums of box occupancy; ``self[n]`` counts records in boxes 1..n."""

    a: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if n == 0:
            return 0
        if not 1 <= n <= len(self.a):
            raise IndexError(f"box {n} outside 1..{len(self.a)}")
        return self.a[n - 1]

    def __len__(self) -> int:
        return len(self.a)

    @property
    def total(self) -> int:
        return self.a[-1] if self.a else 0

    def occupancy(self, n: int) -> int:
        return self[n] - self[n - 1]


def build_distribution_array(occupancies: Sequence[int]) -> DistributionArray:
    if any(c < 0 for c in occupancies):
        raise ValueError("occupancies must be non-negative")
    return DistributionArray(tuple(accumulate(occupancies)))


@dataclass(frozen=True)
class RefinedMapper:
    base: Mapper
    dist: DistributionArray


def refine(base: Mapper, records: Iterable[float]) -> RefinedMapper:
    """Scatter ``records`` through ``base`` and attach the resulting occupancy table."""
    if base.degenerate:
        raise DegenerateMapper("cannot refine a degenerate mapper")
    counts = [0] * base.n_boxes
    for x in records:
        counts[box_of(base, x) - 1] += 1
    return RefinedMapper(base, build_distribution_array(counts))


def local_tangent(m: RefinedMapper, n: int) -> float:
    """Slope of the refined map inside box ``n``: ``k_global * (occupancy - 1)``."""
    c = m.dist.occupancy(n)
    if c == 0:
        raise EmptyBox(n)
    return m.base.k_global * (c - 1)


def map_g2(m: RefinedMapper, x: float) -> int:
    """Final position in ``[1, total]`` predicted by the refined map.

    The line through ``(x_low, A[n-1] + 1)`` with the local tangent, where
    ``x_low`` is the left edge of box ``n``; the result is clamped into the
    box's slot range ``[A[n-1] + 1, A[n]]`` to absorb rounding.
    """
    n = box_of(m.base, x)
    lo_slot = m.dist[n - 1] + 1
    hi_slot = m.dist[n]
    k_local = local_tangent(m, n)
    x_low = (n - 1) / m.base.k_global + m.base.origin
    t = (x - x_low) * k_local
    if t < 0.0:
        return lo_slot
    if t >= hi_slot - lo_slot:
        return hi_slot
    return lo_slot + math.floor(t)
