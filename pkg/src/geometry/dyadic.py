"""
Exact dyadic intervals, the three shifted dyadic grids and the three-grid cover.

All coordinates are held as ``fractions.Fraction`` so that nesting, membership
and cover decisions never depend on floating-point rounding. Floats enter only
through ``as_fraction`` (which is exact for binary floats) and leave only
through ``Interval.as_floats``.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]

# grid id -> base shift t; level j uses (-1)^(j+1) * t so that cells nest
GRID_SHIFTS = {1: Fraction(0), 2: Fraction(1, 3), 3: Fraction(-1, 3)}


def as_fraction(value: Number) -> Fraction:
    """Convert an int, float or Fraction to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite coordinate: {value}")
    return Fraction(value)


def power_of_two(level: int) -> Fraction:
    return Fraction(2) ** level


def smallest_level_above(value: Fraction, strict: bool = True) -> int:
    """Smallest integer j with 2^j > value (or >= value when not strict)."""
    if value <= 0:
        raise ValueError("value must be positive")
    j = math.floor(math.log2(float(value)))
    # float log2 may be off by one near exact powers; settle exactly
    while power_of_two(j) > value or (strict and power_of_two(j) == value):
        j -= 1
    while power_of_two(j) < value or (strict and power_of_two(j) == value):
        j += 1
    return j


@dataclass(frozen=True)
class Interval:
    """Half-open interval [left, left + length)."""

    left: Fraction
    length: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", as_fraction(self.left))
        object.__setattr__(self, "length", as_fraction(self.length))
        if self.length <= 0:
            raise ValueError(f"interval length must be positive, got {self.length}")

    @classmethod
    def from_endpoints(cls, left: Number, right: Number) -> "Interval":
        left_q = as_fraction(left)
        return cls(left_q, as_fraction(right) - left_q)

    @classmethod
    def centered(cls, center: Number, length: Number) -> "Interval":
        length_q = as_fraction(length)
        return cls(as_fraction(center) - length_q / 2, length_q)

    @property
    def right(self) -> Fraction:
        return self.left + self.length

    @property
    def center(self) -> Fraction:
        return self.left + self.length / 2

    def contains_point(self, x: Number) -> bool:
        x_q = as_fraction(x)
        return self.left <= x_q < self.right

    def contains(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def intersects(self, other: "Interval") -> bool:
        return self.left < other.right and other.left < self.right

    def intersection(self, other: "Interval") -> Optional["Interval"]:
        left = max(self.left, other.left)
        right = min(self.right, other.right)
        if right <= left:
            return None
        return Interval(left, right - left)

    def scaled(self, factor: Number) -> "Interval":
        """Same center, length multiplied by ``factor``."""
        return Interval.centered(self.center, self.length * as_fraction(factor))

    def as_floats(self) -> Tuple[float, float]:
        return float(self.left), float(self.right)

    def __str__(self) -> str:
        return f"[{self.left}, {self.right})"


@dataclass(frozen=True)
class ShiftedDyadicGrid:
    """One of the three dyadic grids, identified by ``grid_id`` in {1, 2, 3}.

    Grid 1 is the standard grid. Grids 2 and 3 carry the base shifts +1/3 and
    -1/3; the cells of level j are ``[2^j (m + s_j), 2^j (m + 1 + s_j))`` with
    ``s_j = t`` on odd levels and ``s_j = -t`` on even levels.
    """

    grid_id: int

    def __post_init__(self) -> None:
        if self.grid_id not in GRID_SHIFTS:
            raise ValueError(f"grid id must be 1, 2 or 3, got {self.grid_id}")

    @property
    def shift(self) -> Fraction:
        return GRID_SHIFTS[self.grid_id]

    def level_shift(self, level: int) -> Fraction:
        return self.shift if level % 2 == 1 else -self.shift

    def interval(self, level: int, index: int) -> Interval:
        scale = power_of_two(level)
        return Interval(scale * (index + self.level_shift(level)), scale)

    def index_of(self, x: Number, level: int) -> int:
        """Index of the level-``level`` cell containing ``x``."""
        return math.floor(as_fraction(x) / power_of_two(level) - self.level_shift(level))

    def cell_containing(self, x: Number, level: int) -> Interval:
        return self.interval(level, self.index_of(x, level))

    def child_offset(self, level: int) -> int:
        """Index of the left child of cell 0 of ``level`` (children of m are 2m+o, 2m+o+1)."""
        return int(3 * self.level_shift(level))

    def children(self, level: int, index: int) -> Tuple[int, int]:
        first = 2 * index + self.child_offset(level)
        return first, first + 1

    def parent(self, level: int, index: int) -> int:
        return self.index_of(self.interval(level, index).left, level + 1)

    def indices_meeting(self, window: Interval, level: int) -> range:
        """Indices of the level-``level`` cells that intersect ``window``."""
        scale = power_of_two(level)
        shift = self.level_shift(level)
        first = math.floor(window.left / scale - shift)
        last = math.ceil(window.right / scale - shift) - 1
        return range(first, last + 1)

    def cells_meeting(self, window: Interval, level: int) -> Iterator[Interval]:
        for index in self.indices_meeting(window, level):
            yield self.interval(level, index)


@dataclass(frozen=True)
class CoverResult:
    """Grid cell covering an interval, as returned by ``cover_interval``."""

    grid_id: int
    interval: Interval
    level: int
    ratio: Fraction
    escalated: bool = False


def cover_interval(interval: Interval) -> CoverResult:
    """Find a grid cell J containing ``interval`` with |J| <= 3|I|.

    Scales are tried from the smallest dyadic length >= |I| up to the smallest
    dyadic length > 3|I|/2; at each scale grids are tried in id order. At the
    last scale the boundary points of the three grids are 2^j/3 apart, so the
    interval crosses boundaries of at most two grids.

    Args:
        interval: The interval to cover

    Returns:
        The covering cell. An escalated cover used one extra scale and
        satisfies |J| <= 6|I|.
    """
    start = smallest_level_above(interval.length, strict=False)
    stop = smallest_level_above(3 * interval.length / 2, strict=True)
    for level in range(start, stop + 2):
        escalated = level > stop
        if escalated:
            logger.warning(f"Cover of {interval} escalated to level {level}")
        for grid_id in sorted(GRID_SHIFTS):
            cell = ShiftedDyadicGrid(grid_id).cell_containing(interval.left, level)
            if cell.contains(interval):
                return CoverResult(
                    grid_id=grid_id,
                    interval=cell,
                    level=level,
                    ratio=cell.length / interval.length,
                    escalated=escalated,
                )
    raise RuntimeError(f"no grid cell covers {interval} within two scales")
