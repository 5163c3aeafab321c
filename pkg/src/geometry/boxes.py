"""
Carleson boxes, tents, Whitney rectangles and truncated box collections.

A Carleson box over the interval I is ``Q_I = I x (0, |I|)``; the tent of an
apex a is the box over the interval of length y_a centred at x_a. The
generation-i upper Whitney rectangles of I split the slab
``I x [|I|/2^i, |I|/2^(i-1))`` into 2^(i-1) rectangles of equal width.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Tuple, Union

from .dyadic import Interval, Number, ShiftedDyadicGrid, as_fraction, power_of_two


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (self.y > 0 and math.isfinite(self.y) and math.isfinite(self.x)):
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def conjugate(self) -> complex:
        return complex(self.x, -self.y)

    def __str__(self) -> str:
        return f"{self.x:g}{self.y:+g}i"


@dataclass(frozen=True)
class Rectangle:
    """Axis-parallel rectangle xrange x yrange (may extend below y = 0)."""

    xrange: Interval
    yrange: Interval

    @property
    def center(self) -> Tuple[Fraction, Fraction]:
        return self.xrange.center, self.yrange.center

    def contains_point(self, x: Number, y: Number) -> bool:
        return self.xrange.contains_point(x) and self.yrange.contains_point(y)

    def clip_to_halfplane(self) -> "Rectangle":
        """Intersection with y > 0 (the lower edge becomes the open boundary)."""
        if self.yrange.right <= 0:
            raise ValueError("rectangle lies below the real axis")
        if self.yrange.left >= 0:
            return self
        return Rectangle(self.xrange, Interval.from_endpoints(0, self.yrange.right))

    def bounds(self) -> Tuple[float, float, float, float]:
        x0, x1 = self.xrange.as_floats()
        y0, y1 = self.yrange.as_floats()
        return x0, x1, y0, y1


@dataclass(frozen=True)
class WhitneyRectangle:
    """Upper Whitney rectangle of generation ``generation`` and position ``index``."""

    generation: int
    index: int
    xrange: Interval
    yrange: Interval

    @property
    def rectangle(self) -> Rectangle:
        return Rectangle(self.xrange, self.yrange)

    def contains_point(self, x: Number, y: Number) -> bool:
        return self.rectangle.contains_point(x, y)

    def bounds(self) -> Tuple[float, float, float, float]:
        return self.rectangle.bounds()


@dataclass(frozen=True)
class CarlesonBox:
    """The box ``base x (0, |base|)``."""

    base: Interval

    @classmethod
    def tent(cls, apex: HalfPlanePoint) -> "CarlesonBox":
        """The tent T_a: the box over the interval of length y_a centred at x_a."""
        return cls(Interval.centered(apex.x, apex.y))

    @property
    def height(self) -> Fraction:
        return self.base.length

    @property
    def rectangle(self) -> Rectangle:
        return Rectangle(self.base, Interval(0, self.base.length))

    def contains_point(self, x: Number, y: Number) -> bool:
        y_q = as_fraction(y)
        return self.base.contains_point(x) and 0 < y_q < self.base.length

    def bounds(self) -> Tuple[float, float, float, float]:
        x0, x1 = self.base.as_floats()
        return x0, x1, 0.0, float(self.base.length)


Region = Union[CarlesonBox, WhitneyRectangle, Rectangle]


def whitney_decompose(interval: Interval, max_generation: int) -> List[WhitneyRectangle]:
    """Upper Whitney rectangles of generations 1..max_generation over ``interval``.

    The rectangles are pairwise disjoint and their union is
    ``interval x [|interval|/2^G, |interval|)``.
    """
    if max_generation < 1:
        raise ValueError("max_generation must be at least 1")
    rectangles: List[WhitneyRectangle] = []
    length = interval.length
    for generation in range(1, max_generation + 1):
        width = length / 2 ** (generation - 1)
        yrange = Interval(length / 2**generation, length / 2**generation)
        for index in range(1, 2 ** (generation - 1) + 1):
            xrange = Interval(interval.left + (index - 1) * width, width)
            rectangles.append(WhitneyRectangle(generation, index, xrange, yrange))
    return rectangles


def upper_box(interval: Interval) -> WhitneyRectangle:
    """The top Whitney rectangle ``Q_I^up = I x [|I|/2, |I|)``."""
    return whitney_decompose(interval, 1)[0]


def dilate(region: Region, factor: Number) -> Rectangle:
    """Dilate about the centre by ``factor`` in (1, 3); the result may protrude below y = 0."""
    factor_q = as_fraction(factor)
    if not 1 < factor_q < 3:
        raise ValueError(f"dilation factor must lie in (1, 3), got {factor}")
    rectangle = region if isinstance(region, Rectangle) else region.rectangle
    return Rectangle(rectangle.xrange.scaled(factor_q), rectangle.yrange.scaled(factor_q))


def enclosing_interval(z: HalfPlanePoint, zeta: HalfPlanePoint) -> Interval:
    """Interval centred at (x_z + x_zeta)/2 of length 2|conj(zeta) - z|.

    Both points lie in the Carleson box over the returned interval.
    """
    distance = abs(zeta.conjugate - z.z)
    return Interval.centered((Fraction(zeta.x) + Fraction(z.x)) / 2, 2 * Fraction(distance))


@dataclass(frozen=True)
class TruncatedBoxCollection:
    """Grid boxes of one grid whose bases meet ``window``, for levels in [level_min, level_max]."""

    grid_id: int
    level_min: int
    level_max: int
    window: Interval

    @property
    def grid(self) -> ShiftedDyadicGrid:
        return ShiftedDyadicGrid(self.grid_id)

    @property
    def levels(self) -> range:
        """Levels in enumeration order (descending)."""
        return range(self.level_max, self.level_min - 1, -1)

    def cells(self) -> Iterator[Tuple[int, int]]:
        """(level, index) pairs, level descending then left ascending."""
        grid = self.grid
        for level in self.levels:
            for index in grid.indices_meeting(self.window, level):
                yield level, index

    def boxes_containing(self, x: Number, y: Number) -> List[Tuple[int, int]]:
        """(level, index) of the enumerated boxes that contain the point (x, y)."""
        grid = self.grid
        found = []
        for level in self.levels:
            if not as_fraction(y) < power_of_two(level):
                continue
            index = grid.index_of(x, level)
            if self.window.intersects(grid.interval(level, index)):
                found.append((level, index))
        return found

    def widened(self, factor: int = 2, extra_levels: int = 1) -> "TruncatedBoxCollection":
        """Same grid with the window scaled by ``factor`` and ``extra_levels`` more top levels."""
        return TruncatedBoxCollection(
            self.grid_id,
            self.level_min,
            self.level_max + extra_levels,
            self.window.scaled(factor),
        )


def enumerate_boxes(collection: TruncatedBoxCollection) -> List[CarlesonBox]:
    grid = collection.grid
    return [CarlesonBox(grid.interval(level, index)) for level, index in collection.cells()]


def three_grid_collections(
    level_min: int, level_max: int, window: Interval
) -> List[TruncatedBoxCollection]:
    """The same truncation on grids 1, 2 and 3."""
    return [TruncatedBoxCollection(grid_id, level_min, level_max, window) for grid_id in (1, 2, 3)]


def in_strict_descendants(
    grid: ShiftedDyadicGrid, level: int, index: int, x: Number, y: Number
) -> bool:
    """Whether (x, y) lies in a strictly smaller grid box inside Q_I, I = cell (level, index).

    The union of those boxes is the box over the child cells, i.e. ``I x (0, |I|/2)``.
    """
    box = CarlesonBox(grid.interval(level, index))
    if not box.contains_point(x, y):
        return False
    child = grid.cell_containing(x, level - 1)
    return CarlesonBox(child).contains_point(x, y)


def dilated_upper_overlap(
    x: Number, y: Number, collection: TruncatedBoxCollection, factor: Number = Fraction(3, 2)
) -> int:
    """Number of boxes of ``collection`` whose dilated upper box contains (x, y)."""
    x_q, y_q = as_fraction(x), as_fraction(y)
    factor_q = as_fraction(factor)
    grid = collection.grid
    # factor * Q^up at level j spans heights (3 - factor)/4 * 2^j .. (3 + factor)/4 * 2^j
    low = (3 - factor_q) / 4
    high = (3 + factor_q) / 4
    level_lo = max(collection.level_min, math.floor(math.log2(float(y_q / high))) - 1)
    level_hi = min(collection.level_max, math.ceil(math.log2(float(y_q / low))) + 1)
    reach = math.ceil(factor_q)
    count = 0
    for level in range(level_lo, level_hi + 1):
        center = grid.index_of(x_q, level)
        for index in range(center - reach, center + reach + 1):
            cell = grid.interval(level, index)
            if not collection.window.intersects(cell):
                continue
            if dilate(upper_box(cell), factor_q).contains_point(x_q, y_q):
                count += 1
    return count
