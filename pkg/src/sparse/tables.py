"""
Box integrals for every box of a truncated grid.

A box Q_I is the disjoint union of its upper slab I x [|I|/2, |I|) and the
boxes of its two children, so integrals over all boxes follow from one pass
of fixed-order rules over the upper slabs (plus the bottom strip under the
finest level) and a sum over children, level by level from the bottom up.

Within a level the cells below the top level are held as one contiguous
index range; position k at level j has its children at positions 2k and
2k + 1 of level j - 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import SingularIntegrandError
from ..geometry import TruncatedBoxCollection
from ..quadrature import QuadratureSpec, cell_rule
from ..symbols import SymbolExpression
from ..tools.utils import parallel_map

logger = logging.getLogger(__name__)

Magnitude = Callable[[np.ndarray], np.ndarray]

BATCH_CELLS = 4096


@dataclass(frozen=True)
class LevelCells:
    """The contiguous range of cells of one level below the top cells."""

    level: int
    first: int
    count: int
    shift: float
    window_start: int
    window_stop: int

    @property
    def length(self) -> float:
        return 2.0**self.level

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.first, self.first + self.count)

    @property
    def lefts(self) -> np.ndarray:
        return self.length * (self.indices + self.shift)

    @property
    def in_window(self) -> np.ndarray:
        """Cells of this level that belong to the collection."""
        indices = self.indices
        return (indices >= self.window_start) & (indices < self.window_stop)


@dataclass
class BoxTable:
    """Per-level arrays of box integrals and their error estimates."""

    values: Dict[int, np.ndarray]
    errors: Dict[int, np.ndarray]

    def total_error(self) -> float:
        return math.fsum(float(e.sum()) for e in self.errors.values())


def real_affine(phi: SymbolExpression) -> Optional[Tuple[float, complex]]:
    """(c, d) when phi(z) = c z + d with real c > 0, else None."""
    coefficients = phi.affine_coefficients()
    if coefficients is None:
        return None
    c, d = coefficients
    if abs(c.imag) > 1e-14 * abs(c) or c.real <= 0.0:
        return None
    return c.real, d


class SlabTable:
    """Integrals over all boxes of one truncated grid collection."""

    def __init__(
        self,
        collection: TruncatedBoxCollection,
        alpha: float,
        order: int = 8,
        check_order: int = 5,
    ):
        self.collection = collection
        self.alpha = alpha
        self.order = order
        self.check_order = check_order
        grid = collection.grid
        top = grid.indices_meeting(collection.window, collection.level_max)
        first, count = top.start, len(top)
        self.layout: Dict[int, LevelCells] = {}
        for level in collection.levels:
            meeting = grid.indices_meeting(collection.window, level)
            self.layout[level] = LevelCells(
                level=level,
                first=first,
                count=count,
                shift=float(grid.level_shift(level)),
                window_start=meeting.start,
                window_stop=meeting.stop,
            )
            first, count = 2 * first + grid.child_offset(level), 2 * count
        logger.debug(
            f"Slab table for grid {collection.grid_id}: levels {collection.level_min}.."
            f"{collection.level_max}, {self.cell_count} cells"
        )

    @property
    def grid_id(self) -> int:
        return self.collection.grid_id

    @property
    def level_min(self) -> int:
        return self.collection.level_min

    @property
    def level_max(self) -> int:
        return self.collection.level_max

    @property
    def cell_count(self) -> int:
        return sum(cells.count for cells in self.layout.values())

    def levels(self) -> List[LevelCells]:
        """Levels from the top down."""
        return [self.layout[level] for level in self.collection.levels]

    def measure(self, level: int) -> float:
        """A_alpha of a box of this level: (2^alpha / pi) 2^{level (alpha + 2)}."""
        return (2.0**self.alpha / math.pi) * (2.0**level) ** (self.alpha + 2.0)

    def _slabs(self, level: int, bottom: bool) -> Tuple[np.ndarray, ...]:
        cells = self.layout[level]
        x0 = cells.lefts
        x1 = x0 + cells.length
        if bottom:
            y0, y1 = np.zeros_like(x0), np.full_like(x0, 0.5 * cells.length)
        else:
            y0, y1 = np.full_like(x0, 0.5 * cells.length), np.full_like(x0, cells.length)
        return x0, x1, y0, y1

    def _batches(self, level: int, bottom: bool) -> List[Tuple[np.ndarray, ...]]:
        bounds = self._slabs(level, bottom)
        return [
            tuple(array[i : i + BATCH_CELLS] for array in bounds)
            for i in range(0, len(bounds[0]), BATCH_CELLS)
        ]

    def _accumulate(
        self, upper: Dict[int, np.ndarray], bottom: np.ndarray
    ) -> Dict[int, np.ndarray]:
        boxes: Dict[int, np.ndarray] = {}
        below = bottom
        for level in range(self.level_min, self.level_max + 1):
            boxes[level] = upper[level] + below
            below = boxes[level][0::2] + boxes[level][1::2]
        return boxes

    def box_integrals(self, magnitude: Magnitude, powers: Sequence[float]) -> Dict[float, BoxTable]:
        """
        Integrals of |f|^e over every box for each exponent e.

        Args:
            magnitude: Vectorised z -> |f(z)|
            powers: Exponents e >= 0; |f| is evaluated once for all of them

        Returns:
            One table per exponent; errors are the gap to a lower-order rule
        """
        powers = [float(e) for e in powers]

        def slab_sums(batch: Tuple[np.ndarray, ...]) -> Tuple[np.ndarray, np.ndarray]:
            sums = []
            for order in (self.order, self.check_order):
                z, w = cell_rule(*batch, self.alpha, order=order)
                with np.errstate(all="ignore"):
                    values = np.asarray(magnitude(z), dtype=float)
                if not np.all(np.isfinite(values)):
                    raise SingularIntegrandError(complex(z[~np.isfinite(values)][0]))
                sums.append(np.stack([np.sum(w * values**e, axis=(1, 2)) for e in powers]))
            return sums[0], np.abs(sums[0] - sums[1])

        def level_sums(level: int, bottom: bool) -> Tuple[np.ndarray, np.ndarray]:
            parts = parallel_map(slab_sums, self._batches(level, bottom))
            return (
                np.concatenate([part[0] for part in parts], axis=1),
                np.concatenate([part[1] for part in parts], axis=1),
            )

        upper_values: Dict[int, np.ndarray] = {}
        upper_errors: Dict[int, np.ndarray] = {}
        for level in range(self.level_min, self.level_max + 1):
            upper_values[level], upper_errors[level] = level_sums(level, bottom=False)
        bottom_values, bottom_errors = level_sums(self.level_min, bottom=True)

        tables = {}
        for k, e in enumerate(powers):
            values = self._accumulate({j: v[k] for j, v in upper_values.items()}, bottom_values[k])
            errors = self._accumulate({j: v[k] for j, v in upper_errors.items()}, bottom_errors[k])
            tables[e] = BoxTable(values=values, errors=errors)
        return tables

    def pullback_table(
        self,
        u: SymbolExpression,
        phi: SymbolExpression,
        q: float,
        spec: Optional[QuadratureSpec] = None,
    ) -> BoxTable:
        """
        mu_{u,phi,q,alpha}(Q) for every box.

        Constant u with phi(z) = cz + d, c > 0, uses the exact preimage
        rectangles. Otherwise quadrature nodes of the slab mesh are pushed
        through phi and binned into slabs, so mass coming from outside the
        truncation footprint is not counted.
        """
        affine = real_affine(phi)
        if u.is_constant() and affine is not None:
            return self._affine_pullback(abs(u.constant_value()) ** q, *affine)
        return self._binned_pullback(u, phi, q)

    def _affine_pullback(self, weight: float, c: float, d: complex) -> BoxTable:
        values, errors = {}, {}
        scale = 2.0**self.alpha / math.pi
        exponent = self.alpha + 1.0
        for cells in self.levels():
            px0 = (cells.lefts - d.real) / c
            width = cells.length / c
            py0 = max(-d.imag / c, 0.0)
            py1 = max((cells.length - d.imag) / c, py0)
            measure = weight * width * scale * (py1**exponent - py0**exponent)
            values[cells.level] = np.full_like(px0, measure)
            errors[cells.level] = np.zeros_like(px0)
        return BoxTable(values=values, errors=errors)

    def _bin(
        self, images: np.ndarray, masses: np.ndarray
    ) -> Tuple[Dict[int, np.ndarray], np.ndarray]:
        x, y = images.real.ravel(), images.imag.ravel()
        masses = masses.ravel()
        keep = np.isfinite(x) & np.isfinite(y) & (y > 0.0) & (masses != 0.0)
        x, y, masses = x[keep], y[keep], masses[keep]
        level_of = np.floor(np.log2(y)).astype(int) + 1

        def binned(cells, select: np.ndarray) -> np.ndarray:
            index = np.floor(x[select] / cells.length - cells.shift).astype(np.int64) - cells.first
            valid = (index >= 0) & (index < cells.count)
            return np.bincount(index[valid], weights=masses[select][valid], minlength=cells.count)

        upper = {cells.level: binned(cells, level_of == cells.level) for cells in self.levels()}
        bottom = binned(self.layout[self.level_min], level_of < self.level_min)
        return upper, bottom

    def _binned_pullback(self, u: SymbolExpression, phi: SymbolExpression, q: float) -> BoxTable:
        def pushed(order: int) -> Tuple[Dict[int, np.ndarray], np.ndarray]:
            upper = {cells.level: np.zeros(cells.count) for cells in self.levels()}
            bottom = np.zeros(self.layout[self.level_min].count)
            slabs = [(level, False) for level in range(self.level_min, self.level_max + 1)]
            slabs.append((self.level_min, True))
            for level, is_bottom in slabs:
                for batch in self._batches(level, is_bottom):
                    z, w = cell_rule(*batch, self.alpha, order=order)
                    with np.errstate(all="ignore"):
                        masses = w * np.abs(u.evaluate(z)) ** q
                        images = phi.evaluate(z)
                    part_upper, part_bottom = self._bin(images, masses)
                    for key, value in part_upper.items():
                        upper[key] += value
                    bottom += part_bottom
            return upper, bottom

        high = self._accumulate(*pushed(self.order))
        low = self._accumulate(*pushed(self.check_order))
        errors = {level: np.abs(high[level] - low[level]) for level in high}
        logger.debug(f"Binned pullback measure on grid {self.grid_id}")
        return BoxTable(values=high, errors=errors)
