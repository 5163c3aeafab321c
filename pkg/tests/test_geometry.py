from fractions import Fraction
from fractions import Fraction as F

import numpy as np
import pytest

from src.geometry import (
    CarlesonBox,
    HalfPlanePoint,
    Interval,
    Rectangle,
    ShiftedDyadicGrid,
    TruncatedBoxCollection,
    cover_interval,
    dilate,
    dilated_upper_overlap,
    enclosing_interval,
    enumerate_boxes,
    in_strict_descendants,
    three_grid_collections,
    upper_box,
    whitney_decompose,
)


class TestInterval:
    def test_half_open(self):
        interval = Interval.from_endpoints(0, 1)
        assert interval.contains_point(0)
        assert not interval.contains_point(1)
        assert interval.right == 1

    def test_exact_from_floats(self):
        interval = Interval.from_endpoints(0.1, 0.3)
        assert interval.left == Fraction(0.1)
        assert isinstance(interval.length, Fraction)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Interval(0, 0)

    def test_intersection(self):
        a = Interval.from_endpoints(0, 2)
        b = Interval.from_endpoints(1, 3)
        assert a.intersection(b) == Interval.from_endpoints(1, 2)
        assert Interval.from_endpoints(0, 1).intersection(Interval.from_endpoints(1, 2)) is None

    def test_scaled_keeps_center(self):
        scaled = Interval.from_endpoints(0, 1).scaled(Fraction(3, 2))
        assert scaled == Interval.from_endpoints(Fraction(-1, 4), Fraction(5, 4))


class TestShiftedDyadicGrid:
    def test_unknown_grid(self):
        with pytest.raises(ValueError):
            ShiftedDyadicGrid(4)

    def test_standard_grid_cells(self):
        grid = ShiftedDyadicGrid(1)
        assert grid.interval(0, 3) == Interval(3, 1)
        assert grid.interval(-2, 1) == Interval(Fraction(1, 4), Fraction(1, 4))

    def test_shift_alternates_with_level(self):
        grid = ShiftedDyadicGrid(2)
        assert grid.interval(1, 0).left == Fraction(2, 3)
        assert grid.interval(0, 0).left == Fraction(-1, 3)

    @pytest.mark.parametrize("grid_id", [1, 2, 3])
    @pytest.mark.parametrize("level", [-2, -1, 0, 1, 2])
    def test_children_tile_parent(self, grid_id, level):
        grid = ShiftedDyadicGrid(grid_id)
        for index in range(-3, 4):
            parent = grid.interval(level, index)
            first, second = grid.children(level, index)
            left = grid.interval(level - 1, first)
            right = grid.interval(level - 1, second)
            assert left.left == parent.left
            assert left.right == right.left
            assert right.right == parent.right
            assert grid.parent(level - 1, first) == index
            assert grid.parent(level - 1, second) == index

    @pytest.mark.parametrize("grid_id", [1, 2, 3])
    def test_cell_containing(self, grid_id):
        grid = ShiftedDyadicGrid(grid_id)
        for x in (Fraction(-7, 5), Fraction(0), Fraction(2, 3), Fraction(11, 4)):
            for level in (-3, 0, 2):
                assert grid.cell_containing(x, level).contains_point(x)


class TestCover:
    @pytest.mark.parametrize(
        "left, right, grid_id, cell, ratio",
        [
            (F(9, 10), F(11, 10), 2, (F(2, 3), F(7, 6)), F(5, 2)),
            (F(-1, 10), F(1, 10), 2, (F(-1, 3), F(1, 6)), F(5, 2)),
            (F(0), F(1), 1, (F(0), F(1)), F(1)),
        ],
    )
    def test_known_covers(self, left, right, grid_id, cell, ratio):
        result = cover_interval(Interval.from_endpoints(left, right))
        assert result.grid_id == grid_id
        assert result.interval == Interval.from_endpoints(*cell)
        assert result.ratio == ratio
        assert not result.escalated

    def test_cover_ratio_at_most_three(self):
        for k in range(-40, 41):
            interval = Interval(Fraction(k, 7), Fraction(3, 10))
            result = cover_interval(interval)
            assert result.interval.contains(interval)
            assert result.ratio <= (6 if result.escalated else 3)

    @pytest.mark.slow
    def test_cover_log_uniform_lengths(self):
        rng = np.random.default_rng(11)
        lengths = 2.0 ** rng.uniform(-20.0, 20.0, 10_000)
        lefts = rng.uniform(-100.0, 100.0, 10_000) - lengths / 2.0
        for left, length in zip(lefts, lengths):
            interval = Interval(Fraction(float(left)), Fraction(float(length)))
            result = cover_interval(interval)
            assert result.interval.contains(interval)
            assert result.ratio <= (6 if result.escalated else 3)


class TestBoxes:
    def test_half_plane_point(self):
        with pytest.raises(ValueError):
            HalfPlanePoint(0.0, 0.0)
        assert HalfPlanePoint.from_complex(1 + 2j).conjugate == 1 - 2j

    def test_tent(self):
        tent = CarlesonBox.tent(HalfPlanePoint(1.0, 2.0))
        assert tent.base == Interval.from_endpoints(0, 2)
        assert tent.height == 2
        assert tent.contains_point(1, 1)
        assert not tent.contains_point(1, 2)

    def test_whitney_counts(self):
        assert len(whitney_decompose(Interval.from_endpoints(0, 1), 2)) == 3
        rectangles = whitney_decompose(Interval.from_endpoints(2, 6), 3)
        assert len(rectangles) == 7
        deepest = [r for r in rectangles if r.generation == 3]
        assert len(deepest) == 4
        assert all(r.yrange == Interval.from_endpoints(Fraction(1, 2), 1) for r in deepest)

    def test_whitney_rectangles_tile_the_slab(self):
        rectangles = whitney_decompose(Interval.from_endpoints(0, 4), 4)
        total = sum(r.xrange.length * r.yrange.length for r in rectangles)
        assert total == 4 * (4 - Fraction(4, 16))

    def test_upper_box(self):
        top = upper_box(Interval.from_endpoints(-2, 2))
        assert top.xrange == Interval.from_endpoints(-2, 2)
        assert top.yrange == Interval.from_endpoints(2, 4)

    def test_dilate(self):
        rectangle = Rectangle(Interval.from_endpoints(0, 1), Interval.from_endpoints(1, 2))
        dilated = dilate(rectangle, Fraction(3, 2))
        assert dilated.xrange == Interval.from_endpoints(Fraction(-1, 4), Fraction(5, 4))
        assert dilated.yrange == Interval.from_endpoints(Fraction(3, 4), Fraction(9, 4))
        with pytest.raises(ValueError):
            dilate(rectangle, 3)

    def test_enclosing_interval(self):
        z = HalfPlanePoint(0.0, 1.0)
        assert enclosing_interval(z, z) == Interval.from_endpoints(-2, 2)
        zeta = HalfPlanePoint(3.0, 0.5)
        box = CarlesonBox(enclosing_interval(z, zeta))
        assert box.contains_point(z.x, z.y)
        assert box.contains_point(zeta.x, zeta.y)

    def test_enclosing_interval_contains_random_pairs(self):
        rng = np.random.default_rng(5)
        xs = rng.uniform(-100.0, 100.0, (10_000, 2))
        ys = 2.0 ** rng.uniform(-10.0, 10.0, (10_000, 2))
        for (x0, x1), (y0, y1) in zip(xs, ys):
            z = HalfPlanePoint(float(x0), float(y0))
            zeta = HalfPlanePoint(float(x1), float(y1))
            box = CarlesonBox(enclosing_interval(z, zeta))
            assert box.contains_point(z.x, z.y)
            assert box.contains_point(zeta.x, zeta.y)


class TestCollections:
    def test_enumerate_boxes(self):
        window = Interval.from_endpoints(0, 4)
        assert len(enumerate_boxes(TruncatedBoxCollection(1, 0, 0, window))) == 4
        boxes = enumerate_boxes(TruncatedBoxCollection(1, 0, 1, window))
        assert len(boxes) == 6
        assert boxes[0].base.length == 2

    def test_three_grids(self):
        collections = three_grid_collections(-1, 1, Interval.from_endpoints(-1, 1))
        assert [c.grid_id for c in collections] == [1, 2, 3]

    def test_boxes_containing(self):
        collection = TruncatedBoxCollection(1, -2, 0, Interval.from_endpoints(0, 1))
        assert collection.boxes_containing(0.5, 0.25) == [(0, 0), (-1, 1)]

    def test_widened(self):
        collection = TruncatedBoxCollection(1, -2, 1, Interval.from_endpoints(-1, 1))
        wider = collection.widened()
        assert wider.level_max == 2
        assert wider.window == Interval.from_endpoints(-2, 2)

    def test_strict_descendants(self):
        grid = ShiftedDyadicGrid(1)
        assert in_strict_descendants(grid, 0, 0, 0.25, 0.25)
        assert not in_strict_descendants(grid, 0, 0, 0.25, 0.75)
        assert not in_strict_descendants(grid, 0, 0, 1.5, 0.25)

    def test_dilated_upper_overlap(self):
        collection = TruncatedBoxCollection(1, -3, 3, Interval.from_endpoints(-4, 4))
        assert dilated_upper_overlap(0.3, 0.7, collection) == 1
        for x, y in [(0.1, 0.1), (-1.3, 0.45), (2.9, 3.0)]:
            assert 1 <= dilated_upper_overlap(x, y, collection) <= 9

    def test_dilated_upper_overlap_is_bounded(self):
        collection = TruncatedBoxCollection(1, -3, 3, Interval.from_endpoints(-4, 4))
        rng = np.random.default_rng(3)
        xs = rng.uniform(-3.5, 3.5, 10_000)
        ys = 2.0 ** rng.uniform(-4.0, 3.0, 10_000)
        counts = [dilated_upper_overlap(float(x), float(y), collection) for x, y in zip(xs, ys)]
        assert min(counts) >= 1
        assert max(counts) <= 4
