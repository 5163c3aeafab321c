"""Exact geometry of the upper half-plane: intervals, grids, boxes and Whitney rectangles."""

from .boxes import (
    CarlesonBox,
    HalfPlanePoint,
    Rectangle,
    Region,
    TruncatedBoxCollection,
    WhitneyRectangle,
    dilate,
    dilated_upper_overlap,
    enclosing_interval,
    enumerate_boxes,
    in_strict_descendants,
    three_grid_collections,
    upper_box,
    whitney_decompose,
)
from .dyadic import CoverResult, Interval, ShiftedDyadicGrid, cover_interval

__all__ = [
    "CarlesonBox",
    "CoverResult",
    "HalfPlanePoint",
    "Interval",
    "Rectangle",
    "Region",
    "ShiftedDyadicGrid",
    "TruncatedBoxCollection",
    "WhitneyRectangle",
    "cover_interval",
    "dilate",
    "dilated_upper_overlap",
    "enclosing_interval",
    "enumerate_boxes",
    "in_strict_descendants",
    "three_grid_collections",
    "upper_box",
    "whitney_decompose",
]
