"""
Dyadic maximal operators over the boxes of a truncated collection.
"""

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..geometry import CarlesonBox, HalfPlanePoint, TruncatedBoxCollection
from ..quadrature import QuadratureSpec, integrate_region_box, measure_alpha
from .forms import magnitude_of

logger = logging.getLogger(__name__)


def _containing_boxes(z: HalfPlanePoint, collection: TruncatedBoxCollection) -> List[CarlesonBox]:
    grid = collection.grid
    boxes = [
        CarlesonBox(grid.interval(level, index))
        for level, index in collection.boxes_containing(z.x, z.y)
    ]
    if not boxes:
        raise ValueError(f"no box of the collection contains {z}")
    return boxes


def _box_integrals(
    f: Callable, z: HalfPlanePoint, collection: TruncatedBoxCollection, alpha: float, power: float,
    spec: QuadratureSpec,
) -> List[Tuple[CarlesonBox, float]]:
    magnitude = magnitude_of(f)
    out = []
    for box in _containing_boxes(z, collection):
        estimate = integrate_region_box(lambda w: magnitude(w) ** power, box, alpha, spec)
        out.append((box, max(estimate.value, 0.0)))
    return out


def dyadic_maximal(
    f: Callable,
    z: HalfPlanePoint,
    alpha: float,
    gamma: float,
    collection: TruncatedBoxCollection,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """
    Largest gamma-average of |f| over the boxes of ``collection`` that contain z.

    Args:
        f: Vectorised function
        z: The point
        alpha: Weight exponent
        gamma: Average exponent, at least 1
        collection: Boxes of one grid; its grid decides which boxes contain z
        spec: Quadrature settings

    Returns:
        max over Q containing z of <|f|>_{Q,gamma}
    """
    if gamma < 1.0:
        raise ValueError(f"gamma must be at least 1, got {gamma}")
    spec = spec or QuadratureSpec()
    averages = [
        (integral / measure_alpha(box, alpha)) ** (1.0 / gamma)
        for box, integral in _box_integrals(f, z, collection, alpha, gamma, spec)
    ]
    value = float(np.max(averages))
    logger.debug(f"Dyadic maximal function at {z}: {value:.8g}")
    return value


def fractional_maximal(
    f: Callable,
    z: HalfPlanePoint,
    alpha: float,
    order: float,
    collection: TruncatedBoxCollection,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """max over Q containing z of A_alpha(Q)^{order/2 - 1} * integral over Q of |f| dA_alpha."""
    if not 0.0 < order < 2.0:
        raise ValueError(f"fractional order must lie in (0, 2), got {order}")
    spec = spec or QuadratureSpec()
    values = [
        measure_alpha(box, alpha) ** (order / 2.0 - 1.0) * integral
        for box, integral in _box_integrals(f, z, collection, alpha, 1.0, spec)
    ]
    return float(np.max(values))
