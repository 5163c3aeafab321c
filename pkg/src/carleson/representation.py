"""
Numerical checks of the integral representation and the sub-mean-value bound.
"""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from ..geometry import WhitneyRectangle, dilate
from ..quadrature import (
    QuadratureSpec,
    integrate_halfplane_complex,
    integrate_region,
    measure_alpha,
    rectangle_measure,
)
from ..tools.utils import parallel_map
from .testfunctions import TestFunction

logger = logging.getLogger(__name__)


class ReproducingCheck(BaseModel):
    """Ratios f(z) / integral of f(zeta) (i(conj(zeta) - z))^-(alpha+2) dA_alpha(zeta)."""

    alpha: float
    points: List[Tuple[float, float]]
    ratios: List[Tuple[float, float]]
    constant: Tuple[float, float]
    dispersion: float
    max_error: float


class MeanValueCheck(BaseModel):
    alpha: float
    bounds: Tuple[float, float, float, float]
    sup_value: float
    dilated_average: float
    ratio: float


def kernel(z: complex, alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    """zeta -> (i(conj(zeta) - z))^-(alpha+2); the base has positive real part."""
    order = alpha + 2.0

    def evaluate(zeta: np.ndarray) -> np.ndarray:
        base = 1j * (np.conj(zeta) - z)
        if order.is_integer():
            return np.power(base, -int(order))
        return np.power(base, -order)

    return evaluate


def reproducing_check(
    f: TestFunction,
    points: Sequence[complex],
    alpha: float,
    spec: Optional[QuadratureSpec] = None,
) -> ReproducingCheck:
    """
    Estimate the representation constant at each point and its spread.

    Args:
        f: A test function with t = p, so that f lies in A^p_alpha
        points: Evaluation points z
        alpha: Weight exponent of the kernel and the measure
        spec: Quadrature settings

    Returns:
        Per-point ratios, their mean and the relative dispersion max |r - mean| / |mean|
    """
    spec = spec or QuadratureSpec()
    tail = f.decay() + alpha + 2.0

    def one(z: complex) -> Tuple[complex, float]:
        k = kernel(z, alpha)
        scale = min(f.scale, z.imag)
        estimate = integrate_halfplane_complex(
            lambda zeta: f(zeta) * k(zeta),
            alpha,
            spec.around(f.focus, max(f.scale, z.imag)),
            focus=f.focus,
            scale=scale,
            tail_exponent=tail,
        )
        value = complex(f(np.array([z]))[0])
        return value / estimate.value, estimate.error_bound / abs(estimate.value)

    results = parallel_map(one, [complex(z) for z in points])
    ratios = np.array([r for r, _ in results])
    mean = complex(np.mean(ratios))
    dispersion = float(np.max(np.abs(ratios - mean)) / abs(mean))
    logger.info(f"Representation constant ~ {mean:.8g}, dispersion {dispersion:.2e}")
    return ReproducingCheck(
        alpha=alpha,
        points=[(z.real, z.imag) for z in map(complex, points)],
        ratios=[(r.real, r.imag) for r in ratios],
        constant=(mean.real, mean.imag),
        dispersion=dispersion,
        max_error=max(e for _, e in results),
    )


def mean_value_check(
    f: Callable[[np.ndarray], np.ndarray],
    rectangle: WhitneyRectangle,
    alpha: float,
    spec: Optional[QuadratureSpec] = None,
    samples: int = 9,
) -> MeanValueCheck:
    """
    max_R |f| divided by the dA_alpha average of |f| over 3R/2 within the half-plane.
    """
    spec = spec or QuadratureSpec()
    x0, x1, y0, y1 = rectangle.bounds()
    grid = np.linspace(0.0, 1.0, samples)
    xs = x0 + (x1 - x0) * grid
    ys = y0 + (y1 - y0) * grid
    z = (xs[:, None] + 1j * ys[None, :]).ravel()
    sup_value = float(np.max(np.abs(f(z))))

    dx0, dx1, dy0, dy1 = dilate(rectangle, 1.5).bounds()
    dy0 = max(dy0, 0.0)
    integral = integrate_region(lambda w: np.abs(f(w)), dx0, dx1, dy0, dy1, alpha, spec)
    average = integral.value / measure_alpha(rectangle, alpha)
    ratio = sup_value / average if average > 0.0 else float("inf")
    return MeanValueCheck(
        alpha=alpha,
        bounds=(x0, x1, y0, y1),
        sup_value=sup_value,
        dilated_average=average,
        ratio=ratio,
    )


def dilated_measure(rectangle: WhitneyRectangle, alpha: float) -> float:
    """A_alpha(3R/2 intersected with the half-plane)."""
    x0, x1, y0, y1 = dilate(rectangle, 1.5).bounds()
    return rectangle_measure(x0, x1, max(y0, 0.0), y1, alpha)
