"""
Measures and integrals against dA_alpha = (1/pi)(alpha+1)(2y)^alpha dx dy.

Closed forms are used wherever the region is a rectangle and the integrand
is constant; everything else goes through the adaptive engine.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from ..geometry import CarlesonBox, Rectangle, Region, WhitneyRectangle
from ..symbols.expressions import SymbolExpression
from .engine import (
    CartesianChart,
    CubatureResult,
    Integrand,
    PolarChart,
    adaptive_cubature,
    graded_breaks,
    merge_breaks,
)
from .models import ComplexEstimate, IntegralEstimate, QuadratureSpec, TailModel, WeightParameter

logger = logging.getLogger(__name__)

AlphaLike = Union[float, WeightParameter]

_SAMPLE_STRETCH = 12.0


def _alpha(alpha: AlphaLike) -> float:
    value = alpha.alpha if isinstance(alpha, WeightParameter) else float(alpha)
    if not value > -1.0:
        raise ValueError(f"alpha must be greater than -1, got {value}")
    return value


def rectangle_measure(x0: float, x1: float, y0: float, y1: float, alpha: AlphaLike) -> float:
    """dA_alpha measure of [x0, x1] x [y0, y1] intersected with y > 0."""
    a = _alpha(alpha)
    y0 = max(y0, 0.0)
    if x1 <= x0 or y1 <= y0:
        return 0.0
    return (x1 - x0) * (2.0**a / math.pi) * (y1 ** (a + 1.0) - y0 ** (a + 1.0))


def measure_alpha(region: Region, alpha: AlphaLike) -> float:
    """Exact dA_alpha measure of a box, tent, Whitney rectangle or clipped rectangle.

    For a box over I this is (2^alpha / pi) |I|^(alpha + 2).
    """
    a = _alpha(alpha)
    if isinstance(region, CarlesonBox):
        return (2.0**a / math.pi) * float(region.height) ** (a + 2.0)
    if isinstance(region, WhitneyRectangle):
        region = region.rectangle
    if isinstance(region, Rectangle):
        return rectangle_measure(*region.bounds(), a)
    raise TypeError(f"unsupported region type {type(region).__name__}")


def descendant_union_measure(box: CarlesonBox, alpha: AlphaLike) -> float:
    """Measure of the union of the strictly smaller grid boxes in ``box`` (= I x (0, |I|/2))."""
    x0, x1, _, y1 = box.bounds()
    return rectangle_measure(x0, x1, 0.0, 0.5 * y1, alpha)


def half_sine_moment(alpha: float) -> float:
    """Integral of sin(theta)^alpha over (0, pi)."""
    return math.sqrt(math.pi) * gamma_fn((alpha + 1.0) / 2.0) / gamma_fn(alpha / 2.0 + 1.0)


def _estimate(result: CubatureResult) -> IntegralEstimate:
    value = result.value.real if isinstance(result.value, complex) else result.value
    return IntegralEstimate(
        value=float(value),
        error_bound=float(result.error),
        cells_used=result.cells,
        converged=result.converged,
    )


def _pole_breaks(spec: QuadratureSpec) -> Tuple[list, list, list]:
    poles = [complex(x, y) for x, y in spec.poles]
    xs = [p.real + s * spec.pole_radius for p in poles for s in (-1.0, 1.0)]
    ys = [p.imag + s * spec.pole_radius for p in poles for s in (-1.0, 1.0)]
    return poles, xs, ys


def integrate_region(
    integrand: Integrand,
    x0: float,
    x1: float,
    y0: float,
    y1: float,
    alpha: AlphaLike,
    spec: QuadratureSpec,
    x_breaks: Optional[Sequence[float]] = None,
    y_breaks: Optional[Sequence[float]] = None,
) -> IntegralEstimate:
    """Integral of a real integrand over [x0, x1] x [y0, y1] (y0 >= 0) against dA_alpha."""
    a = _alpha(alpha)
    y0 = max(y0, 0.0)
    if x1 <= x0 or y1 <= y0:
        return IntegralEstimate.exact(0.0)
    chart = CartesianChart(a)
    poles, pole_xs, pole_ys = _pole_breaks(spec)
    u_breaks = merge_breaks(np.array([x0, x1]), list(x_breaks or []) + pole_xs)
    ys = merge_breaks(np.array([y0, y1]), list(y_breaks or []) + pole_ys)
    v_breaks = [chart.to_chart(float(y)) for y in ys]
    result = adaptive_cubature(
        integrand, chart, u_breaks, v_breaks, spec, poles=poles, pole_radius=spec.pole_radius
    )
    return _estimate(result)


def integrate_region_box(
    integrand: Integrand, region: Region, alpha: AlphaLike, spec: QuadratureSpec
) -> IntegralEstimate:
    """``integrate_region`` over a box, tent, Whitney rectangle or rectangle."""
    x0, x1, y0, y1 = region.bounds()
    return integrate_region(integrand, x0, x1, y0, y1, alpha, spec)


def _boundary_envelope(
    integrand: Integrand, spec: QuadratureSpec, focus: float, exponent: float
) -> float:
    """max |f(z)| |z - focus|^k over samples of the truncation boundary."""
    top = np.linspace(spec.x_lo, spec.x_hi, 513) + 1j * spec.y_hi
    heights = spec.y_hi * np.logspace(-8.0, 0.0, 257)
    sides = np.concatenate([spec.x_lo + 1j * heights, spec.x_hi + 1j * heights])
    z = np.concatenate([top, sides])
    with np.errstate(all="ignore"):
        values = np.abs(np.broadcast_to(np.asarray(integrand(z)), z.shape))
        scaled = values * np.abs(z - focus) ** exponent
    scaled = scaled[np.isfinite(scaled)]
    return float(scaled.max()) if scaled.size else 0.0


def power_law_tail(
    integrand: Integrand, alpha: float, spec: QuadratureSpec, focus: float, exponent: float
) -> float:
    """Bound on the integral outside the truncation for |f| <= C |z - focus|^-k.

    The outside of the window lies outside the half-disk of radius L around
    the focus, where L is the distance to the nearest window edge.
    """
    envelope = _boundary_envelope(integrand, spec, focus, exponent)
    if envelope == 0.0:
        return 0.0
    radius = min(focus - spec.x_lo, spec.x_hi - focus, spec.y_hi)
    constant = (alpha + 1.0) * 2.0**alpha / math.pi * half_sine_moment(alpha)
    return envelope * constant * radius ** (alpha + 2.0 - exponent) / (exponent - alpha - 2.0)


DECAY_RADII = (2.0**8, 2.0**10, 2.0**12, 2.0**14)


def sampled_decay_exponent(
    integrand: Integrand,
    focus: float = 0.0,
    radii: Sequence[float] = DECAY_RADII,
    agreement: float = 0.05,
) -> Optional[float]:
    """
    Decay k with |f| ~ |z - focus|^-k, read off max |f| on growing half-circles.

    Args:
        integrand: Vectorised real function of complex points
        focus: Centre of the half-circles
        radii: Increasing radii
        agreement: Largest spread allowed between the slopes of successive radii

    Returns:
        The smallest observed slope; None when a sample is zero or not finite,
        or when the slopes disagree
    """
    angles = np.linspace(0.0, math.pi, 65)[1:-1]
    logs = []
    for radius in radii:
        z = focus + radius * np.exp(1j * angles)
        with np.errstate(all="ignore"):
            values = np.abs(np.broadcast_to(np.asarray(integrand(z)), z.shape))
        peak = float(values.max())
        if not (math.isfinite(peak) and peak > 0.0):
            return None
        logs.append(math.log(peak))
    slopes = [
        -(logs[i + 1] - logs[i]) / math.log(radii[i + 1] / radii[i]) for i in range(len(radii) - 1)
    ]
    if max(slopes) - min(slopes) > agreement * max(1.0, abs(max(slopes))):
        logger.debug(f"Decay slopes disagree: {slopes}")
        return None
    return min(slopes)


def _halfplane_cubature(
    integrand: Integrand,
    a: float,
    spec: QuadratureSpec,
    focus: float,
    scale: float,
    x_breaks: Optional[Sequence[float]],
    y_breaks: Optional[Sequence[float]],
) -> CubatureResult:
    chart = CartesianChart(a)
    poles, pole_xs, pole_ys = _pole_breaks(spec)
    focus_x = min(max(focus, spec.x_lo), spec.x_hi)
    u_breaks = merge_breaks(
        graded_breaks(spec.x_lo, spec.x_hi, focus_x, scale), list(x_breaks or []) + pole_xs
    )
    ys = merge_breaks(graded_breaks(0.0, spec.y_hi, 0.0, scale), list(y_breaks or []) + pole_ys)
    v_breaks = [chart.to_chart(float(y)) for y in ys]
    return adaptive_cubature(
        integrand, chart, u_breaks, v_breaks, spec, poles=poles, pole_radius=spec.pole_radius
    )


def _tail(
    integrand: Integrand,
    a: float,
    spec: QuadratureSpec,
    focus: float,
    tail_exponent: Optional[float],
) -> Tuple[float, bool]:
    if spec.tail_model == TailModel.NONE or tail_exponent is None:
        return 0.0, False
    if tail_exponent <= a + 2.0:
        return math.inf, True
    return power_law_tail(integrand, a, spec, focus, tail_exponent), False


def integrate_halfplane(
    integrand: Integrand,
    alpha: AlphaLike,
    spec: QuadratureSpec,
    focus: float = 0.0,
    scale: float = 1.0,
    tail_exponent: Optional[float] = None,
    x_breaks: Optional[Sequence[float]] = None,
    y_breaks: Optional[Sequence[float]] = None,
) -> IntegralEstimate:
    """Integral over the upper half-plane: truncation plus power-law tail.

    Args:
        integrand: Vectorised real function of complex points, finite inside the truncation
        alpha: Weight exponent
        spec: Truncation and tolerances
        focus: Abscissa the initial mesh is graded around
        scale: Length scale of the integrand near the focus
        tail_exponent: Declared decay exponent k with |f| = O(|z|^-k); None disables the tail
        x_breaks: Extra vertical breaklines
        y_breaks: Extra horizontal breaklines

    Returns:
        The estimate; ``divergent`` is set when k <= alpha + 2
    """
    a = _alpha(alpha)
    result = _halfplane_cubature(integrand, a, spec, focus, scale, x_breaks, y_breaks)
    estimate = _estimate(result)
    tail, divergent = _tail(integrand, a, spec, focus, tail_exponent)
    if divergent:
        logger.debug(f"Declared decay exponent {tail_exponent} <= alpha + 2; integral diverges")
        return estimate.model_copy(
            update={
                "error_bound": math.inf,
                "tail_estimate": math.inf,
                "converged": False,
                "divergent": True,
            }
        )
    error_bound = estimate.error_bound + tail
    converged = result.converged and error_bound <= spec.tolerance_for(estimate.value)
    logger.debug(
        f"Half-plane integral {estimate.value:.10g} +- {error_bound:.3e} "
        f"(cells={result.cells}, tail={tail:.3e})"
    )
    return estimate.model_copy(
        update={"error_bound": error_bound, "tail_estimate": tail, "converged": converged}
    )


def integrate_halfplane_complex(
    integrand: Integrand,
    alpha: AlphaLike,
    spec: QuadratureSpec,
    focus: float = 0.0,
    scale: float = 1.0,
    tail_exponent: Optional[float] = None,
) -> ComplexEstimate:
    """Complex-valued counterpart of ``integrate_halfplane``."""
    a = _alpha(alpha)
    result = _halfplane_cubature(integrand, a, spec, focus, scale, None, None)
    value = complex(result.value)
    tail, divergent = _tail(integrand, a, spec, focus, tail_exponent)
    error_bound = result.error + tail
    converged = (
        result.converged and not divergent and error_bound <= spec.tolerance_for(abs(value))
    )
    return ComplexEstimate(
        real=value.real,
        imag=value.imag,
        error_bound=error_bound,
        cells_used=result.cells,
        converged=converged,
    )


def integrate_disk(
    integrand: Integrand,
    center: complex,
    radius: float,
    alpha: AlphaLike,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """Integral over the part of the disk |z - center| < radius in the upper half-plane.

    Disks centred on the real axis or contained in the half-plane use polar
    coordinates around the centre; other disks fall back to their bounding box
    (the integrand must then carry its own indicator).
    """
    a = _alpha(alpha)
    center = complex(center)
    if abs(center.imag) <= 1e-15 * max(1.0, radius):
        angles = (0.0, math.pi)
        center = complex(center.real, 0.0)
    elif center.imag >= radius:
        angles = (0.0, 2.0 * math.pi)
    else:
        return integrate_region(
            integrand,
            center.real - radius,
            center.real + radius,
            max(center.imag - radius, 0.0),
            center.imag + radius,
            a,
            spec,
        )
    chart = PolarChart(center, a)
    r_breaks = [0.0] + [radius * 4.0**-k for k in range(8, 0, -1)] + [radius]
    theta_breaks = np.linspace(angles[0], angles[1], 9)
    result = adaptive_cubature(integrand, chart, r_breaks, theta_breaks, spec)
    return _estimate(result)


def _rectangle_indicator(
    bounds: Tuple[float, float, float, float]
) -> Callable[[np.ndarray], np.ndarray]:
    x0, x1, y0, y1 = bounds

    def indicator(w: np.ndarray) -> np.ndarray:
        return (w.real >= x0) & (w.real < x1) & (w.imag >= y0) & (w.imag < y1)

    return indicator


def affine_preimage(
    phi: SymbolExpression, bounds: Tuple[float, float, float, float]
) -> Optional[Tuple[float, float, float, float]]:
    """Preimage of a rectangle under phi(z) = c z + d with real c > 0, clipped to y >= 0.

    Returns None when phi is not of that form, and an empty rectangle
    (x1 == x0) when the preimage misses the half-plane.
    """
    coefficients = phi.affine_coefficients()
    if coefficients is None:
        return None
    c, d = coefficients
    if abs(c.imag) > 1e-14 * abs(c) or c.real <= 0.0:
        return None
    scale = c.real
    x0, x1, y0, y1 = bounds
    px0, px1 = (x0 - d.real) / scale, (x1 - d.real) / scale
    py0, py1 = max((y0 - d.imag) / scale, 0.0), (y1 - d.imag) / scale
    if py1 <= py0:
        return (px0, px0, 0.0, 0.0)
    return (px0, px1, py0, py1)


def _preimage_samples(spec: QuadratureSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Abscissae graded towards the centre of the truncation, log-spaced heights."""
    center = 0.5 * (spec.x_lo + spec.x_hi)
    half = 0.5 * (spec.x_hi - spec.x_lo)
    stretch = np.linspace(-_SAMPLE_STRETCH, _SAMPLE_STRETCH, 513)
    xs = center + half * np.sinh(stretch) / math.sinh(_SAMPLE_STRETCH)
    ys = spec.y_hi * np.logspace(-9.0, 0.0, 257)
    return xs, ys


def preimage_breaks(
    phi: SymbolExpression,
    bounds: Tuple[float, float, float, float],
    spec: QuadratureSpec,
    count: int = 8,
) -> Optional[Tuple[list, list]]:
    """Breaklines cutting the sampled preimage of a rectangle under phi into count x count cells.

    The hull of the samples that phi maps into the rectangle is widened by one
    sample step. Returns None when no sample lands in the rectangle.
    """
    xs, ys = _preimage_samples(spec)
    z = xs[:, None] + 1j * ys[None, :]
    with np.errstate(all="ignore"):
        w = np.broadcast_to(np.asarray(phi.evaluate(z.ravel())), z.size).reshape(z.shape)
        hits = _rectangle_indicator(bounds)(w)
    if not hits.any():
        return None
    ix = np.flatnonzero(hits.any(axis=1))
    iy = np.flatnonzero(hits.any(axis=0))
    x0, x1 = xs[max(ix[0] - 1, 0)], xs[min(ix[-1] + 1, len(xs) - 1)]
    y0 = 0.0 if iy[0] == 0 else ys[iy[0] - 1]
    y1 = ys[min(iy[-1] + 1, len(ys) - 1)]
    return np.linspace(x0, x1, count + 1).tolist(), np.linspace(y0, y1, count + 1).tolist()


def pullback_measure(
    region: Region,
    u: SymbolExpression,
    phi: SymbolExpression,
    q: float,
    alpha: AlphaLike,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """mu_{u,phi,q,alpha}(E) = integral of 1_E(phi(z)) |u(z)|^q dA_alpha(z).

    Affine symbols with a positive real slope are integrated over the exact
    preimage rectangle (in closed form when u is constant); other symbols are
    integrated over the truncation with the indicator, on a mesh seeded by
    ``preimage_breaks`` and bisected at the preimage boundary.
    """
    a = _alpha(alpha)
    bounds = region.bounds()
    preimage = affine_preimage(phi, bounds)
    if preimage is not None:
        px0, px1, py0, py1 = preimage
        if px1 <= px0 or py1 <= py0:
            return IntegralEstimate.exact(0.0)
        if u.is_constant():
            weight = abs(u.constant_value()) ** q
            return IntegralEstimate.exact(weight * rectangle_measure(px0, px1, py0, py1, a))
        return integrate_region(lambda z: np.abs(u.evaluate(z)) ** q, px0, px1, py0, py1, a, spec)

    inside = _rectangle_indicator(bounds)

    def integrand(z: np.ndarray) -> np.ndarray:
        return np.where(inside(phi.evaluate(z)), np.abs(u.evaluate(z)) ** q, 0.0)

    x_breaks, y_breaks = preimage_breaks(phi, bounds, spec) or (None, None)
    return integrate_region(
        integrand, spec.x_lo, spec.x_hi, 0.0, spec.y_hi, a, spec, x_breaks, y_breaks
    )


def bergman_norm(
    f: Integrand,
    p: float,
    alpha: AlphaLike,
    spec: QuadratureSpec,
    focus: float = 0.0,
    scale: float = 1.0,
    tail_exponent: Optional[float] = None,
) -> IntegralEstimate:
    """||f||_{p,alpha} with the error propagated through the p-th root."""
    if p < 1.0:
        raise ValueError(f"p must be at least 1, got {p}")
    power = integrate_halfplane(
        lambda z: np.abs(f(z)) ** p, alpha, spec, focus, scale, tail_exponent
    )
    if power.value <= 0.0:
        error = power.error_bound ** (1.0 / p)
        return power.model_copy(update={"value": 0.0, "error_bound": error})
    norm = power.value ** (1.0 / p)
    error = norm / p * power.error_bound / power.value
    return power.model_copy(update={"value": norm, "error_bound": error})
