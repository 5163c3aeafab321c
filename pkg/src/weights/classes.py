"""
Class constants of B-weights and the Carleson profile of a weight.

The class constant of omega is the supremum over zeta of

    integral of |u(z)|^q omega(z) / |conj(zeta) - phi(z)|^{alpha+2} dA_alpha(z),

estimated over a zeta-lattice with the same refinement rule as the
boundedness certificates.
"""

import logging
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..carleson.certificates import STABILITY_TOLERANCE, LatticeValue
from ..carleson.lattice import ApexLattice
from ..carleson.testing import pullback_focus
from ..geometry import CarlesonBox, HalfPlanePoint
from ..quadrature import (
    IntegralEstimate,
    QuadratureSpec,
    integrate_disk,
    integrate_halfplane,
    integrate_region_box,
    measure_alpha,
)
from ..symbols import WeightExpression
from ..tools.utils import parallel_map
from .params import BWeightParams

logger = logging.getLogger(__name__)


class ClassVerdict(str, Enum):
    IN_CLASS = "in_class"
    NOT_IN_CLASS = "not_in_class"
    INCONCLUSIVE = "inconclusive"


class WeightCertificate(BaseModel):
    """Lattice supremum of the class integral with refinement stability."""

    q: float
    s: float
    alpha: float
    weight: str
    lattice: ApexLattice
    rel_tol: float
    values: List[LatticeValue]
    supremum: float
    argmax: Tuple[float, float]
    refinement_suprema: List[float] = Field(default_factory=list)
    stable: bool
    divergent: bool = Field(False, description="Declared decay too slow: borderline divergence")
    non_converged: int = 0
    verdict: ClassVerdict


class CarlesonRatioProfile(BaseModel):
    """omega(T_{iy}) / A_alpha(T_{iy}) for decreasing y."""

    ys: List[float]
    ratios: List[float]
    step_factors: List[float] = Field(..., description="ratio(y_{k+1}) / ratio(y_k)")
    inverse_scaling: bool = Field(..., description="Every step factor is y_k / y_{k+1} within 5%")


def is_zero_weight(omega: WeightExpression) -> bool:
    return omega.is_constant() and omega.constant_value() == 0


def _divergent_estimate() -> IntegralEstimate:
    return IntegralEstimate(
        value=math.inf,
        error_bound=math.inf,
        converged=False,
        tail_estimate=math.inf,
        divergent=True,
    )


def b_class_value(
    params: BWeightParams, zeta: HalfPlanePoint, spec: Optional[QuadratureSpec] = None
) -> IntegralEstimate:
    """
    The class integral at a fixed zeta.

    Args:
        params: Exponents, symbols and weight
        zeta: Kernel point
        spec: Quadrature settings

    Returns:
        The estimate; ``divergent`` when the declared decay of omega makes the
        integrand decay no faster than |z|^-(alpha+2)
    """
    spec = spec or QuadratureSpec()
    omega, q, alpha = params.omega, params.q, params.alpha
    u, phi = params.u, params.phi
    if is_zero_weight(omega) or (u.is_constant() and u.constant_value() == 0):
        return IntegralEstimate.exact(0.0)
    order = alpha + 2.0
    conjugate = zeta.conjugate

    def integrand(z: np.ndarray) -> np.ndarray:
        return (
            np.abs(u.evaluate(z)) ** q
            * omega.evaluate(z)
            / np.abs(conjugate - phi.evaluate(z)) ** order
        )

    support = omega.disk_support()
    if support is not None:
        center, radius = support
        return integrate_disk(integrand, center, radius, alpha, spec)

    tail = None
    decay = params.weight_decay
    if decay is None and omega.is_constant():
        decay = 0.0
    if decay is not None:
        tail = order + decay
        if tail <= order:
            logger.debug(f"Class integral at {zeta} diverges (borderline decay {tail:g})")
            return _divergent_estimate()
    focus, scale = pullback_focus(phi, zeta)
    return integrate_halfplane(
        integrand, alpha, spec.around(focus, scale), focus=focus, scale=scale, tail_exponent=tail
    )


def _supremum(
    points: Sequence[HalfPlanePoint], estimates: Sequence[IntegralEstimate]
) -> Tuple[float, Tuple[float, float]]:
    values = [math.inf if e.divergent else e.value for e in estimates]
    index = int(np.argmax(values))
    return values[index], (points[index].x, points[index].y)


def b_class_constant(
    params: BWeightParams,
    lattice: Optional[ApexLattice] = None,
    spec: Optional[QuadratureSpec] = None,
    refine: int = 1,
) -> WeightCertificate:
    """
    Supremum of the class integral over a zeta-lattice.

    The verdict is in-class when the supremum is finite and moves by less
    than 5% under the last refinement, not-in-class when it diverges or keeps
    growing, and inconclusive when an integral missed its tolerance.
    """
    lattice = lattice or ApexLattice()
    spec = spec or QuadratureSpec()
    cache: Dict[Tuple[float, float], IntegralEstimate] = {}

    def values(points: List[HalfPlanePoint]) -> List[IntegralEstimate]:
        missing = [zeta for zeta in points if (zeta.x, zeta.y) not in cache]
        computed = parallel_map(lambda zeta: b_class_value(params, zeta, spec), missing)
        for zeta, estimate in zip(missing, computed):
            cache[(zeta.x, zeta.y)] = estimate
        return [cache[(zeta.x, zeta.y)] for zeta in points]

    points = lattice.points()
    estimates = values(points)
    supremum, argmax = _supremum(points, estimates)
    suprema = [supremum]
    current = lattice
    for _ in range(max(refine, 0)):
        current = current.refined()
        refined_points = current.points()
        suprema.append(_supremum(refined_points, values(refined_points))[0])

    old, new = suprema[-2:] if len(suprema) > 1 else (supremum, supremum)
    if old == new:
        change = 0.0
    elif math.isfinite(old) and math.isfinite(new) and old > 0.0:
        change = abs(new - old) / old
    else:
        change = math.inf
    stable = change < STABILITY_TOLERANCE

    everything = list(cache.values())
    divergent = any(e.divergent for e in everything)
    non_converged = sum(1 for e in everything if not e.converged and not e.divergent)
    if divergent or not math.isfinite(supremum):
        verdict = ClassVerdict.NOT_IN_CLASS
    elif non_converged:
        verdict = ClassVerdict.INCONCLUSIVE
    elif stable:
        verdict = ClassVerdict.IN_CLASS
    else:
        verdict = ClassVerdict.NOT_IN_CLASS
    logger.info(f"Weight class of {params.omega}: sup {supremum:.6g}, verdict {verdict.value}")

    return WeightCertificate(
        q=params.q,
        s=params.s,
        alpha=params.alpha,
        weight=str(params.omega),
        lattice=lattice,
        rel_tol=spec.rel_tol,
        values=[
            LatticeValue(
                x=zeta.x, y=zeta.y, value=e.value, error_bound=e.error_bound, converged=e.converged
            )
            for zeta, e in zip(points, estimates)
        ],
        supremum=supremum,
        argmax=argmax,
        refinement_suprema=suprema[1:],
        stable=stable,
        divergent=divergent,
        non_converged=non_converged,
        verdict=verdict,
    )


def weight_measure(
    omega: WeightExpression, region: CarlesonBox, alpha: float, spec: QuadratureSpec
) -> IntegralEstimate:
    """omega(E) = integral over E of omega dA_alpha."""
    if is_zero_weight(omega):
        return IntegralEstimate.exact(0.0)
    if omega.is_constant():
        return IntegralEstimate.exact(omega.eval(1j) * measure_alpha(region, alpha))
    return integrate_region_box(omega.evaluate, region, alpha, spec)


def carleson_ratio_profile(
    omega: WeightExpression,
    alpha: float,
    ys: Sequence[float] = (0.4, 0.2, 0.1, 0.05),
    spec: Optional[QuadratureSpec] = None,
) -> CarlesonRatioProfile:
    """
    omega(T_{iy}) / A_alpha(T_{iy}) along apexes iy tending to the boundary.

    A weight homogeneous of degree -1 near 0 gives ratios growing like 1/y,
    so omega dA_alpha is not a 1-Carleson measure.
    """
    spec = spec or QuadratureSpec()
    tents = [CarlesonBox.tent(HalfPlanePoint(0.0, y)) for y in ys]
    measures = parallel_map(lambda tent: weight_measure(omega, tent, alpha, spec), tents)
    ratios = [m.value / measure_alpha(tent, alpha) for m, tent in zip(measures, tents)]
    factors = [b / a if a > 0.0 else math.inf for a, b in zip(ratios, ratios[1:])]
    expected = [y0 / y1 for y0, y1 in zip(ys, ys[1:])]
    inverse = bool(factors) and all(
        abs(factor / e - 1.0) <= STABILITY_TOLERANCE for factor, e in zip(factors, expected)
    )
    logger.info(f"Carleson ratios of {omega}: {', '.join(f'{r:.4g}' for r in ratios)}")
    return CarlesonRatioProfile(
        ys=list(ys), ratios=ratios, step_factors=factors, inverse_scaling=inverse
    )
