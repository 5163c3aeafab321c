"""
Boundedness and compactness certificates built from testing integrals.

A certificate states numerical evidence over a finite lattice, never a
theorem: every certificate embeds its lattice, exponents and tolerances.
"""

import logging
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..geometry import HalfPlanePoint
from ..quadrature import IntegralEstimate, QuadratureSpec
from ..symbols import SymbolExpression
from ..tools.utils import parallel_map
from .lattice import ApexLattice, escape_sequences
from .testing import check_exponents, testing_condition_value

logger = logging.getLogger(__name__)

STABILITY_TOLERANCE = 0.05
VANISH_TOLERANCE = 1e-3


class Verdict(str, Enum):
    """Outcome of a lattice certificate."""

    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INCONCLUSIVE = "inconclusive"


class CompactnessVerdict(str, Enum):
    COMPACT = "compact"
    NOT_COMPACT = "not_compact"
    INCONCLUSIVE = "inconclusive"


class LatticeValue(BaseModel):
    """Testing value at one apex."""

    x: float
    y: float
    value: float
    error_bound: float
    converged: bool


class BoundednessCertificate(BaseModel):
    """Supremum of the testing integral over a lattice and its refinements."""

    p: float
    q: float
    alpha: float
    alpha_prime: Optional[float] = Field(
        None, description="Auxiliary weight (alpha+2)p/beta - 2 of a sweep member"
    )
    lattice: ApexLattice
    rel_tol: float
    values: List[LatticeValue]
    supremum: float
    argmax: Tuple[float, float]
    refinement_suprema: List[float] = Field(
        default_factory=list, description="Supremum after each lattice refinement"
    )
    stable: bool
    verdict: Verdict
    non_converged: int = 0
    cells_used: int = 0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.supremum)


class BoundednessSweep(BaseModel):
    """Certificates for W: A^beta -> A^q over a grid of beta in [p, q]."""

    p: float
    q: float
    certificates: List[BoundednessCertificate]
    all_bounded: bool
    monotone: bool = Field(..., description="Supremum non-increasing as beta grows")


class SequenceProfile(BaseModel):
    """Testing values along one escape sequence."""

    name: str
    apexes: List[Tuple[float, float]]
    values: List[float]
    decay_rate: Optional[float] = Field(None, description="Fitted log-log slope")
    vanishes: bool


class VanishingProfile(BaseModel):
    p: float
    q: float
    alpha: float
    tolerance: float
    sequences: List[SequenceProfile]
    verdict: CompactnessVerdict


def _relative_change(old: float, new: float) -> float:
    if old == new:
        return 0.0
    if not (math.isfinite(old) and math.isfinite(new)):
        return math.inf
    return abs(new - old) / max(abs(old), 1e-300)


class _TestingEvaluator:
    """Caches testing values by apex so refinements reuse earlier points."""

    def __init__(
        self,
        u: SymbolExpression,
        phi: SymbolExpression,
        p: float,
        q: float,
        alpha: float,
        spec: QuadratureSpec,
        tail_exponent: Optional[float],
    ):
        self.args = (u, phi, p, q, alpha)
        self.spec = spec
        self.tail_exponent = tail_exponent
        self.cache: Dict[Tuple[float, float], IntegralEstimate] = {}

    def _one(self, apex: HalfPlanePoint) -> IntegralEstimate:
        u, phi, p, q, alpha = self.args
        return testing_condition_value(
            u, phi, p, q, alpha, apex, self.spec, tail_exponent=self.tail_exponent
        )

    def values(self, points: Sequence[HalfPlanePoint]) -> List[IntegralEstimate]:
        missing = [a for a in points if (a.x, a.y) not in self.cache]
        for apex, estimate in zip(missing, parallel_map(self._one, missing)):
            self.cache[(apex.x, apex.y)] = estimate
        return [self.cache[(a.x, a.y)] for a in points]


def _supremum(points: Sequence[HalfPlanePoint], estimates: Sequence[IntegralEstimate]):
    values = [math.inf if e.divergent else e.value for e in estimates]
    index = int(np.argmax(values)) if values else 0
    supremum = values[index] if values else 0.0
    return supremum, (points[index].x, points[index].y) if values else (0.0, 0.0)


def boundedness_certificate(
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    lattice: Optional[ApexLattice] = None,
    spec: Optional[QuadratureSpec] = None,
    refine: int = 1,
    tail_exponent: Optional[float] = None,
) -> BoundednessCertificate:
    """
    Testing-condition supremum over a lattice, with refinement stability.

    Args:
        u: Multiplier symbol
        phi: Composition symbol, self-map already verified
        p: Source exponent
        q: Target exponent
        alpha: Weight exponent
        lattice: Apex lattice (default x in {-10,...,10}, y = 2^-10..2^10)
        spec: Quadrature settings
        refine: Number of lattice doublings used for the stability check
        tail_exponent: Declared decay of the testing integrand

    Returns:
        The certificate; bounded iff the supremum is finite and changes by
        less than 5% under the last refinement
    """
    check_exponents(p, q)
    lattice = lattice or ApexLattice()
    spec = spec or QuadratureSpec()
    evaluator = _TestingEvaluator(u, phi, p, q, alpha, spec, tail_exponent)

    points = lattice.points()
    estimates = evaluator.values(points)
    supremum, argmax = _supremum(points, estimates)
    logger.info(f"Testing supremum over {lattice.size} apexes: {supremum:.6g} at {argmax}")

    suprema = [supremum]
    current = lattice
    for _ in range(max(refine, 0)):
        current = current.refined()
        refined_points = current.points()
        suprema.append(_supremum(refined_points, evaluator.values(refined_points))[0])
    change = _relative_change(suprema[-2], suprema[-1]) if len(suprema) > 1 else 0.0
    stable = change < STABILITY_TOLERANCE

    all_estimates = list(evaluator.cache.values())
    non_converged = sum(1 for e in all_estimates if not e.converged and not e.divergent)
    if non_converged:
        verdict = Verdict.INCONCLUSIVE
    elif math.isfinite(supremum) and stable:
        verdict = Verdict.BOUNDED
    else:
        verdict = Verdict.UNBOUNDED
    logger.info(f"Boundedness verdict: {verdict.value} (refinement change {change:.3%})")

    return BoundednessCertificate(
        p=p,
        q=q,
        alpha=alpha,
        lattice=lattice,
        rel_tol=spec.rel_tol,
        values=[
            LatticeValue(
                x=a.x, y=a.y, value=e.value, error_bound=e.error_bound, converged=e.converged
            )
            for a, e in zip(points, estimates)
        ],
        supremum=supremum,
        argmax=argmax,
        refinement_suprema=suprema[1:],
        stable=stable,
        verdict=verdict,
        non_converged=non_converged,
        cells_used=sum(e.cells_used for e in all_estimates),
    )


def boundedness_sweep(
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    betas: Sequence[float],
    lattice: Optional[ApexLattice] = None,
    spec: Optional[QuadratureSpec] = None,
    refine: int = 1,
    tail_exponent: Optional[float] = None,
) -> BoundednessSweep:
    """One certificate per beta in [p, q], each testing W: A^beta_alpha -> A^q_alpha."""
    check_exponents(p, q)
    certificates = []
    for beta in betas:
        if not p <= beta <= q:
            raise ValueError(f"beta={beta} lies outside [p, q] = [{p}, {q}]")
        certificate = boundedness_certificate(
            u, phi, beta, q, alpha, lattice, spec, refine, tail_exponent
        )
        alpha_prime = (alpha + 2.0) * p / beta - 2.0 if beta < (alpha + 2.0) * p else None
        certificates.append(certificate.model_copy(update={"alpha_prime": alpha_prime}))
    suprema = [c.supremum for c in certificates]
    return BoundednessSweep(
        p=p,
        q=q,
        certificates=certificates,
        all_bounded=all(c.verdict == Verdict.BOUNDED for c in certificates),
        monotone=all(b <= a * (1.0 + STABILITY_TOLERANCE) for a, b in zip(suprema, suprema[1:])),
    )


def _fit_decay(parameters: Sequence[float], values: Sequence[float]) -> Optional[float]:
    pairs = [(t, v) for t, v in zip(parameters, values) if v > 0.0 and math.isfinite(v)]
    if len(pairs) < 2:
        return None
    t, v = np.log([pair[0] for pair in pairs]), np.log([pair[1] for pair in pairs])
    slope = np.polyfit(t, v, 1)[0]
    return float(slope)


def vanishing_profile(
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    sequences: Optional[Dict[str, List[HalfPlanePoint]]] = None,
    spec: Optional[QuadratureSpec] = None,
    tolerance: float = VANISH_TOLERANCE,
    tail_exponent: Optional[float] = None,
) -> VanishingProfile:
    """
    Testing values along escape sequences with a fitted power-law rate.

    The decay rate is the log-log slope of value against y_a (boundary and
    upward sequences) or |a| (other sequences). A sequence vanishes when its
    last value is below ``tolerance``.
    """
    check_exponents(p, q)
    sequences = sequences or escape_sequences()
    spec = spec or QuadratureSpec()
    evaluator = _TestingEvaluator(u, phi, p, q, alpha, spec, tail_exponent)

    profiles = []
    inconclusive = False
    for name, apexes in sequences.items():
        estimates = evaluator.values(apexes)
        inconclusive |= any(not e.converged and not e.divergent for e in estimates)
        values = [math.inf if e.divergent else e.value for e in estimates]
        if name in ("boundary", "upward"):
            parameters = [a.y for a in apexes]
        else:
            parameters = [abs(a.z) for a in apexes]
        profiles.append(
            SequenceProfile(
                name=name,
                apexes=[(a.x, a.y) for a in apexes],
                values=values,
                decay_rate=_fit_decay(parameters, values),
                vanishes=bool(values) and values[-1] <= tolerance,
            )
        )
    if inconclusive:
        verdict = CompactnessVerdict.INCONCLUSIVE
    elif all(profile.vanishes for profile in profiles):
        verdict = CompactnessVerdict.COMPACT
    else:
        verdict = CompactnessVerdict.NOT_COMPACT
    logger.info(f"Vanishing verdict: {verdict.value}")
    return VanishingProfile(
        p=p, q=q, alpha=alpha, tolerance=tolerance, sequences=profiles, verdict=verdict
    )
