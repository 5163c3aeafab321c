"""
The weighted estimate for W_{u,phi} and the quantities its proof runs through.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..carleson.oracles import norm_constant
from ..carleson.testfunctions import CorpusFunction, TestFunction
from ..carleson.testing import integrate_pullback, pullback_focus
from ..geometry import CarlesonBox, HalfPlanePoint, TruncatedBoxCollection
from ..quadrature import (
    IntegralEstimate,
    QuadratureSpec,
    affine_preimage,
    integrate_disk,
    integrate_halfplane,
    integrate_region,
    measure_alpha,
    preimage_breaks,
)
from ..sparse.forms import FormExponents, SparseEvaluator, SparseFormResult
from ..tools.utils import parallel_map
from .classes import ClassVerdict, WeightCertificate, b_class_constant, is_zero_weight
from .params import BWeightParams

logger = logging.getLogger(__name__)

DEFAULT_APEXES = (0.25j, 0.5j, 1j, 2j, 4j, 1 + 1j, -1 + 1j)


class WeightedRow(BaseModel):
    function: str
    lhs: float
    norm_power: float
    rhs: Optional[float]
    ratio: Optional[float]
    converged: bool


class WeightedEstimateTable(BaseModel):
    """Both sides of the weighted estimate over a corpus."""

    s: float
    s_prime: float
    class_constant: float = Field(..., description="Class supremum of omega^{s'}")
    class_verdict: ClassVerdict
    rows: List[WeightedRow]
    max_ratio: Optional[float]
    min_ratio: Optional[float]


class WeightedCarlesonProfile(BaseModel):
    """mu_{u,phi,q,omega,alpha}(T_a) / A_alpha(T_a) at each apex."""

    apexes: List[Tuple[float, float]]
    ratios: List[float]
    supremum: float


def weighted_corpus(q: float, alpha: float) -> List[TestFunction]:
    return [TestFunction.at(a, q, alpha) for a in DEFAULT_APEXES]


def _norm_power(
    f: CorpusFunction, q: float, alpha: float, spec: QuadratureSpec
) -> IntegralEstimate:
    """||f||_{q,alpha}^q, in closed form for f_{a,q}."""
    if isinstance(f, TestFunction) and f.t == q and f.alpha == alpha:
        return IntegralEstimate.exact(norm_constant(alpha))
    return integrate_halfplane(
        lambda z: f.abs_power(z, q),
        alpha,
        spec.around(f.focus, f.scale),
        focus=f.focus,
        scale=f.scale,
        tail_exponent=f.decay(q),
    )


def weighted_operator_power(
    f: CorpusFunction, params: BWeightParams, spec: QuadratureSpec
) -> IntegralEstimate:
    """Integral of |u|^q |f o phi|^q omega dA_alpha."""
    u, phi, omega, q, alpha = params.u, params.phi, params.omega, params.q, params.alpha
    if is_zero_weight(omega) or (u.is_constant() and u.constant_value() == 0):
        return IntegralEstimate.exact(0.0)

    def integrand(z: np.ndarray) -> np.ndarray:
        return np.abs(u.evaluate(z)) ** q * f.abs_power(phi.evaluate(z), q) * omega.evaluate(z)

    support = omega.disk_support()
    if support is not None:
        center, radius = support
        return integrate_disk(integrand, center, radius, alpha, spec)
    anchor = f.apex if isinstance(f, TestFunction) else HalfPlanePoint(f.focus, f.scale)
    focus, scale = pullback_focus(phi, anchor)
    decay = None if params.weight_decay is None else f.decay(q) + params.weight_decay
    return integrate_pullback(
        integrand, u, phi, decay, alpha, spec.around(focus, scale), focus, scale
    )


def weighted_estimate_check(
    corpus: Optional[Sequence[CorpusFunction]],
    params: BWeightParams,
    spec: Optional[QuadratureSpec] = None,
    certificate: Optional[WeightCertificate] = None,
) -> WeightedEstimateTable:
    """
    Left side and [omega^{s'}]^{1/s'} ||f||^q for each corpus function.

    Args:
        corpus: Functions in A^q_alpha (default f_{a,q} on a small apex set)
        params: Exponents, symbols and weight
        spec: Quadrature settings
        certificate: A class certificate for omega^{s'}; computed when omitted

    Returns:
        Per-function rows; the right side and ratios are left empty unless
        omega^{s'} is certified in class
    """
    spec = spec or QuadratureSpec()
    corpus = list(corpus) if corpus is not None else weighted_corpus(params.q, params.alpha)
    if certificate is None:
        certificate = b_class_constant(params.powered(), spec=spec)
    in_class = certificate.verdict == ClassVerdict.IN_CLASS
    factor = certificate.supremum ** (1.0 / params.s_prime) if in_class else None

    lhs = parallel_map(lambda f: weighted_operator_power(f, params, spec), corpus)
    norms = [_norm_power(f, params.q, params.alpha, spec) for f in corpus]
    rows = []
    for f, left, norm in zip(corpus, lhs, norms):
        rhs = factor * norm.value if factor is not None else None
        rows.append(
            WeightedRow(
                function=str(f),
                lhs=left.value,
                norm_power=norm.value,
                rhs=rhs,
                ratio=left.value / rhs if rhs else None,
                converged=left.converged and norm.converged,
            )
        )
    ratios = [row.ratio for row in rows if row.ratio is not None]
    if not in_class:
        logger.warning(f"omega^{params.s_prime:g} is not certified in class; no right side")
    return WeightedEstimateTable(
        s=params.s,
        s_prime=params.s_prime,
        class_constant=certificate.supremum,
        class_verdict=certificate.verdict,
        rows=rows,
        max_ratio=max(ratios) if ratios else None,
        min_ratio=min(ratios) if ratios else None,
    )


def weighted_sparse_form(
    f: Callable,
    params: BWeightParams,
    collections: Sequence[TruncatedBoxCollection],
    spec: Optional[QuadratureSpec] = None,
    evaluator: Optional[SparseEvaluator] = None,
) -> SparseFormResult:
    """Sum over boxes of A(Q) <|f|>_Q <|f|^{q-1}>_{Q,s}; u, phi and omega do not enter."""
    evaluator = evaluator or SparseEvaluator(collections, params.alpha, spec=spec)
    exponents = FormExponents(first_power=1.0, second_power=params.q - 1.0, gamma=params.s)
    return evaluator.evaluate(f, exponents)


def weighted_pullback_measure(
    region: CarlesonBox, params: BWeightParams, spec: QuadratureSpec
) -> IntegralEstimate:
    """Integral of 1_E(phi(z)) |u(z)|^q omega(z) dA_alpha(z)."""
    u, phi, omega, q, alpha = params.u, params.phi, params.omega, params.q, params.alpha
    if is_zero_weight(omega):
        return IntegralEstimate.exact(0.0)
    bounds = region.bounds()

    def weight(z: np.ndarray) -> np.ndarray:
        return np.abs(u.evaluate(z)) ** q * omega.evaluate(z)

    preimage = affine_preimage(phi, bounds)
    if preimage is not None:
        px0, px1, py0, py1 = preimage
        if px1 <= px0 or py1 <= py0:
            return IntegralEstimate.exact(0.0)
        return integrate_region(weight, px0, px1, py0, py1, alpha, spec)
    x0, x1, y0, y1 = bounds

    def integrand(z: np.ndarray) -> np.ndarray:
        w = phi.evaluate(z)
        inside = (w.real >= x0) & (w.real < x1) & (w.imag >= y0) & (w.imag < y1)
        return np.where(inside, weight(z), 0.0)

    x_breaks, y_breaks = preimage_breaks(phi, bounds, spec) or (None, None)
    return integrate_region(
        integrand, spec.x_lo, spec.x_hi, 0.0, spec.y_hi, alpha, spec, x_breaks, y_breaks
    )


def weighted_carleson_profile(
    params: BWeightParams,
    apexes: Sequence[HalfPlanePoint],
    spec: Optional[QuadratureSpec] = None,
) -> WeightedCarlesonProfile:
    """1-Carleson intensities of the weighted pullback measure along the given apexes."""
    spec = spec or QuadratureSpec()
    tents = [CarlesonBox.tent(a) for a in apexes]
    measures = parallel_map(lambda tent: weighted_pullback_measure(tent, params, spec), tents)
    ratios = [m.value / measure_alpha(tent, params.alpha) for m, tent in zip(measures, tents)]
    return WeightedCarlesonProfile(
        apexes=[(a.x, a.y) for a in apexes],
        ratios=ratios,
        supremum=max(ratios, default=0.0) if all(map(math.isfinite, ratios)) else math.inf,
    )
