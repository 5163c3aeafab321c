"""
Testing integrals and Carleson intensities at a single apex.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..errors import ScenarioValidationError
from ..geometry import CarlesonBox, HalfPlanePoint
from ..quadrature import (
    IntegralEstimate,
    QuadratureSpec,
    integrate_halfplane,
    measure_alpha,
    pullback_measure,
    sampled_decay_exponent,
)
from ..quadrature.engine import Integrand
from ..symbols import SymbolExpression

logger = logging.getLogger(__name__)


def check_exponents(p: float, q: float) -> None:
    if not 1.0 <= p <= q:
        raise ScenarioValidationError(f"exponents must satisfy 1 <= p <= q, got p={p}, q={q}")


def is_zero(u: SymbolExpression) -> bool:
    return u.is_constant() and u.constant_value() == 0


def pullback_focus(phi: SymbolExpression, apex: HalfPlanePoint) -> Tuple[float, float]:
    """Abscissa and length scale, in the z-plane, of an integrand peaked at phi(z) = a."""
    coefficients = phi.affine_coefficients()
    if coefficients is not None:
        c, d = coefficients
        if abs(c.imag) <= 1e-14 * abs(c) and c.real > 0.0:
            return (apex.x - d.real) / c.real, (apex.y + max(d.imag, 0.0)) / c.real
    return apex.x, apex.y


def default_tail_exponent(
    u: SymbolExpression,
    phi: SymbolExpression,
    decay: Optional[float],
    integrand: Integrand,
    focus: float = 0.0,
) -> Optional[float]:
    """The integrand's decay: ``decay`` for constant u and affine phi, sampled otherwise."""
    if decay is not None and u.is_constant() and phi.affine_coefficients() is not None:
        return decay
    return sampled_decay_exponent(integrand, focus)


def integrate_pullback(
    integrand: Integrand,
    u: SymbolExpression,
    phi: SymbolExpression,
    decay: Optional[float],
    alpha: float,
    spec: QuadratureSpec,
    focus: float,
    scale: float,
    tail_exponent: Optional[float] = None,
) -> IntegralEstimate:
    """
    Half-plane integral of an integrand built from u and f o phi, tail included.

    Args:
        integrand: Vectorised integrand
        u: Multiplier symbol
        phi: Composition symbol
        decay: Decay of the integrand when u is constant and phi affine
        alpha: Weight exponent
        spec: Quadrature settings, already centred on the focus
        focus: Abscissa of the peak
        scale: Length scale of the peak
        tail_exponent: Declared decay; overrides both ``decay`` and sampling

    Returns:
        The estimate; never converged when the decay at infinity is undetermined
    """
    undetermined = False
    if tail_exponent is None:
        tail_exponent = default_tail_exponent(u, phi, decay, integrand, focus)
        undetermined = tail_exponent is None
    estimate = integrate_halfplane(
        integrand, alpha, spec, focus=focus, scale=scale, tail_exponent=tail_exponent
    )
    if undetermined:
        logger.warning(f"Decay at infinity is undetermined near x={focus:.6g}; no tail bound")
        estimate = estimate.model_copy(update={"converged": False})
    return estimate


def testing_condition_value(
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    apex: HalfPlanePoint,
    spec: QuadratureSpec,
    tail_exponent: Optional[float] = None,
) -> IntegralEstimate:
    """
    Integral of y_a^{(alpha+2) q/p} |u|^q / |phi(z) - conj(a)|^{(2 alpha + 4) q/p} dA_alpha.

    Args:
        u: Multiplier symbol
        phi: Composition symbol (self-map verified by the caller)
        p: Source exponent
        q: Target exponent, q >= p
        alpha: Weight exponent
        apex: The apex a
        spec: Quadrature settings; the window is recentred on the peak
        tail_exponent: Declared decay of the integrand; derived or sampled when omitted

    Returns:
        The estimate at this apex
    """
    check_exponents(p, q)
    if is_zero(u):
        return IntegralEstimate.exact(0.0)
    ratio = q / p
    power = (2.0 * alpha + 4.0) * ratio
    amplitude = apex.y ** ((alpha + 2.0) * ratio)
    conjugate = apex.conjugate
    focus, scale = pullback_focus(phi, apex)

    if u.is_constant():
        weight = abs(u.constant_value()) ** q

        def integrand(z: np.ndarray) -> np.ndarray:
            return weight * amplitude * np.abs(phi.evaluate(z) - conjugate) ** (-power)

    else:

        def integrand(z: np.ndarray) -> np.ndarray:
            return (
                amplitude
                * np.abs(u.evaluate(z)) ** q
                * np.abs(phi.evaluate(z) - conjugate) ** (-power)
            )

    estimate = integrate_pullback(
        integrand,
        u,
        phi,
        power,
        alpha,
        spec.around(focus, scale),
        focus,
        scale,
        tail_exponent=tail_exponent,
    )
    logger.debug(f"Testing value at a={apex}: {estimate.value:.10g} +- {estimate.error_bound:.2e}")
    return estimate


def carleson_intensity(
    u: SymbolExpression,
    phi: SymbolExpression,
    p: float,
    q: float,
    alpha: float,
    apex: HalfPlanePoint,
    spec: QuadratureSpec,
) -> IntegralEstimate:
    """mu_{u,phi,q,alpha}(T_a) / A_alpha(T_a)^{q/p}."""
    check_exponents(p, q)
    if is_zero(u):
        return IntegralEstimate.exact(0.0)
    tent = CarlesonBox.tent(apex)
    measure = pullback_measure(tent, u, phi, q, alpha, spec)
    return measure.scaled(1.0 / measure_alpha(tent, alpha) ** (q / p))
