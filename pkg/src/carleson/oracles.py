"""
Closed forms used as oracles for the quadrature-based certificates.

With c = y + y_a + b the x-integral of |x + ic|^(-2m) is
sqrt(pi) Gamma(m - 1/2) / Gamma(m) c^(1 - 2m), and the remaining y-integral
is a Beta function.
"""

import math

from scipy.special import beta as beta_fn
from scipy.special import gamma as gamma_fn


def _x_integral_constant(m: float) -> float:
    return math.sqrt(math.pi) * gamma_fn(m - 0.5) / gamma_fn(m)


def norm_constant(alpha: float) -> float:
    """||f_{a,t}||_{t,alpha}^t, the same for every apex and t (1/4 at alpha = 0)."""
    return (
        (alpha + 1.0)
        * 2.0**alpha
        / math.pi
        * _x_integral_constant(alpha + 2.0)
        * beta_fn(alpha + 1.0, alpha + 2.0)
    )


def translation_testing_value(alpha: float, y_a: float, b: float, ratio: float = 1.0) -> float:
    """Testing integral for u = 1, phi(z) = z + ib at an apex of height y_a.

    Args:
        alpha: Weight exponent
        y_a: Apex height
        b: Vertical translation (0 gives the identity symbol)
        ratio: lambda = q/p

    Returns:
        K y_a^{(alpha+2) lambda} (y_a + b)^{alpha + 2 - 2(alpha+2) lambda}; at lambda = 1
        this is norm_constant(alpha) (y_a / (y_a + b))^(alpha + 2)
    """
    m = (alpha + 2.0) * ratio
    y_power = 2.0 * m - 1.0
    if y_power <= alpha + 1.0:
        return math.inf
    constant = (
        (alpha + 1.0)
        * 2.0**alpha
        / math.pi
        * _x_integral_constant(m)
        * beta_fn(alpha + 1.0, y_power - alpha - 1.0)
    )
    return constant * y_a**m * (y_a + b) ** (alpha + 2.0 - 2.0 * m)


def translation_intensity(alpha: float, y_a: float, b: float, ratio: float = 1.0) -> float:
    """mu(T_a) / A(T_a)^lambda for u = 1, phi(z) = z + ib with a on the imaginary axis."""
    if y_a <= b:
        return 0.0
    measure = y_a * 2.0**alpha / math.pi * (y_a - b) ** (alpha + 1.0)
    return measure / (2.0**alpha / math.pi * y_a ** (alpha + 2.0)) ** ratio


def dominance_constant(alpha: float, ratio: float = 1.0) -> float:
    """C with intensity(a) <= C testing(a): |w - conj(a)|^2 <= (17/4) y_a^2 on T_a."""
    return (math.pi / 2.0**alpha) ** ratio * (17.0 / 4.0) ** ((alpha + 2.0) * ratio)
