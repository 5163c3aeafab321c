"""
The test functions f_{a,t}(z) = y_a^{(alpha+2)/t} (z - conj(a))^{-(2 alpha + 4)/t}.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..geometry import HalfPlanePoint
from ..quadrature import IntegralEstimate, QuadratureSpec, integrate_halfplane

logger = logging.getLogger(__name__)


def _power(w: np.ndarray, exponent: float) -> np.ndarray:
    if float(exponent).is_integer() and abs(exponent) <= 64:
        return np.power(w, int(exponent))
    return np.power(w, exponent)


@dataclass(frozen=True)
class TestFunction:
    """f_{a,t} for apex ``apex``, exponent ``t`` >= 1 and weight ``alpha``.

    z - conj(a) always has positive imaginary part on the half-plane, so the
    principal power is holomorphic there.
    """

    __test__ = False

    apex: HalfPlanePoint
    t: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.t < 1.0:
            raise ValueError(f"test function exponent must be at least 1, got {self.t}")
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must be greater than -1, got {self.alpha}")

    @classmethod
    def at(cls, apex: complex, t: float, alpha: float = 0.0) -> "TestFunction":
        return cls(HalfPlanePoint.from_complex(complex(apex)), t, alpha)

    @property
    def exponent(self) -> float:
        """The pole order (2 alpha + 4) / t."""
        return (2.0 * self.alpha + 4.0) / self.t

    @property
    def amplitude(self) -> float:
        return self.apex.y ** ((self.alpha + 2.0) / self.t)

    @property
    def focus(self) -> float:
        return self.apex.x

    @property
    def scale(self) -> float:
        return self.apex.y

    def __call__(self, z) -> np.ndarray:
        w = np.asarray(z, dtype=complex) - self.apex.conjugate
        with np.errstate(all="ignore"):
            return self.amplitude * _power(w, -self.exponent)

    def abs_power(self, z, power: float) -> np.ndarray:
        """|f(z)|^power, computed from the modulus."""
        distance = np.abs(np.asarray(z, dtype=complex) - self.apex.conjugate)
        with np.errstate(all="ignore"):
            return self.amplitude**power * distance ** (-self.exponent * power)

    def decay(self, power: float = 1.0) -> float:
        """k with |f|^power = O(|z|^-k)."""
        return self.exponent * power

    def __str__(self) -> str:
        return f"f[a={self.apex}, t={self.t:g}]"


@dataclass(frozen=True)
class LinearCombination:
    """A finite sum of scaled test functions."""

    terms: Tuple[Tuple[complex, TestFunction], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("a linear combination needs at least one term")

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape, dtype=complex)
        for coefficient, function in self.terms:
            total = total + complex(coefficient) * function(z)
        return total

    def abs_power(self, z, power: float) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.abs(self(z)) ** power

    @property
    def focus(self) -> float:
        return self.terms[0][1].focus

    @property
    def scale(self) -> float:
        return min(function.scale for _, function in self.terms)

    def decay(self, power: float = 1.0) -> float:
        return min(function.decay(power) for _, function in self.terms)

    def __str__(self) -> str:
        return " + ".join(f"({complex(c):g})*{f}" for c, f in self.terms)


CorpusFunction = Union[TestFunction, LinearCombination]


def eval_test_function(tf: TestFunction, z: Union[HalfPlanePoint, complex]) -> complex:
    point = z.z if isinstance(z, HalfPlanePoint) else complex(z)
    return complex(tf(np.array([point]))[0])


def test_function_norm(tf: TestFunction, spec: QuadratureSpec) -> IntegralEstimate:
    """||f_{a,t}||_{t,alpha}^t by quadrature over the window recentred at the apex."""
    local = spec.around(tf.focus, tf.scale)
    return integrate_halfplane(
        lambda z: tf.abs_power(z, tf.t),
        tf.alpha,
        local,
        focus=tf.focus,
        scale=tf.scale,
        tail_exponent=tf.decay(tf.t),
    )


test_function_norm.__test__ = False  # type: ignore[attr-defined]
