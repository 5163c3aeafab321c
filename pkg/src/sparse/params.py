"""
Exponent parameters of the sparse forms and the exhausting compact family.
"""

import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import EmptyExponentWindowError, ScenarioValidationError


class SparseFormParams(BaseModel):
    """N, gamma, p, q of a sparse form; gamma' is derived."""

    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1, description="Integer split of the exponent q")
    gamma: float = Field(1.0, ge=1.0, description="Exponent of the second average")
    p: float = Field(..., ge=1.0, description="Source exponent")
    q: float = Field(..., description="Target exponent, q >= p")

    @model_validator(mode="after")
    def _check_exponents(self) -> "SparseFormParams":
        if self.q < self.p:
            raise ValueError(f"q must be at least p, got p={self.p}, q={self.q}")
        if self.N > self.p:
            raise ValueError(f"N must satisfy 1 <= N <= p, got N={self.N}, p={self.p}")
        return self

    @property
    def gamma_prime(self) -> float:
        if self.gamma == 1.0:
            return math.inf
        return self.gamma / (self.gamma - 1.0)

    @property
    def mu_exponent(self) -> float:
        """1/gamma'; zero at gamma = 1."""
        return 1.0 - 1.0 / self.gamma

    @property
    def measure_exponent(self) -> float:
        return self.q / (self.p * self.gamma)

    @property
    def second_power(self) -> float:
        return self.q - self.N

    def check_compactness(self) -> None:
        """Raise unless 1 <= N < q with 1 < gamma < q/(q-N), or N = q with gamma > 1."""
        if self.N == self.q:
            ok = self.gamma > 1.0
        else:
            ok = self.N < self.q and 1.0 < self.gamma < self.q / (self.q - self.N)
        if not ok:
            raise ScenarioValidationError(
                f"compactness form needs 1 <= N < q and 1 < gamma < q/(q-N), or N = q and "
                f"gamma > 1; got N={self.N}, gamma={self.gamma}, q={self.q}"
            )


class ExponentWindow(BaseModel):
    """The admissible integers of the fractional sparse form for p < q."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(..., ge=1.0)
    q: float

    def admissible(self) -> List[int]:
        """Every integer N >= 1 with N < p < q < p + N, by enumeration up to ceil(q) + 1."""
        return [
            n for n in range(1, math.ceil(self.q) + 2) if n < self.p < self.q < self.p + n
        ]

    def require(self) -> List[int]:
        window = self.admissible()
        if not window:
            raise EmptyExponentWindowError(self.p, self.q)
        return window

    @property
    def fractional_order(self) -> float:
        """2q/p - 2, the order of the matching fractional maximal operator."""
        return 2.0 * self.q / self.p - 2.0


class ExhaustingFamily(BaseModel):
    """K_n = [-n, n] x [1/n, n], increasing in n."""

    model_config = ConfigDict(frozen=True)

    def compact(self, n: int) -> Tuple[float, float, float, float]:
        if n < 1:
            raise ValueError(f"family index must be at least 1, got {n}")
        return -float(n), float(n), 1.0 / n, float(n)

    def upper_box_avoids(self, n: int, left: np.ndarray, length: np.ndarray) -> np.ndarray:
        """Whether Q^up = [l, l + length) x [length/2, length) misses K_n."""
        x0, x1, y0, y1 = self.compact(n)
        left = np.asarray(left, dtype=float)
        length = np.asarray(length, dtype=float)
        misses_x = (left + length <= x0) | (left > x1)
        misses_y = (length <= y0) | (0.5 * length > y1)
        return misses_x | misses_y
