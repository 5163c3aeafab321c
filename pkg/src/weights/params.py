"""
Parameters of the B-weight class: exponents, symbols and the weight.
"""

import math
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..symbols import SymbolExpression, WeightExpression


def conjugate(exponent: float) -> float:
    """r' with 1/r + 1/r' = 1."""
    if exponent == 1.0:
        return math.inf
    return exponent / (exponent - 1.0)


class BWeightParams(BaseModel):
    """
    q > 1, s in (1, q') and the weight omega for the class of (u, phi, alpha).

    ``weight_decay`` declares k with omega = O(|z|^-k) at infinity; the
    kernel integrand then decays like |z|^-(alpha + 2 + k). Weights with a
    disk support need no declaration.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: float = Field(..., gt=1.0, description="Target exponent")
    s: Optional[float] = Field(None, description="Hoelder exponent in (1, q'); default (1 + q')/2")
    alpha: float = Field(0.0, gt=-1.0, description="Weight exponent of dA_alpha")
    u: SymbolExpression
    phi: SymbolExpression
    omega: WeightExpression
    weight_decay: Optional[float] = Field(None, description="Declared decay exponent of omega")

    @model_validator(mode="before")
    @classmethod
    def _default_s(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("s") is None and float(data.get("q", 0.0)) > 1.0:
            data = {**data, "s": 0.5 * (1.0 + conjugate(float(data["q"])))}
        return data

    @model_validator(mode="after")
    def _check_s(self) -> "BWeightParams":
        q_prime = conjugate(self.q)
        if self.s is None or not 1.0 < self.s < q_prime:
            raise ValueError(f"s must lie in (1, q') = (1, {q_prime:g}), got {self.s}")
        return self

    @property
    def q_prime(self) -> float:
        return conjugate(self.q)

    @property
    def s_prime(self) -> float:
        return conjugate(self.s)

    def with_weight(
        self, omega: WeightExpression, weight_decay: Optional[float] = None
    ) -> "BWeightParams":
        return self.model_copy(update={"omega": omega, "weight_decay": weight_decay})

    def powered(self) -> "BWeightParams":
        """The same parameters with omega replaced by omega^{s'}."""
        decay = None if self.weight_decay is None else self.weight_decay * self.s_prime
        return self.with_weight(self.omega.power(self.s_prime), decay)
