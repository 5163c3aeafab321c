"""
Validated parameter and result models for the quadrature layer.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class WeightParameter(BaseModel):
    """The Bergman weight exponent alpha of dA_alpha."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=-1.0, description="Weight exponent, strictly greater than -1")


class TailModel(str, Enum):
    """How the region outside the truncation is accounted for."""

    NONE = "none"
    POWER_LAW = "power_law"


class QuadratureSpec(BaseModel):
    """Truncation rectangle [x_lo, x_hi] x (0, y_hi] and tolerances of an integral."""

    model_config = ConfigDict(frozen=True)

    x_lo: float = Field(-64.0, description="Left edge of the truncation")
    x_hi: float = Field(64.0, description="Right edge of the truncation")
    y_hi: float = Field(64.0, gt=0.0, description="Top edge of the truncation")
    rel_tol: float = Field(1e-6, gt=0.0, description="Relative tolerance")
    abs_tol: float = Field(1e-12, gt=0.0, description="Absolute tolerance")
    max_cells: int = Field(20000, ge=1, description="Cap on adaptive cells")
    tail_model: TailModel = Field(TailModel.POWER_LAW, description="Tail accounting model")
    span_factor: float = Field(
        65536.0,
        gt=1.0,
        description="Half-width of recentred windows in units of the integrand scale",
    )
    min_resolution: float = Field(
        1e-12, gt=0.0, description="Smallest cell side, relative to the truncation size"
    )
    poles: List[Tuple[float, float]] = Field(
        default_factory=list,
        description="Declared poles (x, y); quadrature excludes a disk around each",
    )
    pole_radius: float = Field(
        1e-6, gt=0.0, description="Radius of the excluded pole neighbourhoods"
    )

    @model_validator(mode="after")
    def _check_window(self) -> "QuadratureSpec":
        if not self.x_lo < self.x_hi:
            raise ValueError("x_lo must be smaller than x_hi")
        return self

    def around(self, focus: float, scale: float) -> "QuadratureSpec":
        """Truncation centred at ``focus`` with half-width span_factor * max(scale, 1)."""
        half = self.span_factor * max(scale, 1.0)
        return self.model_copy(update={"x_lo": focus - half, "x_hi": focus + half, "y_hi": half})

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def tightened(self, factor: float = 0.5) -> "QuadratureSpec":
        return self.model_copy(update={"rel_tol": self.rel_tol * factor})


class IntegralEstimate(BaseModel):
    """Value of an integral with its heuristic error bound."""

    model_config = ConfigDict(frozen=True)

    value: float
    error_bound: float = Field(..., ge=0.0)
    cells_used: int = 0
    converged: bool = True
    tail_estimate: float = Field(0.0, ge=0.0)
    divergent: bool = False

    @classmethod
    def exact(cls, value: float) -> "IntegralEstimate":
        return cls(value=value, error_bound=0.0, cells_used=0, converged=True)

    @property
    def relative_error(self) -> float:
        if self.value == 0.0:
            return 0.0 if self.error_bound == 0.0 else math.inf
        return self.error_bound / abs(self.value)

    def combine(self, other: "IntegralEstimate") -> "IntegralEstimate":
        """Sum of two independent estimates."""
        return IntegralEstimate(
            value=math.fsum([self.value, other.value]),
            error_bound=self.error_bound + other.error_bound,
            cells_used=self.cells_used + other.cells_used,
            converged=self.converged and other.converged,
            tail_estimate=self.tail_estimate + other.tail_estimate,
            divergent=self.divergent or other.divergent,
        )

    def scaled(self, factor: float) -> "IntegralEstimate":
        return self.model_copy(
            update={
                "value": self.value * factor,
                "error_bound": self.error_bound * abs(factor),
                "tail_estimate": self.tail_estimate * abs(factor),
            }
        )


class ComplexEstimate(BaseModel):
    """Complex-valued integral with a modulus error bound."""

    model_config = ConfigDict(frozen=True)

    real: float
    imag: float
    error_bound: float = Field(..., ge=0.0)
    cells_used: int = 0
    converged: bool = True

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)
