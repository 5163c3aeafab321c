"""
Apex lattices and escape sequences.
"""

import math
from typing import Dict, List

from pydantic import BaseModel, Field, field_validator

from ..geometry import HalfPlanePoint


def _default_x() -> List[float]:
    return [-10.0, -5.0, 0.0, 5.0, 10.0]


def _default_y() -> List[float]:
    return [2.0**k for k in range(-10, 11)]


class ApexLattice(BaseModel):
    """Tensor lattice of apexes x_a + i y_a, with y_a log-spaced."""

    x: List[float] = Field(default_factory=_default_x, description="Apex abscissae")
    y: List[float] = Field(default_factory=_default_y, description="Apex heights, increasing")

    @field_validator("x")
    @classmethod
    def _sorted_x(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("lattice needs at least one abscissa")
        return sorted(value)

    @field_validator("y")
    @classmethod
    def _positive_y(cls, value: List[float]) -> List[float]:
        if not value or min(value) <= 0.0:
            raise ValueError("lattice heights must be positive")
        return sorted(value)

    @classmethod
    def log_uniform(
        cls, x: List[float], y_min: float, y_max: float, per_octave: int = 1
    ) -> "ApexLattice":
        steps = max(1, round(math.log2(y_max / y_min) * per_octave))
        ys = [y_min * (y_max / y_min) ** (k / steps) for k in range(steps + 1)]
        return cls(x=x, y=ys)

    def points(self) -> List[HalfPlanePoint]:
        """Apexes ordered by height, then abscissa."""
        return [HalfPlanePoint(x, y) for y in self.y for x in self.x]

    @property
    def size(self) -> int:
        return len(self.x) * len(self.y)

    def refined(self, times: int = 1) -> "ApexLattice":
        """Double both densities and extend the heights by one octave at each end."""
        lattice = self
        for _ in range(times):
            xs = list(lattice.x)
            xs += [0.5 * (a + b) for a, b in zip(lattice.x, lattice.x[1:])]
            ys = list(lattice.y)
            ys += [math.sqrt(a * b) for a, b in zip(lattice.y, lattice.y[1:])]
            if len(lattice.y) > 1:
                ratio = lattice.y[1] / lattice.y[0]
            else:
                ratio = 2.0
            ratio = max(ratio, 2.0)
            ys += [lattice.y[0] / ratio, lattice.y[-1] * ratio]
            lattice = ApexLattice(x=sorted(set(xs)), y=sorted(set(ys)))
        return lattice


def escape_sequences(terms: int = 12) -> Dict[str, List[HalfPlanePoint]]:
    """Apexes leaving every compact set: to the boundary, upward and tangentially."""
    return {
        "boundary": [HalfPlanePoint(0.0, 2.0**-n) for n in range(1, terms + 1)],
        "upward": [HalfPlanePoint(0.0, 2.0**n) for n in range(1, terms + 1)],
        "tangential": [HalfPlanePoint(float(n), 1.0) for n in range(1, terms + 1)],
    }
