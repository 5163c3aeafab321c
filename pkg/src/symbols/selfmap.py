"""
Sampled check that phi maps the upper half-plane into itself.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..errors import SelfMapViolationError
from .expressions import SymbolExpression

logger = logging.getLogger(__name__)


def _default_x() -> List[float]:
    return np.linspace(-10.0, 10.0, 21).tolist()


def _default_y() -> List[float]:
    return [2.0**k for k in range(-10, 11)]


class SampleLattice(BaseModel):
    """Tensor lattice x_i + i y_j of sample points."""

    x: List[float] = Field(default_factory=_default_x, description="Abscissae")
    y: List[float] = Field(default_factory=_default_y, description="Positive ordinates")

    def points(self) -> np.ndarray:
        xs = np.asarray(self.x, dtype=float)
        ys = np.asarray(self.y, dtype=float)
        return (xs[:, None] + 1j * ys[None, :]).ravel()

    @property
    def size(self) -> int:
        return len(self.x) * len(self.y)


class SelfMapReport(BaseModel):
    """Outcome of the sampled self-map check; evidence only, never a proof."""

    lattice_size: int
    violations: List[Tuple[float, float, float]] = Field(
        default_factory=list, description="(x, y, Im phi) at failing samples"
    )
    min_imag: float = Field(..., description="Smallest Im phi over finite samples")

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_self_map(
    phi: SymbolExpression, lattice: Optional[SampleLattice] = None
) -> SelfMapReport:
    """Sample Im phi on the lattice; non-finite or non-positive values are violations."""
    lattice = lattice or SampleLattice()
    z = lattice.points()
    values = phi.evaluate(z)
    finite = np.isfinite(values)
    bad = ~finite | (values.imag <= 0.0)
    violations = [
        (float(point.real), float(point.imag), float(value.imag))
        for point, value in zip(z[bad], values[bad])
    ]
    min_imag = float(values.imag[finite].min()) if finite.any() else float("nan")
    if violations:
        logger.warning(f"phi = {phi} fails the self-map check at {len(violations)} samples")
    return SelfMapReport(lattice_size=lattice.size, violations=violations, min_imag=min_imag)


def require_self_map(
    phi: SymbolExpression, lattice: Optional[SampleLattice] = None
) -> SelfMapReport:
    report = verify_self_map(phi, lattice)
    if not report.passed:
        raise SelfMapViolationError(report.violations, report.min_imag)
    return report
