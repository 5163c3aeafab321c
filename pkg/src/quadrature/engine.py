"""
Adaptive tensor-product Gauss-Kronrod cubature on rectangles of a chart.

A chart maps parameter rectangles (u, v) into the upper half-plane and
supplies the Jacobian times the dA_alpha density, so the same adaptive loop
serves Cartesian integrals (with the y = s^(1/(alpha+1)) substitution when
alpha < 0) and polar integrals around a centre.

Each cell is integrated with the 15x15 Kronrod rule; replacing the Kronrod
rule by the embedded 7-point Gauss rule in one direction gives a directional
error estimate, and cells are bisected along the direction with the larger
estimate. Cells are evaluated in vectorised batches and the final sum uses
``math.fsum`` in cell order, so results do not depend on scheduling.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import SingularIntegrandError
from .models import QuadratureSpec
from .rules import GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

_BATCH = 2048
_MAX_SPLITS_PER_ROUND = 512


class Chart(ABC):
    """Parameterisation of a region of the upper half-plane."""

    @abstractmethod
    def points(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Complex points for parameter arrays ``u`` and ``v``."""

    @abstractmethod
    def weights(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Jacobian times the dA_alpha density at ``(u, v)``."""


class CartesianChart(Chart):
    """u = x and v = y, or v = y^(alpha+1) when alpha < 0."""

    def __init__(self, alpha: float):
        self.alpha = alpha
        self.substituted = alpha < 0.0
        self._constant = 2.0**alpha / math.pi
        self._factor = (alpha + 1.0) / math.pi

    def to_chart(self, y: float) -> float:
        return y ** (self.alpha + 1.0) if self.substituted else y

    def points(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        y = v ** (1.0 / (self.alpha + 1.0)) if self.substituted else v
        return u + 1j * y

    def weights(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.substituted:
            return np.full(np.broadcast_shapes(u.shape, v.shape), self._constant)
        if self.alpha == 0.0:
            return np.full(np.broadcast_shapes(u.shape, v.shape), self._factor)
        shape = np.broadcast_shapes(u.shape, v.shape)
        return np.broadcast_to(self._factor * (2.0 * v) ** self.alpha, shape)


class PolarChart(Chart):
    """u = r and v = theta around ``center``."""

    def __init__(self, center: complex, alpha: float):
        self.center = complex(center)
        self.alpha = alpha
        self._factor = (alpha + 1.0) / math.pi

    def points(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.center + u * np.exp(1j * v)

    def weights(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        y = self.center.imag + u * np.sin(v)
        density = self._factor if self.alpha == 0.0 else self._factor * (2.0 * y) ** self.alpha
        return u * density


@dataclass(frozen=True)
class CubatureResult:
    """Raw outcome of ``adaptive_cubature``."""

    value: Union[float, complex]
    error: float
    cells: int
    converged: bool


def _sum(values: np.ndarray) -> Union[float, complex]:
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return math.fsum(values.tolist())


class _CellEvaluator:
    def __init__(
        self,
        integrand: Integrand,
        chart: Chart,
        poles: Sequence[complex] = (),
        pole_radius: float = 0.0,
    ):
        self.integrand = integrand
        self.chart = chart
        self.poles = [complex(p) for p in poles]
        self.pole_radius = pole_radius

    def __call__(self, cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        parts = [self._evaluate(cells[i : i + _BATCH]) for i in range(0, len(cells), _BATCH)]
        return (
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
            np.concatenate([p[2] for p in parts]),
        )

    def _evaluate(self, cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        u_mid = 0.5 * (cells[:, 0] + cells[:, 1])
        u_half = 0.5 * (cells[:, 1] - cells[:, 0])
        v_mid = 0.5 * (cells[:, 2] + cells[:, 3])
        v_half = 0.5 * (cells[:, 3] - cells[:, 2])
        u = (u_mid[:, None] + u_half[:, None] * KRONROD_NODES[None, :])[:, :, None]
        v = (v_mid[:, None] + v_half[:, None] * KRONROD_NODES[None, :])[:, None, :]
        z = self.chart.points(u, v)
        z = np.broadcast_to(z, (len(cells), 15, 15))
        with np.errstate(all="ignore"):
            samples = np.broadcast_to(np.asarray(self.integrand(z)), z.shape)
        if self.poles:
            excluded = np.zeros(z.shape, dtype=bool)
            for pole in self.poles:
                excluded |= np.abs(z - pole) < self.pole_radius
            samples = np.where(excluded, 0.0, samples)
        finite = np.isfinite(samples)
        if not finite.all():
            raise SingularIntegrandError(complex(z[~finite][0]))
        weighted = samples * self.chart.weights(u, v)
        area = u_half * v_half
        kronrod = np.einsum("nij,i,j->n", weighted, KRONROD_WEIGHTS, KRONROD_WEIGHTS) * area
        gauss_u = np.einsum("nij,i,j->n", weighted, GAUSS_WEIGHTS, KRONROD_WEIGHTS) * area
        gauss_v = np.einsum("nij,i,j->n", weighted, KRONROD_WEIGHTS, GAUSS_WEIGHTS) * area
        return kronrod, np.abs(kronrod - gauss_u), np.abs(kronrod - gauss_v)


def adaptive_cubature(
    integrand: Integrand,
    chart: Chart,
    u_breaks: Sequence[float],
    v_breaks: Sequence[float],
    spec: QuadratureSpec,
    poles: Sequence[complex] = (),
    pole_radius: float = 0.0,
) -> CubatureResult:
    """Integrate ``integrand`` over the chart rectangle spanned by the breakpoints.

    Args:
        integrand: Vectorised function of complex points
        chart: Parameterisation and density
        u_breaks: Sorted breakpoints of the first parameter (outermost are the bounds)
        v_breaks: Sorted breakpoints of the second parameter
        spec: Tolerances, cell cap and resolution
        poles: Points whose ``pole_radius`` neighbourhoods are excluded
        pole_radius: Radius of the excluded neighbourhoods

    Returns:
        The integral, its error estimate, the number of cells and a convergence flag
    """
    u_edges = np.unique(np.asarray(u_breaks, dtype=float))
    v_edges = np.unique(np.asarray(v_breaks, dtype=float))
    if len(u_edges) < 2 or len(v_edges) < 2:
        return CubatureResult(0.0, 0.0, 0, True)

    uu0, vv0 = np.meshgrid(u_edges[:-1], v_edges[:-1], indexing="ij")
    uu1, vv1 = np.meshgrid(u_edges[1:], v_edges[1:], indexing="ij")
    cells = np.stack([uu0.ravel(), uu1.ravel(), vv0.ravel(), vv1.ravel()], axis=1)

    evaluate = _CellEvaluator(integrand, chart, poles, pole_radius)
    values, err_u, err_v = evaluate(cells)
    min_du = spec.min_resolution * (u_edges[-1] - u_edges[0])
    min_dv = spec.min_resolution * (v_edges[-1] - v_edges[0])
    converged = False

    while True:
        errors = err_u + err_v
        total = complex(values.sum()) if np.iscomplexobj(values) else float(values.sum())
        tolerance = spec.tolerance_for(abs(total))
        if float(errors.sum()) <= tolerance:
            converged = True
            break
        budget = spec.max_cells - len(cells)
        if budget <= 0:
            break
        can_u = (cells[:, 1] - cells[:, 0]) > min_du
        can_v = (cells[:, 3] - cells[:, 2]) > min_dv
        candidates = np.flatnonzero((can_u | can_v) & (errors > 0.0))
        if candidates.size == 0:
            break
        ordered = candidates[np.argsort(-errors[candidates], kind="stable")]
        chosen = ordered[errors[ordered] > tolerance / len(cells)]
        if chosen.size == 0:
            chosen = ordered[:1]
        chosen = chosen[: min(budget, _MAX_SPLITS_PER_ROUND)]

        along_u = (can_u[chosen] & (err_u[chosen] >= err_v[chosen])) | ~can_v[chosen]
        first = cells[chosen].copy()
        second = cells[chosen].copy()
        mid_u = 0.5 * (first[:, 0] + first[:, 1])
        mid_v = 0.5 * (first[:, 2] + first[:, 3])
        first[along_u, 1] = mid_u[along_u]
        second[along_u, 0] = mid_u[along_u]
        first[~along_u, 3] = mid_v[~along_u]
        second[~along_u, 2] = mid_v[~along_u]

        new_values, new_err_u, new_err_v = evaluate(np.concatenate([first, second]))
        count = len(chosen)
        cells[chosen] = first
        values[chosen] = new_values[:count]
        err_u[chosen] = new_err_u[:count]
        err_v[chosen] = new_err_v[:count]
        cells = np.concatenate([cells, second])
        values = np.concatenate([values, new_values[count:]])
        err_u = np.concatenate([err_u, new_err_u[count:]])
        err_v = np.concatenate([err_v, new_err_v[count:]])

    value = _sum(values)
    error = math.fsum((err_u + err_v).tolist())
    if not converged:
        logger.debug(
            f"Cubature stopped without convergence: cells={len(cells)}, error={error:.3e}"
        )
    return CubatureResult(value=value, error=error, cells=len(cells), converged=converged)


def graded_breaks(
    lower: float, upper: float, focus: float, scale: float, finest: float = 1.0 / 64.0
) -> np.ndarray:
    """Breakpoints in [lower, upper] at focus +- scale * finest * 4^k."""
    points = {lower, upper}
    if lower < focus < upper:
        points.add(focus)
    step = scale * finest
    span = upper - lower
    while step < span:
        for point in (focus - step, focus + step):
            if lower < point < upper:
                points.add(point)
        step *= 4.0
    return np.array(sorted(points))


def merge_breaks(base: np.ndarray, extra: Optional[Sequence[float]]) -> np.ndarray:
    if not extra:
        return base
    lower, upper = base[0], base[-1]
    inside = [float(p) for p in extra if lower < p < upper]
    return np.unique(np.concatenate([base, np.asarray(inside, dtype=float)]))
