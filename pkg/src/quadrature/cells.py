"""
Fixed-order tensor rules on batches of rectangles.

Cells away from the real axis use Gauss-Legendre in both directions with the
dA_alpha density folded into the weights. Cells whose lower edge is y = 0 use
Gauss-Jacobi in y, which integrates the y^alpha factor exactly.
"""

import math
from typing import Tuple

import numpy as np

from .rules import gauss_jacobi, gauss_legendre


def cell_rule(
    x0: np.ndarray,
    x1: np.ndarray,
    y0: np.ndarray,
    y1: np.ndarray,
    alpha: float,
    order: int = 8,
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an order x order rule on each cell.

    Args:
        x0, x1, y0, y1: Cell bounds, arrays of shape (n,)
        alpha: Weight exponent
        order: Points per direction

    Returns:
        ``(z, w)`` of shape (n, order, order) with sum(w * f(z)) ~ integral of f dA_alpha
    """
    x0, x1 = np.asarray(x0, dtype=float), np.asarray(x1, dtype=float)
    y0, y1 = np.asarray(y0, dtype=float), np.asarray(y1, dtype=float)
    t, w = gauss_legendre(order)
    xm, xh = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    x = xm[:, None] + xh[:, None] * t[None, :]
    wx = xh[:, None] * w[None, :]

    factor = (alpha + 1.0) / math.pi
    ym, yh = 0.5 * (y0 + y1), 0.5 * (y1 - y0)
    y_interior = ym[:, None] + yh[:, None] * t[None, :]
    w_interior = yh[:, None] * w[None, :] * factor * (2.0 * y_interior) ** alpha

    tj, wj = gauss_jacobi(order, alpha)
    half = 0.5 * y1
    y_bottom = half[:, None] * (1.0 + tj[None, :])
    w_bottom = factor * 2.0**alpha * half[:, None] ** (alpha + 1.0) * wj[None, :]

    bottom = (y0 <= 0.0)[:, None]
    y = np.where(bottom, y_bottom, y_interior)
    wy = np.where(bottom, w_bottom, w_interior)
    z = x[:, :, None] + 1j * y[:, None, :]
    weights = wx[:, :, None] * wy[:, None, :]
    return z, weights
