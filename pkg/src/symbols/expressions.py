"""
Parsed symbols (holomorphic u, phi) and weights (omega), evaluated with numpy.
"""

import logging
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..geometry import HalfPlanePoint
from .nodes import BinOp, Call, Node, Pow, contains_variable, evaluate_node, to_text
from .parser import ExpressionContext, parse_node

logger = logging.getLogger(__name__)

PointLike = Union[HalfPlanePoint, complex]

# Sample points for detecting affine expressions.
_AFFINE_SAMPLES = np.array([0.3 + 0.7j, 1.1 + 0.4j, -0.6 + 1.9j, 2.3 + 0.2j, -1.7 + 3.1j])


def _as_array(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _affine_fit(node: Node) -> Optional[Tuple[complex, complex]]:
    with np.errstate(all="ignore"):
        values = evaluate_node(node, _AFFINE_SAMPLES)
    if not np.all(np.isfinite(values)):
        return None
    slope = (values[1] - values[0]) / (_AFFINE_SAMPLES[1] - _AFFINE_SAMPLES[0])
    offset = values[0] - slope * _AFFINE_SAMPLES[0]
    residual = np.abs(values - (slope * _AFFINE_SAMPLES + offset))
    if np.any(residual > 1e-12 * (1.0 + np.abs(values))):
        return None
    return complex(slope), complex(offset)


class SymbolExpression:
    """A holomorphic expression in z: u or phi.

    Holomorphy is enforced syntactically (the non-holomorphic functions are
    rejected by the parser) and can be checked numerically with
    ``cr_residual``.
    """

    context = ExpressionContext.SYMBOL

    def __init__(self, node: Node, source: Optional[str] = None):
        self.node = node
        self.source = source

    @classmethod
    def parse(cls, text: str) -> "SymbolExpression":
        return cls(parse_node(text, cls.context), source=text)

    @property
    def text(self) -> str:
        return to_text(self.node)

    def __str__(self) -> str:
        return self.source if self.source is not None else self.text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.text!r})"

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and other.node == self.node  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.node))

    def evaluate(self, z) -> np.ndarray:
        """Vectorised evaluation; non-finite values are returned as is."""
        z = _as_array(z)
        with np.errstate(all="ignore"):
            return evaluate_node(self.node, z)

    __call__ = evaluate

    def eval(self, z: PointLike) -> complex:
        """Value at one point of the upper half-plane."""
        point = z.z if isinstance(z, HalfPlanePoint) else complex(z)
        return complex(self.evaluate(np.array([point]))[0])

    def is_constant(self) -> bool:
        return not contains_variable(self.node)

    def constant_value(self) -> complex:
        if not self.is_constant():
            raise ValueError(f"{self} depends on z")
        return complex(evaluate_node(self.node, np.zeros(1, dtype=complex))[0])

    @cached_property
    def _affine(self) -> Optional[Tuple[complex, complex]]:
        return _affine_fit(self.node)

    def affine_coefficients(self) -> Optional[Tuple[complex, complex]]:
        """(c, d) when the expression equals c z + d, else None."""
        return self._affine

    def cr_residual(self, points: Sequence[complex], step: float = 1e-6) -> float:
        """Largest relative Cauchy-Riemann defect |f_x + i f_y| over the points."""
        z = _as_array(points)
        h = step * np.maximum(1.0, np.abs(z))
        fx = (self.evaluate(z + h) - self.evaluate(z - h)) / (2.0 * h)
        fy = (self.evaluate(z + 1j * h) - self.evaluate(z - 1j * h)) / (2.0 * h)
        scale = np.maximum(np.maximum(np.abs(fx), np.abs(fy)), 1e-300)
        defect = np.abs(fx + 1j * fy) / scale
        defect = np.where(np.maximum(np.abs(fx), np.abs(fy)) == 0.0, 0.0, defect)
        return float(np.max(defect)) if defect.size else 0.0


class WeightExpression(SymbolExpression):
    """A non-negative weight omega(z); abs, re, im, max0, indisk and conj are allowed."""

    context = ExpressionContext.WEIGHT

    def evaluate(self, z) -> np.ndarray:
        return np.real(super().evaluate(z))

    __call__ = evaluate

    def eval(self, z: PointLike) -> float:  # type: ignore[override]
        point = z.z if isinstance(z, HalfPlanePoint) else complex(z)
        return float(self.evaluate(np.array([point]))[0])

    def power(self, exponent: float) -> "WeightExpression":
        """omega^exponent as a new weight."""
        return WeightExpression(Pow(self.node, float(exponent)))

    def disk_support(self) -> Optional[Tuple[complex, float]]:
        """Centre and radius when omega carries an indisk(a z + b) factor."""
        for factor in _numerator_factors(self.node):
            if isinstance(factor, Call) and factor.func == "indisk":
                fit = _affine_fit(factor.argument)
                if fit is None or fit[0] == 0:
                    continue
                slope, offset = fit
                return -offset / slope, 1.0 / abs(slope)
        return None

    def negative_samples(self, points: Sequence[complex], tol: float = 1e-12) -> List[complex]:
        """Sample points where omega is negative, complex or not finite."""
        z = _as_array(points)
        with np.errstate(all="ignore"):
            raw = evaluate_node(self.node, z)
        bad = (
            ~np.isfinite(raw)
            | (raw.real < -tol)
            | (np.abs(raw.imag) > 1e-9 * np.maximum(np.abs(raw.real), 1.0))
        )
        return [complex(p) for p in z[bad]]


def _numerator_factors(node: Node) -> List[Node]:
    if isinstance(node, BinOp) and node.op == "*":
        return _numerator_factors(node.left) + _numerator_factors(node.right)
    if isinstance(node, BinOp) and node.op == "/":
        return _numerator_factors(node.left)
    if isinstance(node, Pow) and node.exponent > 0:
        return _numerator_factors(node.base)
    return [node]


def parse(text: str, context: Union[str, ExpressionContext] = ExpressionContext.SYMBOL):
    """Parse ``text`` as a holomorphic symbol or, with ``context="weight"``, as a weight."""
    context = ExpressionContext(context)
    if context == ExpressionContext.WEIGHT:
        return WeightExpression.parse(text)
    return SymbolExpression.parse(text)


def eval_expression(expression: SymbolExpression, z: PointLike) -> complex:
    return expression.eval(z)
