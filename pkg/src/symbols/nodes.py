"""
Expression tree nodes, the canonical printer and vectorised evaluation.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Var:
    """The variable z."""


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float


@dataclass(frozen=True)
class Call:
    func: str
    argument: "Node"


Node = Union[Var, Const, Neg, BinOp, Pow, Call]


def to_text(node: Node) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Const):
        value = complex(node.value)
        if value == 1j:
            return "i"
        if value.imag == 0.0 and value.real >= 0.0:
            return repr(float(value.real))
        return f"({value.real!r} + {value.imag!r}*i)"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{float(node.exponent)!r}"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.argument)})"
    raise TypeError(f"unknown node {node!r}")


def contains_variable(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, (Neg,)):
        return contains_variable(node.operand)
    if isinstance(node, BinOp):
        return contains_variable(node.left) or contains_variable(node.right)
    if isinstance(node, Pow):
        return contains_variable(node.base)
    return contains_variable(node.argument)


def _power(base: np.ndarray, exponent: float) -> np.ndarray:
    if float(exponent).is_integer() and abs(exponent) <= 64:
        return np.power(base, int(exponent))
    if exponent > 0:
        zero = base == 0
        return np.where(zero, 0j, np.power(np.where(zero, 1.0, base), exponent))
    return np.power(base, exponent)


_FUNCTIONS = {
    "exp": np.exp,
    "conj": np.conj,
    "abs": lambda w: np.abs(w) + 0j,
    "re": lambda w: np.real(w) + 0j,
    "im": lambda w: np.imag(w) + 0j,
    "max0": lambda w: np.maximum(np.real(w), 0.0) + 0j,
    "indisk": lambda w: (np.abs(w) < 1.0).astype(float) + 0j,
}


def evaluate_node(node: Node, z: np.ndarray) -> np.ndarray:
    """Evaluate on a complex array; arithmetic follows IEEE rules (callers check finiteness)."""
    if isinstance(node, Var):
        return z
    if isinstance(node, Const):
        return np.full(z.shape, complex(node.value))
    if isinstance(node, Neg):
        return -evaluate_node(node.operand, z)
    if isinstance(node, BinOp):
        left = evaluate_node(node.left, z)
        right = evaluate_node(node.right, z)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    if isinstance(node, Pow):
        return _power(evaluate_node(node.base, z), node.exponent)
    if isinstance(node, Call):
        return _FUNCTIONS[node.func](evaluate_node(node.argument, z))
    raise TypeError(f"unknown node {node!r}")
