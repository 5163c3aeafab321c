"""Expression language for the symbols u, phi and weights omega."""

from .catalog import affine, constant, identity, mobius, translation
from .expressions import SymbolExpression, WeightExpression, eval_expression, parse
from .nodes import BinOp, Call, Const, Neg, Node, Pow, Var, to_text
from .parser import ExpressionContext
from .selfmap import SampleLattice, SelfMapReport, require_self_map, verify_self_map

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "ExpressionContext",
    "Neg",
    "Node",
    "Pow",
    "SampleLattice",
    "SelfMapReport",
    "SymbolExpression",
    "Var",
    "WeightExpression",
    "affine",
    "constant",
    "eval_expression",
    "identity",
    "mobius",
    "parse",
    "require_self_map",
    "to_text",
    "translation",
    "verify_self_map",
]
