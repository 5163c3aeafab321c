"""
Constructors for the symbols that have closed-form behaviour.
"""

from .expressions import SymbolExpression


def _number(value: complex) -> str:
    value = complex(value)
    real, imag = repr(float(value.real)), repr(float(value.imag))
    if value.imag == 0.0:
        return f"({real})"
    return f"({real} + {imag}*i)"


def affine(a: float, b: complex) -> SymbolExpression:
    """phi(z) = a z + b with a > 0 and Im b >= 0, a self-map of the half-plane."""
    b = complex(b)
    if a <= 0.0:
        raise ValueError(f"affine symbol needs a > 0, got {a}")
    if b.imag < 0.0:
        raise ValueError(f"affine symbol needs Im b >= 0, got {b}")
    return SymbolExpression.parse(f"{float(a)!r}*z + {_number(b)}")


def translation(b: complex) -> SymbolExpression:
    return affine(1.0, b)


def mobius(a: float, b: float, c: float, d: float) -> SymbolExpression:
    """phi(z) = (a z + b) / (c z + d), real coefficients with ad - bc > 0."""
    if a * d - b * c <= 0.0:
        raise ValueError("mobius symbol needs ad - bc > 0")
    return SymbolExpression.parse(
        f"({_number(a)}*z + {_number(b)}) / ({_number(c)}*z + {_number(d)})"
    )


def identity() -> SymbolExpression:
    return SymbolExpression.parse("z")


def constant(value: complex) -> SymbolExpression:
    return SymbolExpression.parse(_number(value))
