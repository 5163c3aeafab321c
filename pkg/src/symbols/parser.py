"""
Recursive-descent parser for symbol and weight expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" signed_number)?
    atom   := "z" | "i" | number | "(" expr ")" | func "(" expr ")"
    func   := "exp"                                  (everywhere)
            | "abs" | "re" | "im" | "max0" | "indisk" | "conj"   (weights only)

Errors carry the byte offset of the offending token.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import List

from ..errors import SymbolSyntaxError
from .nodes import BinOp, Call, Const, Neg, Node, Pow, Var


class ExpressionContext(str, Enum):
    """Where an expression is used; weights allow non-holomorphic functions."""

    SYMBOL = "symbol"
    WEIGHT = "weight"


HOLOMORPHIC_FUNCTIONS = frozenset({"exp"})
WEIGHT_FUNCTIONS = frozenset({"abs", "re", "im", "max0", "indisk", "conj"})

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position >= len(text):
            break
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            raise SymbolSyntaxError(
                f"unexpected character {text[position]!r}", _byte_offset(text, position), text
            )
        kind = match.lastgroup or "op"
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), _byte_offset(text, start)))
        position = match.end()
    tokens.append(Token("eof", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf-8"))


class Parser:
    """Parses one expression string into a tree."""

    def __init__(self, text: str, context: ExpressionContext = ExpressionContext.SYMBOL):
        self.text = text
        self.context = context
        self.tokens = tokenize(text)
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def _advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def _error(self, message: str, token: Token) -> SymbolSyntaxError:
        return SymbolSyntaxError(message, token.offset, self.text)

    def _expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind not in ("op",):
            found = self.current.text or "end of input"
            raise self._error(f"expected {text!r}, found {found!r}", self.current)
        return self._advance()

    def parse(self) -> Node:
        if self.current.kind == "eof":
            raise self._error("empty expression", self.current)
        node = self._expr()
        if self.current.kind != "eof":
            raise self._error(f"unexpected {self.current.text!r}", self.current)
        return node

    def _expr(self) -> Node:
        node = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            return Pow(base, self._signed_number())
        return base

    def _signed_number(self) -> float:
        sign = 1.0
        if self.current.kind == "op" and self.current.text in "+-":
            sign = -1.0 if self._advance().text == "-" else 1.0
        if self.current.kind != "number":
            raise self._error("exponent must be a number", self.current)
        return sign * float(self._advance().text)

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(complex(float(token.text)))
        if token.kind == "ident":
            self._advance()
            if token.text == "z":
                return Var()
            if token.text == "i":
                return Const(1j)
            if token.text in HOLOMORPHIC_FUNCTIONS or token.text in WEIGHT_FUNCTIONS:
                if token.text in WEIGHT_FUNCTIONS and self.context != ExpressionContext.WEIGHT:
                    raise self._error(
                        f"{token.text}() is not allowed in a holomorphic symbol", token
                    )
                self._expect("(")
                argument = self._expr()
                self._expect(")")
                return Call(token.text, argument)
            raise self._error(f"unknown identifier {token.text!r}", token)
        if token.kind == "op" and token.text == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        raise self._error(f"unexpected {token.text or 'end of input'!r}", token)


def parse_node(text: str, context: ExpressionContext = ExpressionContext.SYMBOL) -> Node:
    return Parser(text, context).parse()
