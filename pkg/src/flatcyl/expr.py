"""Small arithmetic expression language for functions Z -> R.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | "x" | "y" | "pi" | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := "sin" | "cos" | "exp" | "log"

``^`` is right-associative and binds tighter than a leading minus, so
``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.

Evaluation works on Python floats and on numpy arrays alike.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ExpressionError",
    "ExpressionSyntaxError",
    "EvaluationError",
    "Expression",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse_expression",
    "eval_expression",
    "validate_periodicity",
    "halton",
]

FUNCTIONS = ("sin", "cos", "exp", "log")


class ExpressionError(ValueError):
    pass


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.reason = message


class EvaluationError(ExpressionError):
    """Domain error (log of non-positive, 0^negative) or non-finite result."""


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: float

    def source(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    name: str  # "x", "y" or "pi"

    def source(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: "Expression"

    def source(self) -> str:
        return f"(-{self.operand.source()})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expression"
    right: "Expression"

    def source(self) -> str:
        return f"({self.left.source()} {self.op} {self.right.source()})"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"

    def source(self) -> str:
        return f"{self.func}({self.arg.source()})"


Expression = Union[Num, Var, Neg, BinOp, Call]


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, col = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", col)

    def parse(self) -> Expression:
        node = self.expr()
        kind, text, col = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {text!r}", col)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, col = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text in ("x", "y", "pi"):
                return Var(text)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise ExpressionSyntaxError(f"unknown identifier {text!r}", col)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionSyntaxError(f"expected a value, found {found}", col)


def parse_expression(text: str) -> Expression:
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- evaluation


def _check_finite(val, what):
    if not np.all(np.isfinite(val)):
        raise EvaluationError(f"{what} produced a non-finite value")
    return val


def _eval(node, x, y):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name == "x":
            return x
        if node.name == "y":
            return y
        return math.pi
    if isinstance(node, Neg):
        return -_eval(node.operand, x, y)
    if isinstance(node, Call):
        arg = _eval(node.arg, x, y)
        with np.errstate(all="ignore"):
            if node.func == "sin":
                return np.sin(arg)
            if node.func == "cos":
                return np.cos(arg)
            if node.func == "exp":
                return _check_finite(np.exp(arg), "exp")
            if np.any(np.asarray(arg) <= 0):
                raise EvaluationError("log of a non-positive value")
            return np.log(arg)
    left = _eval(node.left, x, y)
    right = _eval(node.right, x, y)
    with np.errstate(all="ignore"):
        if node.op == "+":
            return _check_finite(np.add(left, right), "addition")
        if node.op == "-":
            return _check_finite(np.subtract(left, right), "subtraction")
        if node.op == "*":
            return _check_finite(np.multiply(left, right), "multiplication")
        if node.op == "/":
            if np.any(np.asarray(right) == 0):
                raise EvaluationError("division by zero")
            return _check_finite(np.divide(left, right), "division")
        base = np.asarray(left, dtype=float)
        expo = np.asarray(right, dtype=float)
        if np.any((base == 0) & (expo < 0)):
            raise EvaluationError("zero raised to a negative power")
        if np.any((base < 0) & (expo != np.round(expo))):
            raise EvaluationError("negative base raised to a non-integer power")
        return _check_finite(np.power(base, expo), "power")


def eval_expression(e: Expression, x, y):
    """Evaluate ``e`` at ``(x, y)``.

    Scalars in give a float out; arrays broadcast and give an array.
    """
    val = _eval(e, x, y)
    if np.ndim(val) == 0 and np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(val)
    return np.broadcast_to(np.asarray(val, dtype=float), np.broadcast(x, y).shape).copy()


def halton(n: int, base: int) -> np.ndarray:
    """First ``n`` points (starting at index 1) of the van der Corput sequence."""
    out = np.empty(n)
    for k in range(n):
        i, f, r = k + 1, 1.0, 0.0
        while i > 0:
            f /= base
            r += f * (i % base)
            i //= base
        out[k] = r
    return out


def validate_periodicity(
    e: Expression, samples: int = 16, tol: float = 1e-9, y_span: float = 10.0
) -> bool:
    """Numerically check ``e(x, y) == e(x + 1, y)``.

    Checked on ``x = 0`` against ``x = 1`` and on a ``samples x samples``
    product of Halton points (x in [0, 1), y in [-y_span, y_span)).
    Evaluation errors propagate.
    """
    if samples < 8:
        raise ValueError(f"need at least 8 samples, got {samples}")
    xs = halton(samples, 2)
    ys = (2.0 * halton(samples, 3) - 1.0) * y_span
    X, Y = np.meshgrid(np.concatenate(([0.0], xs)), ys)
    a = eval_expression(e, X, Y)
    b = eval_expression(e, X + 1.0, Y)
    return bool(np.all(np.abs(a - b) <= tol * (1.0 + np.abs(a))))
