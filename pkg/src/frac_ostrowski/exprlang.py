"""A small expression language in one variable ``x`` with exact first derivatives.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'x' | CONST | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := exp | ln | abs | sin | cos | sqrt
    CONST   := pi | e

``^`` binds tighter than unary minus and is right-associative, so ``-x^2``
is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``. Derivatives come from
forward-mode dual arithmetic; evaluation accepts scalars or numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvaluationError, NondifferentiableError, ParseError

GRAMMAR_VERSION = 1

UNARY_FUNCS = ("exp", "ln", "abs", "sin", "cos", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of UNARY_FUNCS
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


Node = Union[Const, Var, Unary, Binary]


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _expect(self, text: str):
        if self.tok.kind == "op" and self.tok.text == text:
            return self._advance()
        found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
        raise ParseError(f"expected {text!r}, found {found}", self.tok.pos)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self._advance()
            return Binary("^", base, self.unary())
        return base

    def primary(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self._advance()
            return Const(float(tok.text))
        if tok.kind == "name":
            self._advance()
            if tok.text == "x":
                return Var()
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            if tok.text in UNARY_FUNCS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Unary(tok.text, arg)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos, name=tok.text)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.pos)


def parse(text: str) -> Node:
    """Parse expression text into an immutable tree."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _fmt_const(v: float) -> str:
    if v == math.pi:
        return "pi"
    if v == math.e:
        return "e"
    v = float(v)
    text = str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    if v < 0:
        return f"({text})"
    return text


def to_text(node: Node) -> str:
    """Render a tree so that ``parse(to_text(t)) == t`` for parser-produced trees."""
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = to_text(node.arg)
            if _prec(node.arg) < _PREC["neg"]:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({to_text(node.arg)})"
    p = _PREC[node.op]
    left = to_text(node.left)
    right = to_text(node.right)
    if node.op == "^":
        # base must be atomic; the exponent may be any unary-level term
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    # left associativity: an equal-precedence right child needs parentheses
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def _prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return _PREC["neg"]
    return 10


def depends_on_x(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, Unary):
        return depends_on_x(node.arg)
    return depends_on_x(node.left) or depends_on_x(node.right)


# ---------------------------------------------------------------------------
# dual-number evaluation


@dataclass(frozen=True)
class DualValue:
    """Value and derivative with respect to x; fields may be numpy arrays."""

    primal: object
    tangent: object


def _fail(cls, message, node, mask, x):
    where = float(x.flat[int(np.argmax(mask))]) if x.ndim else float(x)
    raise cls(f"{message} in {to_text(node)!r} at x={where!r}", where=where)


def eval_dual(node: Node, x) -> DualValue:
    """Evaluate the expression and its exact derivative at x.

    Domain violations (log or sqrt of a non-positive value, division by
    zero, a negative base under a non-integer or x-dependent exponent)
    raise EvaluationError; abs at 0 raises NondifferentiableError.
    """
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _ev(node, x_arr)
    bad = ~(np.isfinite(out.primal) & np.isfinite(out.tangent))
    if np.any(bad):
        _fail(EvaluationError, "non-finite result", node, bad, x_arr)
    if np.ndim(x) == 0:
        return DualValue(float(out.primal), float(out.tangent))
    return out


def evaluate(node: Node, x):
    """Primal value only."""
    return eval_dual(node, x).primal


def _ev(node: Node, x: np.ndarray) -> DualValue:
    if isinstance(node, Const):
        return DualValue(np.full(x.shape, node.value), np.zeros(x.shape))
    if isinstance(node, Var):
        return DualValue(x, np.ones(x.shape))
    if isinstance(node, Unary):
        u = _ev(node.arg, x)
        return _unary(node, u, x)
    left = _ev(node.left, x)
    if node.op == "^" and not depends_on_x(node.right):
        return _const_power(node, left, _ev(node.right, x), x)
    right = _ev(node.right, x)
    a, da = left.primal, left.tangent
    b, db = right.primal, right.tangent
    if node.op == "+":
        return DualValue(a + b, da + db)
    if node.op == "-":
        return DualValue(a - b, da - db)
    if node.op == "*":
        return DualValue(a * b, a * db + da * b)
    if node.op == "/":
        zero = b == 0
        if np.any(zero):
            _fail(EvaluationError, "division by zero", node, zero, x)
        return DualValue(a / b, (da * b - a * db) / (b * b))
    # general power: exp(b ln a), base must be positive
    nonpos = a <= 0
    if np.any(nonpos):
        _fail(EvaluationError, "non-positive base under an x-dependent exponent", node, nonpos, x)
    val = np.exp(b * np.log(a))
    return DualValue(val, val * (db * np.log(a) + b * da / a))


def _const_power(node: Binary, base: DualValue, expo: DualValue, x) -> DualValue:
    a, da = base.primal, base.tangent
    c = expo.primal
    c0 = float(np.ravel(c)[0]) if np.size(c) else 0.0
    integral = c0 == math.floor(c0)
    if not integral:
        neg = a < 0
        if np.any(neg):
            _fail(EvaluationError, "negative base under a non-integer exponent", node, neg, x)
    if c0 == 0.0:
        return DualValue(np.ones_like(a), np.zeros_like(a))
    if c0 == 1.0:
        return DualValue(a, da)
    if c0 < 1.0 or not integral:
        zero = (a == 0) & (c0 < 1.0)
        if np.any(zero):
            _fail(EvaluationError, "zero base under an exponent below 1", node, zero, x)
    return DualValue(a**c0, c0 * a ** (c0 - 1.0) * da)


def _unary(node: Unary, u: DualValue, x) -> DualValue:
    a, da = u.primal, u.tangent
    op = node.op
    if op == "neg":
        return DualValue(-a, -da)
    if op == "exp":
        v = np.exp(a)
        return DualValue(v, v * da)
    if op == "ln":
        nonpos = a <= 0
        if np.any(nonpos):
            _fail(EvaluationError, "ln of a non-positive value", node, nonpos, x)
        return DualValue(np.log(a), da / a)
    if op == "sqrt":
        nonpos = a <= 0
        if np.any(nonpos):
            _fail(EvaluationError, "sqrt needs a positive argument for a finite derivative", node, nonpos, x)
        v = np.sqrt(a)
        return DualValue(v, da / (2.0 * v))
    if op == "abs":
        zero = a == 0
        if np.any(zero):
            _fail(NondifferentiableError, "abs is not differentiable at 0", node, zero, x)
        return DualValue(np.abs(a), np.sign(a) * da)
    if op == "sin":
        return DualValue(np.sin(a), np.cos(a) * da)
    if op == "cos":
        return DualValue(np.cos(a), -np.sin(a) * da)
    raise EvaluationError(f"unknown operator {op!r}")
