"""Small expression language for coefficient functions and linear operators.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = primary { "^" exponent } ;
    exponent = [ "-" ] number ;
    primary  = number | name | func "(" expr ")" | "(" expr ")" ;
    func     = "sin" | "cos" | "exp" | "sqrt" | "inv" ;

``name`` is the free variable (``x`` by default), the constant ``pi``, or,
in operator context, ``d`` (differentiation). Operators are built from
scalar factors (multiplication by f(x)), ``d``, sums, products
(composition), integer powers and ``inv(f)`` of a d-free factor. A bare
number in operator context is that multiple of the identity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ExprDomainError, ExprSyntaxError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
}
CONSTANTS = {"pi": math.pi}


class Node:
    """Base of the expression tree."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Node):
    name: str
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Const(Node):
    name: str
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Deriv(Node):
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: float
    pos: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node
    pos: int | None = field(default=None, compare=False, repr=False)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, var, operator):
        self.text = text
        self.var = var
        self.operator = operator
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg, pos=None):
        return ExprSyntaxError(msg, self.tok[2] if pos is None else pos, self.text)

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        if self.tok[1] != value:
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")
        return self.advance()

    def parse(self):
        if self.tok[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-"):
            _, op, pos = self.advance()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/"):
            _, op, pos = self.advance()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self):
        if self.tok[1] == "-":
            _, _, pos = self.advance()
            return Neg(self.unary(), pos)
        return self.power()

    def power(self):
        node = self.primary()
        while self.tok[1] == "^":
            _, _, pos = self.advance()
            sign = 1.0
            if self.tok[1] == "-":
                self.advance()
                sign = -1.0
            if self.tok[0] != "num":
                raise self.error("exponent must be a numeric literal")
            node = Pow(node, sign * float(self.advance()[1]), pos)
        return node

    def primary(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.advance()
            return Num(float(value), pos)
        if value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            self.advance()
            if value in FUNCTIONS or (self.operator and value == "inv"):
                if self.tok[1] != "(":
                    raise self.error(f"function {value!r} needs a parenthesized argument")
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(value, arg, pos)
            if value == self.var:
                return Var(value, pos)
            if value in CONSTANTS:
                return Const(value, pos)
            if self.operator and value == "d":
                return Deriv(pos)
            raise ExprSyntaxError(f"unknown identifier {value!r}", pos, self.text)
        found = value or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", pos, self.text)


def parse_scalar(text: str, var: str = "x") -> Node:
    """Parse a real-valued function of one variable."""
    return _Parser(text, var, operator=False).parse()


def parse_operator(text: str) -> Node:
    """Parse a linear differential operator in ``x`` and ``d``."""
    node = _Parser(text, "x", operator=True).parse()
    _check_operator(node, text)
    return node


def has_deriv(node: Node) -> bool:
    if isinstance(node, Deriv):
        return True
    if isinstance(node, (Neg, Call)):
        return has_deriv(node.arg)
    if isinstance(node, Pow):
        return has_deriv(node.base)
    if isinstance(node, BinOp):
        return has_deriv(node.left) or has_deriv(node.right)
    return False


def is_scalar(node: Node) -> bool:
    """True when the operator is multiplication by a function (no ``d``)."""
    return not has_deriv(node)


def _check_operator(node, text):
    if isinstance(node, Call):
        if has_deriv(node.arg):
            what = "inv" if node.func == "inv" else f"nonlinear function {node.func!r}"
            raise ExprSyntaxError(f"d may not appear inside {what}", node.pos, text)
    elif isinstance(node, Pow):
        if has_deriv(node.base) and (node.exponent < 0 or node.exponent != int(node.exponent)):
            raise ExprSyntaxError("powers of an operator must be non-negative integers", node.pos, text)
        _check_operator(node.base, text)
    elif isinstance(node, BinOp):
        if node.op == "/" and has_deriv(node.right):
            raise ExprSyntaxError("cannot divide by an operator containing d", node.pos, text)
        _check_operator(node.left, text)
        _check_operator(node.right, text)
    elif isinstance(node, Neg):
        _check_operator(node.arg, text)


def eval_scalar(node: Node, x):
    """Evaluate a d-free expression at ``x`` (float or array).

    Raises ExprDomainError where the expression is undefined.
    """
    out = _eval(node, np.asarray(x, dtype=float))
    if np.ndim(x) == 0:
        return float(out)
    return np.broadcast_to(out, np.shape(x)).astype(float)


def _domain(msg, node):
    return ExprDomainError(f"{msg} in '{to_text(node)}'")


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, BinOp):
        a = _eval(node.left, x)
        b = _eval(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if np.any(np.asarray(b) == 0):
            raise _domain("division by zero", node)
        return a / b
    if isinstance(node, Pow):
        a = np.asarray(_eval(node.base, x), dtype=float)
        p = node.exponent
        if p < 0 and np.any(a == 0):
            raise _domain("zero raised to a negative power", node)
        if p != int(p) and np.any(a < 0):
            raise _domain("negative base with fractional exponent", node)
        return a**p
    if isinstance(node, Call):
        a = np.asarray(_eval(node.arg, x), dtype=float)
        if node.func == "sqrt" and np.any(a < 0):
            raise _domain("sqrt of a negative number", node)
        if node.func == "inv":
            if np.any(a == 0):
                raise _domain("division by zero", node)
            return 1.0 / a
        with np.errstate(over="raise"):
            try:
                return FUNCTIONS[node.func](a)
            except FloatingPointError:
                raise _domain("overflow", node) from None
    if isinstance(node, Deriv):
        raise TypeError("cannot evaluate d as a scalar")
    raise TypeError(f"unknown node {node!r}")


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_number(v):
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in "+-" else _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    if isinstance(node, Num) and node.value < 0:
        return _PREC_NEG
    return _PREC_ATOM


def _wrap(node, min_prec):
    s = to_text(node)
    return f"({s})" if _prec(node) < min_prec else s


def to_text(node: Node) -> str:
    """Render a tree as text that parses back to the same tree."""
    if isinstance(node, Num):
        s = _fmt_number(abs(node.value))
        return f"-{s}" if node.value < 0 else s
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Deriv):
        return "d"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _PREC_NEG)
    if isinstance(node, BinOp):
        p = _prec(node)
        return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _PREC_POW)}^{_fmt_number(node.exponent)}"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    raise TypeError(f"unknown node {node!r}")


def constant_coefficients(node: Node) -> tuple[float, ...] | None:
    """Coefficients ``(a_0, ..., a_s)`` if the operator is a polynomial in d
    with constant coefficients, else None.
    """
    poly = _const_poly(node)
    if poly is None:
        return None
    while len(poly) > 1 and poly[-1] == 0.0:
        poly.pop()
    return tuple(float(c) for c in poly)


def _padd(p, q, sign=1.0):
    out = [0.0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += sign * c
    return out


def _pmul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _const_poly(node):
    if isinstance(node, Deriv):
        return [0.0, 1.0]
    if not has_deriv(node):
        if _has_var(node):
            return None
        try:
            return [eval_scalar(node, 0.0)]
        except ExprDomainError:
            return None
    if isinstance(node, Neg):
        p = _const_poly(node.arg)
        return None if p is None else [-c for c in p]
    if isinstance(node, BinOp):
        p = _const_poly(node.left)
        q = _const_poly(node.right)
        if p is None or q is None:
            return None
        if node.op == "+":
            return _padd(p, q)
        if node.op == "-":
            return _padd(p, q, -1.0)
        if node.op == "*":
            return _pmul(p, q)
        if q[0] == 0.0:
            return None
        return [c / q[0] for c in p]
    if isinstance(node, Pow):
        p = _const_poly(node.base)
        if p is None:
            return None
        out = [1.0]
        for _ in range(int(node.exponent)):
            out = _pmul(out, p)
        return out
    return None


def _has_var(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, (Neg, Call)):
        return _has_var(node.arg)
    if isinstance(node, Pow):
        return _has_var(node.base)
    if isinstance(node, BinOp):
        return _has_var(node.left) or _has_var(node.right)
    return False
