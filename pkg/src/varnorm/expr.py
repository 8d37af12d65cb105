"""One-variable expressions: parse, print, evaluate, differentiate.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := number | 'x' | 'pi' | 'e' | name '(' args ')' | '(' expr ')'

The exponent of ``^`` must fold to a constant.  ``abspow(t, mu)`` is
``|t|^mu``.  ``rho`` is a fixed smooth bump (1 on [-1/e, 1/e], 0 outside
[-1/2, 1/2]) and ``drho<k>`` its k-th derivative.  ``compose(a, b)``
evaluates ``a`` at the value of ``b``.

``sign(0) = 0``, so the derivative of ``abs`` is the almost-everywhere
derivative.  Evaluation works elementwise on numpy arrays and raises
``EvalDomainError`` naming the first offending x.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import EvalDomainError, ParseError, ValidationError
from . import bump

UNARY_FUNCS = ("neg", "abs", "sin", "cos", "exp", "log", "sqrt", "sign")


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Binary("+", self, _lift(other))

    def __radd__(self, other):
        return Binary("+", _lift(other), self)

    def __sub__(self, other):
        return Binary("-", self, _lift(other))

    def __rsub__(self, other):
        return Binary("-", _lift(other), self)

    def __mul__(self, other):
        return Binary("*", self, _lift(other))

    def __rmul__(self, other):
        return Binary("*", _lift(other), self)

    def __truediv__(self, other):
        return Binary("/", self, _lift(other))

    def __rtruediv__(self, other):
        return Binary("/", _lift(other), self)

    def __neg__(self):
        return Unary("neg", self)

    def __pow__(self, c):
        return Pow(self, float(c))

    def __str__(self):
        return to_text(self)

    def __call__(self, x):
        return evaluate(self, x)


def _lift(v):
    return v if isinstance(v, Expr) else Const(float(v))


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    arg: Expr

    def __post_init__(self):
        if self.op not in UNARY_FUNCS:
            raise ValueError(f"unknown unary op {self.op!r}")


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class AbsPow(Expr):
    arg: Expr
    mu: float


@dataclass(frozen=True)
class Bump(Expr):
    """k-th derivative of the fixed bump, applied to ``arg``."""
    order: int
    arg: Expr


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr


X = Var()


# --- printing ---------------------------------------------------------------

def _num(v: float) -> str:
    s = repr(float(v))
    return f"({s})" if s.startswith("-") else s


def to_text(e: Expr) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(e, Const):
        return _num(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-({to_text(e.arg)}))"
        return f"{e.op}({to_text(e.arg)})"
    if isinstance(e, Binary):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Pow):
        return f"({to_text(e.base)})^{_num(e.exponent)}"
    if isinstance(e, AbsPow):
        return f"abspow({to_text(e.arg)}, {_num(e.mu)})"
    if isinstance(e, Bump):
        name = "rho" if e.order == 0 else f"drho{e.order}"
        return f"{name}({to_text(e.arg)})"
    if isinstance(e, Compose):
        return f"compose({to_text(e.outer)}, {to_text(e.inner)})"
    raise TypeError(f"not an expression: {e!r}")


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    toks = []
    pos = 0
    raw = text.encode("utf-8")
    # offsets are byte offsets into the utf-8 encoding
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", len(text[:j].encode("utf-8")))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), len(text[:start].encode("utf-8"))))
        pos = m.end()
    toks.append(("end", "", len(raw)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, v, off = self.take()
        if v != value or kind == "end":
            found = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {value!r}, found {found}", off)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", off)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.unary())
        return e

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            if self.peek()[0] == "num" and self.toks[self.i + 1][1] != "^":
                return Const(-float(self.take()[1]))
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            off = self.take()[2]
            return Pow(base, self.exponent(off))
        return base

    def exponent(self, off):
        if self.peek()[1] == "-":
            self.take()
            return -self.exponent(off)
        e = self.atom()
        if self.peek()[1] == "^":
            off2 = self.take()[2]
            e = Pow(e, self.exponent(off2))
        return self.fold_constant(e, off)

    def fold_constant(self, e, off):
        if _has_var(e):
            raise ParseError("exponent must be a constant", off)
        try:
            v = float(evaluate(e, 0.0))
        except EvalDomainError as exc:
            raise ParseError(f"exponent does not evaluate: {exc}", off) from None
        if not math.isfinite(v):
            raise ParseError("exponent is not finite", off)
        return v

    def atom(self):
        kind, v, off = self.take()
        if kind == "num":
            return Const(float(v))
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if v == "x":
                return X
            if v == "pi":
                return Const(math.pi)
            if v == "e":
                return Const(math.e)
            if self.peek()[1] != "(":
                raise ParseError(f"unknown identifier {v!r}", off)
            self.take()
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            return self.call(v, args, off)
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected token {v!r}", off)

    def call(self, name, args, off):
        def arity(k):
            if len(args) != k:
                raise ParseError(f"{name} takes {k} argument(s), got {len(args)}", off)

        if name in UNARY_FUNCS and name != "neg":
            arity(1)
            return Unary(name, args[0])
        if name == "abspow":
            arity(2)
            return AbsPow(args[0], self.fold_constant(args[1], off))
        if name == "compose":
            arity(2)
            return Compose(args[0], args[1])
        m = re.fullmatch(r"rho|drho(\d+)", name)
        if m:
            arity(1)
            return Bump(int(m.group(1) or 0), args[0])
        raise ParseError(f"unknown identifier {name!r}", off)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def _has_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Const):
        return False
    if isinstance(e, (Unary, AbsPow, Bump)):
        return _has_var(e.arg)
    if isinstance(e, Pow):
        return _has_var(e.base)
    if isinstance(e, Binary):
        return _has_var(e.left) or _has_var(e.right)
    if isinstance(e, Compose):
        return _has_var(e.inner) and _has_var(e.outer)
    raise TypeError(e)


# --- evaluation -------------------------------------------------------------

def _first(x, mask):
    shape = np.broadcast_shapes(np.shape(x), np.shape(mask))
    xb = np.broadcast_to(x, shape).ravel()
    mb = np.broadcast_to(mask, shape).ravel()
    return float(xb[int(np.argmax(mb))])


def evaluate(e: Expr, x):
    """Evaluate elementwise; a scalar in gives a float out."""
    xa = np.asarray(x, dtype=np.float64)
    with np.errstate(all="ignore"):
        out = _ev(e, xa, xa)
    out = np.broadcast_to(out, xa.shape)
    if np.ndim(xa) == 0:
        return float(out)
    return np.array(out, dtype=np.float64)


def _ev(e, v, x0):
    # v: the current argument value array; x0: original x (for error messages)
    if isinstance(e, Const):
        return np.float64(e.value)
    if isinstance(e, Var):
        return v
    if isinstance(e, Compose):
        return _ev(e.outer, _ev(e.inner, v, x0), x0)
    if isinstance(e, Unary):
        a = _ev(e.arg, v, x0)
        op = e.op
        if op == "neg":
            return -a
        if op == "abs":
            return np.abs(a)
        if op == "sin":
            return np.sin(a)
        if op == "cos":
            return np.cos(a)
        if op == "exp":
            return np.exp(a)
        if op == "sign":
            return np.sign(a)
        if op == "log":
            bad = a <= 0
            if np.any(bad):
                raise EvalDomainError("log of a nonpositive number", x=_first(x0, bad))
            return np.log(a)
        if op == "sqrt":
            bad = a < 0
            if np.any(bad):
                raise EvalDomainError("sqrt of a negative number", x=_first(x0, bad))
            return np.sqrt(a)
    if isinstance(e, Binary):
        a = _ev(e.left, v, x0)
        b = _ev(e.right, v, x0)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            bad = b == 0
            if np.any(bad):
                raise EvalDomainError("division by zero", x=_first(x0, bad))
            return a / b
        raise ValueError(f"unknown binary op {e.op!r}")
    if isinstance(e, Pow):
        a = _ev(e.base, v, x0)
        c = e.exponent
        if c < 0:
            bad = a == 0
            if np.any(bad):
                raise EvalDomainError("zero raised to a negative power", x=_first(x0, bad))
        if c != int(c):
            bad = a < 0
            if np.any(bad):
                raise EvalDomainError("negative base with non-integer exponent", x=_first(x0, bad))
        return np.power(a, c)
    if isinstance(e, AbsPow):
        a = np.abs(_ev(e.arg, v, x0))
        if e.mu < 0:
            bad = a == 0
            if np.any(bad):
                raise EvalDomainError("abspow of zero with negative exponent", x=_first(x0, bad))
        elif e.mu == 0:
            return np.ones_like(a)
        return np.power(a, e.mu)
    if isinstance(e, Bump):
        return bump.rho_derivative(_ev(e.arg, v, x0), e.order)
    raise TypeError(f"not an expression: {e!r}")


# --- calculus ---------------------------------------------------------------

def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and a.value == 1.0:
        return b
    if isinstance(b, Const) and b.value == 1.0:
        return a
    return Binary("*", a, b)


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx.  No simplification beyond dropping factors of one."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Compose):
        return _mul(Compose(differentiate(e.outer), e.inner), differentiate(e.inner))
    if isinstance(e, Unary):
        u, du = e.arg, differentiate(e.arg)
        op = e.op
        if op == "neg":
            return Unary("neg", du)
        if op == "abs":
            return _mul(Unary("sign", u), du)
        if op == "sin":
            return _mul(Unary("cos", u), du)
        if op == "cos":
            return _mul(Unary("neg", Unary("sin", u)), du)
        if op == "exp":
            return _mul(e, du)
        if op == "log":
            return Binary("/", du, u)
        if op == "sqrt":
            return Binary("/", du, Binary("*", Const(2.0), e))
        if op == "sign":
            return Const(0.0)
    if isinstance(e, Binary):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        if e.op in "+-":
            return Binary(e.op, da, db)
        if e.op == "*":
            return Binary("+", _mul(da, b), _mul(a, db))
        if e.op == "/":
            return Binary("/", Binary("-", _mul(da, b), _mul(a, db)), Pow(b, 2.0))
    if isinstance(e, Pow):
        c = e.exponent
        if c == 0:
            return Const(0.0)
        inner = Const(1.0) if c == 1 else Pow(e.base, c - 1.0)
        return _mul(_mul(Const(c), inner), differentiate(e.base))
    if isinstance(e, AbsPow):
        mu = e.mu
        if mu == 0:
            return Const(0.0)
        core = _mul(Const(mu), _mul(Unary("sign", e.arg), AbsPow(e.arg, mu - 1.0)))
        return _mul(core, differentiate(e.arg))
    if isinstance(e, Bump):
        return _mul(Bump(e.order + 1, e.arg), differentiate(e.arg))
    raise TypeError(f"not an expression: {e!r}")


def compose(*gs: Expr) -> Expr:
    """compose(g1, g2, ..., gn) = g1 o g2 o ... o gn."""
    if not gs:
        return X
    return reduce(lambda inner, outer: Compose(outer, inner), reversed(gs[:-1]), gs[-1])


@dataclass(frozen=True)
class ChainProduct:
    """Derivative of g1 o ... o gn as a product of n factors.

    ``factors[k]`` is g_{k+1}' evaluated along the tail g_{k+2} o ... o g_n,
    so the last factor is g_n' itself.
    """

    gs: tuple
    factors: tuple
    tails: tuple

    def __len__(self):
        return len(self.factors)

    def evaluate(self, x, order=None):
        idx = range(len(self.factors)) if order is None else order
        out = 1.0
        for k in idx:
            out = out * evaluate(self.factors[k], x)
        return out

    def expr(self) -> Expr:
        return reduce(lambda a, b: Binary("*", a, b), self.factors)


def chain_derivative(gs) -> ChainProduct:
    """Factorwise chain rule; never differentiates the composed tree."""
    gs = tuple(gs)
    n = len(gs)
    if n < 2:
        raise ValidationError("chain_derivative needs at least two functions")
    factors, tails = [], []
    for i in range(n):
        tail = compose(*gs[i + 1:]) if i + 1 < n else X
        d = differentiate(gs[i])
        factors.append(d if i + 1 == n else Compose(d, tail))
        tails.append(tail)
    return ChainProduct(gs, tuple(factors), tuple(tails))
