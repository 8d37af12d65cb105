"""Seeded function families used by the verifiers, the tests and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .expr import X, AbsPow, Bump, Compose, Const, Expr, Unary, parse, to_text
from .sampled import Interval, SampledFunction, StepFunction, normalize

FAMILIES = ("smooth-poly", "trig", "abs-kink", "step", "corpus-psi", "corpus-u_alpha", "corpus-psi_ab")

# paper-facing names kept for listings
CATALOGUE = {
    "corpus-u_alpha": {
        "formula": "abs(x + a) - abs(a)",
        "window": [-2.0, 2.0],
        "note": "Lipschitz, kink at -a; absolute value composed with a shift",
    },
    "corpus-psi": {
        "formula": "abs(x)*rho(x)/log(abs(x))",
        "window": [-0.5, 0.5],
        "note": "slowly vanishing log correction at 0; sampled on midpoint grids",
    },
    "corpus-psi_ab": {
        "formula": "abspow(x, a+1)*rho(x)*sin(abspow(x, -b))",
        "window": [-0.5, 0.5],
        "note": "derivative has bounded p-variation iff 1/p < a/b - 1 (0 < b < a)",
    },
}


@dataclass(frozen=True)
class CorpusMember:
    family: str
    index: int
    native: Interval
    expr: Expr | None = None
    step: StepFunction | None = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def name(self) -> str:
        return f"{self.family}#{self.index}"

    def expression_on(self, interval: Interval | None = None) -> Expr:
        """The member reparametrised affinely from ``interval`` onto its native window."""
        if self.expr is None:
            raise ValidationError(f"{self.family} members have no expression form")
        if interval is None or interval == self.native:
            return self.expr
        a = self.native.length / interval.length
        b = self.native.lo - a * interval.lo
        return Compose(self.expr, Const(a) * X + Const(b))

    def sample(self, n: int, interval: Interval | None = None, midpoint: bool = False) -> SampledFunction:
        iv = interval or self.native
        xs = iv.midpoints(n) if midpoint else iv.linspace(n)
        if self.step is not None:
            u = self.native.lo + (xs - iv.lo) * (self.native.length / iv.length)
            ys = self.step(u)
        else:
            from .expr import evaluate
            ys = evaluate(self.expression_on(iv), xs)
        return SampledFunction(xs, ys, iv if not midpoint else None, meta={"member": self.name})

    def text(self) -> str:
        return to_text(self.expr) if self.expr is not None else "<step>"


def psi_ab(alpha: float, beta: float) -> Expr:
    if not 0 < beta < alpha:
        raise ValidationError(f"need 0 < beta < alpha, got alpha={alpha}, beta={beta}")
    return AbsPow(X, alpha + 1.0) * Bump(0, X) * Unary("sin", AbsPow(X, -beta))


def psi_log() -> Expr:
    return Unary("abs", X) * Bump(0, X) / Unary("log", Unary("abs", X))


def u_alpha(alpha: float) -> Expr:
    return Unary("abs", X + Const(alpha)) - Unary("abs", Const(alpha))


def _poly(rng) -> Expr:
    deg = int(rng.integers(1, 4))
    c = rng.uniform(-1.5, 1.5, deg + 1)
    e: Expr = Const(float(c[0]))
    for k in range(1, deg + 1):
        e = e + Const(float(c[k])) * (X ** k if k > 1 else X)
    return e


def _trig(rng) -> Expr:
    a = float(rng.uniform(0.3, 1.5))
    b = float(rng.uniform(0.5, 3 * math.pi))
    c = float(rng.uniform(0, 2 * math.pi))
    d = float(rng.uniform(-0.5, 0.5))
    fn = "sin" if rng.random() < 0.5 else "cos"
    return Const(a) * Unary(fn, Const(b) * X + Const(c)) + Const(d)


def _kink(rng) -> Expr:
    a = float(rng.uniform(-1.5, 1.5))
    c = float(rng.uniform(0.15, 0.85))
    b = float(rng.uniform(-1, 1))
    d = float(rng.uniform(-0.5, 0.5))
    return Const(a) * Unary("abs", X - Const(c)) + Const(b) * X + Const(d)


def _step(rng) -> StepFunction:
    k = int(rng.integers(1, 7))
    inner = np.sort(rng.uniform(0.05, 0.95, k))
    b = np.concatenate([[0.0], inner, [1.0]])
    pl = rng.uniform(-1.5, 1.5, k + 1)
    raw = StepFunction(b, rng.uniform(-1.5, 1.5, k + 2), pl)
    return normalize(raw)


@dataclass(frozen=True)
class FunctionFamily:
    family: str
    seed: int = 0
    size: int = 10

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.size < 0:
            raise ValidationError("size must be >= 0")

    def members(self) -> list:
        return [self.member(i) for i in range(self.size)]

    def member(self, i: int) -> CorpusMember:
        rng = np.random.default_rng([self.seed, FAMILIES.index(self.family), i])
        unit = Interval(0.0, 1.0)
        fam = self.family
        if fam == "smooth-poly":
            return CorpusMember(fam, i, unit, expr=_poly(rng))
        if fam == "trig":
            return CorpusMember(fam, i, unit, expr=_trig(rng))
        if fam == "abs-kink":
            return CorpusMember(fam, i, unit, expr=_kink(rng))
        if fam == "step":
            return CorpusMember(fam, i, unit, step=_step(rng))
        if fam == "corpus-u_alpha":
            a = float(rng.uniform(-1, 1))
            return CorpusMember(fam, i, Interval(-2.0, 2.0), expr=u_alpha(a), params={"alpha": a})
        if fam == "corpus-psi":
            return CorpusMember(fam, i, Interval(-0.5, 0.5), expr=psi_log())
        if fam == "corpus-psi_ab":
            a = float(rng.uniform(1.0, 3.0))
            b = float(rng.uniform(0.2, 0.9) * a)
            return CorpusMember(fam, i, Interval(-0.5, 0.5), expr=psi_ab(a, b), params={"alpha": a, "beta": b})
        raise AssertionError(fam)


def listing() -> list:
    rows = []
    for fam in FAMILIES:
        entry = {"family": fam}
        entry.update(CATALOGUE.get(fam, {}))
        rows.append(entry)
    return rows


def parse_member_text(text: str) -> Expr:
    return parse(text)
