"""Inequality verifiers.

Every check returns :class:`InequalityReport` objects carrying both sides,
the slack used, a digest of the inputs and the seed, so a report can be
reproduced from its own fields.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .corpus import FunctionFamily, psi_ab
from .errors import EvalDomainError, ValidationError
from .expr import X, Bump, Const, Expr, Unary, AbsPow, chain_derivative, compose, differentiate, evaluate, to_text
from .findiff import lp_norm, sobolev_fd_norm
from .interp import embedding_chain_report
from .pvar import bvp_alpha_norm, pvar_dp, vp_norm
from .sampled import Interval, SampledFunction, compose_samples, cumulative_integral, image_interval

SLACK = 1e-9
UNIT = Interval(0.0, 1.0)
# max ratio seen by calibrate_mult_support(range(20)) was 0.99883; rounded up and frozen
MULT_SUPPORT_C = 1.0
CONVERGENT, DIVERGENT, INCONCLUSIVE = "CONVERGENT", "DIVERGENT", "INCONCLUSIVE"


@dataclass(frozen=True)
class InequalityReport:
    theorem: str
    lhs: float
    rhs: float
    slack: float
    digest: str
    seed: int | None = None
    params: dict = field(default_factory=dict, compare=False)
    flags: tuple = ()

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs + self.slack)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        d["ratio"] = self.ratio
        d["holds"] = self.holds
        return d


def digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, SampledFunction):
            h.update(np.ascontiguousarray(part.xs).tobytes())
            h.update(np.ascontiguousarray(part.ys).tobytes())
        elif isinstance(part, np.ndarray):
            h.update(np.ascontiguousarray(part, dtype=np.float64).tobytes())
        elif isinstance(part, Expr):
            h.update(to_text(part).encode())
        else:
            h.update(json.dumps(part, sort_keys=True, default=repr).encode())
        h.update(b"|")
    return h.hexdigest()[:16]


def _report(theorem, lhs, rhs, inputs, seed=None, params=None, flags=(), slack=SLACK):
    return InequalityReport(theorem, float(lhs), float(rhs), slack, digest(theorem, *inputs),
                            seed, dict(params or {}), tuple(flags))


def _sample_expr(e: Expr, xs) -> np.ndarray:
    ys = np.broadcast_to(np.asarray(evaluate(e, xs), dtype=np.float64), np.shape(xs)).copy()
    bad = ~np.isfinite(ys)
    if bad.any():
        raise EvalDomainError(f"{to_text(e)} is not finite", x=float(np.asarray(xs)[np.argmax(bad)]))
    return ys


# --- Banach algebra ----------------------------------------------------------

def check_banach_algebra(f: SampledFunction, g: SampledFunction, p: float, alpha: float = 0.0,
                         seed=None) -> InequalityReport:
    """||fg|| <= ||f|| ||g||.

    alpha = 0 uses sup + nu_p.  alpha > 0 uses nu_p^alpha + weighted sup,
    which needs every node inside [-1, 1] and away from 0.
    """
    if f.n != g.n or not np.array_equal(f.xs, g.xs):
        raise ValidationError("f and g must share one grid")
    if alpha > 0:
        if np.any(f.xs == 0) or np.any(np.abs(f.xs) > 1):
            raise ValidationError("alpha > 0 needs nodes in [-1, 1] avoiding 0 (use a midpoint grid)")
        def norm(u):
            return bvp_alpha_norm(u, p, alpha)
    else:
        def norm(u):
            return vp_norm(u, p)
    fg = f.with_values(f.ys * g.ys)
    nf, ng = norm(f), norm(g)
    return _report("banach", norm(fg), nf * ng, (f, g, p, alpha), seed,
                   {"p": p, "alpha": alpha, "norm_f": nf, "norm_g": ng})


# --- basic inequality --------------------------------------------------------

def check_basic_inequality(f: SampledFunction, h: SampledFunction, p: float, alpha0: float, t0: float,
                           seed=None) -> tuple:
    """Reports (a) and (b) for (f o g) h with g = alpha0 + int_{t0} h."""
    g = cumulative_integral(h, alpha0, t0)
    J = image_interval(g)
    if f.interval is None or not f.interval.contains(J, tol=1e-12 * max(J.length, 1.0)):
        raise ValidationError(f"f must be defined on the image [{J.lo!r}, {J.hi!r}] of g")
    F = compose_samples(f, g)
    prod = h.with_values(F.ys * h.ys)
    flags = ("degenerate-image",) if J.degenerate else ()
    if J.degenerate:
        c = float(f(0.5 * (J.lo + J.hi)))
        nu_f, sup_f = 0.0, abs(c)
    else:
        fr = f.restrict(J.lo, J.hi)
        nu_f, sup_f = pvar_dp(fr, p).value, fr.sup_abs()
    nu_h, sup_h = pvar_dp(h, p).value, h.sup_abs()
    c = 2.0 ** (1.0 / p)
    lhs_a = pvar_dp(prod, p).value
    rhs_a = nu_f * (sup_h + c * nu_h) + nu_h * sup_f
    lhs_b = prod.sup_abs() + lhs_a
    rhs_b = c * (sup_f + nu_f) * (sup_h + nu_h)
    inputs = (f, h, g, p, alpha0, t0)
    params = {"p": p, "alpha0": alpha0, "t0": t0, "image": [J.lo, J.hi],
              "nu_f": nu_f, "sup_f": sup_f, "nu_h": nu_h, "sup_h": sup_h}
    return (_report("basic-a", lhs_a, rhs_a, inputs, seed, params, flags),
            _report("basic-b", lhs_b, rhs_b, inputs, seed, params, flags))


# --- BV_p^1 composition --------------------------------------------------------

def _image(e: Expr, window: Interval, xs, dense: int) -> tuple:
    """Sampled image interval of e over window, and e at xs."""
    at = _sample_expr(e, xs)
    grid = _sample_expr(e, window.linspace(dense))
    lo = min(float(at.min()), float(grid.min()))
    hi = max(float(at.max()), float(grid.max()))
    return lo, hi, at


def _sampled_on_image(e: Expr, lo: float, hi: float, extra, n: int) -> tuple:
    """e at a uniform grid of [lo, hi] merged with the points ``extra``."""
    degenerate = hi - lo <= 4 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    if degenerate:
        pad = 4 * np.finfo(float).eps * max(abs(lo), 1.0)
        pts = np.array([lo - pad, hi + pad])
    else:
        pts = np.unique(np.concatenate([np.linspace(lo, hi, n), np.asarray(extra, dtype=np.float64)]))
    return SampledFunction(pts, _sample_expr(e, pts)), degenerate


def check_composition_bvp1(f: Expr, g: Expr, p: float, window: Interval = UNIT, n: int = 513,
                           seed=None) -> InequalityReport:
    """||f o g||_{BV_p^1} <= ||f||_{BV_p^1} (1 + 2^{1/p} ||g||_{BV_p^1}) on a window.

    Norms are |u(x0)| + sup|u'| + nu_p(u') with x0 the left endpoint of the
    window (for f: x0 mapped through g).  Derivatives are sampled on cell
    midpoints so kinks never sit on a node.
    """
    x0 = window.lo
    xs = window.midpoints(n)
    fp, gp = differentiate(f), differentiate(g)
    y0 = float(evaluate(g, x0))
    lo, hi, gx = _image(g, window, xs, 4 * n)
    lo, hi = min(lo, y0), max(hi, y0)
    chain = _sample_expr(fp, gx) * _sample_expr(gp, xs)
    lhs = abs(float(evaluate(f, y0))) + vp_norm(SampledFunction(xs, chain), p)
    fps, degenerate = _sampled_on_image(fp, lo, hi, gx, n)
    norm_f = abs(float(evaluate(f, y0))) + vp_norm(fps, p)
    norm_g = abs(y0) + vp_norm(SampledFunction(xs, _sample_expr(gp, xs)), p)
    rhs = norm_f * (1 + 2.0 ** (1.0 / p) * norm_g)
    return _report("bvp1", lhs, rhs, (f, g, p, window.lo, window.hi, n), seed,
                   {"p": p, "window": [window.lo, window.hi], "n": n, "norm_f": norm_f, "norm_g": norm_g,
                    "f": to_text(f), "g": to_text(g), "direction": "membership implies bounded operator"},
                   ("degenerate-image",) if degenerate else ())


# --- n-fold chain ------------------------------------------------------------

def check_nfold(gs, f: Expr | None, p: float, window: Interval = UNIT, n: int = 513, seed=None) -> tuple:
    """Side (i), and side (ii) when f is given, for h = (g1 o ... o gn)'."""
    gs = tuple(gs)
    m = len(gs)
    if m < 2:
        raise ValidationError("need at least two functions in the chain")
    xs = window.midpoints(n)
    cp = chain_derivative(gs)
    hx = np.broadcast_to(np.asarray(cp.evaluate(xs), dtype=np.float64), xs.shape)
    if not np.all(np.isfinite(hx)):
        raise EvalDomainError("chain derivative is not finite", x=float(xs[np.argmax(~np.isfinite(hx))]))
    hs = SampledFunction(xs, hx)
    factors, images, flags = [], [], []
    for k in range(m - 1):
        tail = cp.tails[k]
        lo, hi, tx = _image(tail, window, xs, 4 * n)
        gk, degenerate = _sampled_on_image(differentiate(gs[k]), lo, hi, tx, n)
        if degenerate:
            flags.append(f"degenerate-tail-{k + 1}")
        factors.append(vp_norm(gk, p))
        images.append([lo, hi])
    factors.append(vp_norm(SampledFunction(xs, _sample_expr(differentiate(gs[-1]), xs)), p))
    images.append([window.lo, window.hi])
    pref_i = 2.0 ** ((m - 1) / p)
    prod = float(np.prod(factors))
    params = {"p": p, "n": m, "grid": n, "window": [window.lo, window.hi], "prefactor": pref_i,
              "factors": factors, "images": images, "gs": [to_text(g) for g in gs]}
    inputs = (tuple(to_text(g) for g in gs), to_text(f) if f is not None else None, p, window.lo, window.hi, n)
    rep_i = _report("nfold-i", vp_norm(hs, p), pref_i * prod, inputs, seed, params, flags)
    if f is None:
        return (rep_i,)
    G = compose(*gs)
    lo, hi, Gx = _image(G, window, xs, 4 * n)
    fs, degenerate = _sampled_on_image(f, lo, hi, Gx, n)
    norm_f = vp_norm(fs, p)
    lhs_ii = vp_norm(SampledFunction(xs, _sample_expr(f, Gx) * hx), p)
    pref_ii = 2.0 ** (m / p)
    params_ii = dict(params, prefactor=pref_ii, norm_f=norm_f, f=to_text(f), f_image=[lo, hi])
    rep_ii = _report("nfold-ii", lhs_ii, pref_ii * norm_f * prod, inputs, seed, params_ii,
                     flags + (["degenerate-image"] if degenerate else []))
    return rep_i, rep_ii


# --- norm composition property ---------------------------------------------------

@dataclass(frozen=True)
class NormPropertyEstimate:
    c: float
    digest: str
    ratios: tuple
    norm: str
    n: int
    p: float


def _sampled_norm(f: Expr, g_expr: Expr | None, gs: SampledFunction, norm: str, p: float) -> tuple:
    """(||f o g||, ||g||) for one member."""
    if norm == "vp":
        fg = gs.with_values(_sample_expr(f, gs.ys))
        return vp_norm(fg, p), vp_norm(gs, p)
    if norm == "bvp1":
        if g_expr is None:
            raise ValidationError("the bvp1 selector needs expression members")
        xs = gs.xs
        gp = _sample_expr(differentiate(g_expr), xs)
        x0 = float(xs[0])
        g0 = float(evaluate(g_expr, x0))
        comp = _sample_expr(differentiate(f), gs.ys) * gp
        a = abs(float(evaluate(f, g0))) + vp_norm(SampledFunction(xs, comp), p)
        b = abs(g0) + vp_norm(SampledFunction(xs, gp), p)
        return a, b
    raise ValidationError(f"unknown norm selector {norm!r}; use vp or bvp1")


def check_norm_property(f: Expr, family: FunctionFamily, norm: str = "vp", p: float = 2.0,
                        n: int = 257, trials: int | None = None) -> NormPropertyEstimate:
    """c_f estimated as the max of ||f o g|| / (1 + ||g||) over family members."""
    members = family.members() if trials is None else [family.member(i) for i in range(trials)]
    best, best_d, ratios = 0.0, "", []
    for mem in members:
        gs = mem.sample(n, midpoint=True)
        a, b = _sampled_norm(f, mem.expr, gs, norm, p)
        r = a / (1.0 + b)
        ratios.append(r)
        if r >= best:
            best, best_d = r, digest("norm-property", f, gs, norm, p)
    return NormPropertyEstimate(best, best_d, tuple(ratios), norm, n, p)


# --- multiplication with compact support ---------------------------------------

def _slope_norm(u: SampledFunction, p: float) -> float:
    """|u(x0)| + sup|Du| + nu_p(Du), Du the cell slopes at cell centres."""
    slopes = np.diff(u.ys) / np.diff(u.xs)
    mids = 0.5 * (u.xs[1:] + u.xs[:-1])
    return abs(float(u.ys[0])) + vp_norm(SampledFunction(mids, slopes), p)


def check_mult_support(f: SampledFunction, g: SampledFunction, p: float, window: Interval,
                       c: float | None = None, seed=None) -> InequalityReport:
    if f.n != g.n or not np.array_equal(f.xs, g.xs):
        raise ValidationError("f and g must share one grid")
    outside = (g.xs < window.lo) | (g.xs > window.hi)
    if np.any(np.abs(g.ys[outside]) > 1e-12):
        k = int(np.flatnonzero(outside & (np.abs(g.ys) > 1e-12))[0])
        raise ValidationError(f"g does not vanish outside the window: g({float(g.xs[k])!r}) = {float(g.ys[k])!r}")
    c = MULT_SUPPORT_C if c is None else c
    nf, ng = _slope_norm(f, p), _slope_norm(g, p)
    lhs = _slope_norm(f.with_values(f.ys * g.ys), p)
    return _report("mult-support", lhs, c * nf * ng, (f, g, p, window.lo, window.hi), seed,
                   {"p": p, "c": c, "norm_f": nf, "norm_g": ng, "window": [window.lo, window.hi]})


def mult_support_pair(seed: int, i: int, n: int = 257) -> tuple:
    """Seeded (f, g, p, window): f from a corpus family, g a corpus member times a bump."""
    rng = np.random.default_rng([seed, 7, i])
    fam = ("smooth-poly", "trig", "abs-kink", "step")[i % 4]
    f = FunctionFamily(fam, seed, 0).member(2 * i).sample(n)
    gm = FunctionFamily(("smooth-poly", "trig")[i % 2], seed, 0).member(2 * i + 1)
    w = float(rng.uniform(0.1, 0.9))
    a = float(rng.uniform(0, 1 - w))
    window = Interval(a, a + w)
    xs = UNIT.linspace(n)
    bump = Bump(0, (X - Const(a + 0.5 * w)) * Const(1.0 / w))
    g = SampledFunction(xs, _sample_expr(gm.expr * bump, xs), UNIT)
    p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    return f, g, p, window


def calibrate_mult_support(seeds, trials: int = 50) -> float:
    worst = 0.0
    for s in seeds:
        for i in range(trials):
            f, g, p, w = mult_support_pair(int(s), i)
            worst = max(worst, check_mult_support(f, g, p, w, c=1.0).ratio)
    return worst


# --- Sobolev chain rule --------------------------------------------------------

def check_sobolev_chain(G: Expr, u: Expr, p: float, window: Interval = UNIT, n: int = 10_000,
                        tol: float = 1e-3, grid: str = "nodes", seed=None) -> tuple:
    """(residual report, Sobolev bound report) for (G o u)' = (G' o u) u'.

    The residual is the discrete L^p distance between cell slopes of G o u
    and (G' o u) u' at cell centres.  ``grid="midpoint"`` samples on cell
    centres of the window and drops cells where u changes sign.
    """
    g0 = float(evaluate(G, 0.0))
    if abs(g0) > 1e-12:
        raise ValidationError(f"G(0) must vanish, got {g0!r}")
    if grid == "nodes":
        xs = window.linspace(n)
    elif grid == "midpoint":
        xs = window.midpoints(n)
    else:
        raise ValidationError("grid must be 'nodes' or 'midpoint'")
    dx = float(xs[1] - xs[0])
    ux = _sample_expr(u, xs)
    Gu = _sample_expr(G, ux)
    slopes = np.diff(Gu) / np.diff(xs)
    mids = 0.5 * (xs[1:] + xs[:-1])
    Gp = differentiate(G)
    exact = _sample_expr(Gp, _sample_expr(u, mids)) * _sample_expr(differentiate(u), mids)
    keep = np.ones(slopes.size, dtype=bool)
    if grid == "midpoint":
        keep = ux[:-1] * ux[1:] > 0
    err = np.abs(slopes - exact)[keep]
    if p == np.inf:
        residual = float(err.max(initial=0.0))
    else:
        residual = float((np.sum(err ** p) * dx) ** (1.0 / p))
    inputs = (G, u, p, window.lo, window.hi, n, grid)
    base = {"p": p, "n": n, "grid": grid, "G": to_text(G), "u": to_text(u), "excluded_cells": int((~keep).sum())}
    rep_res = _report("sobolev-chain-residual", residual, tol, inputs, seed, dict(base, tol=tol), slack=0.0)

    iv = Interval(float(xs[0]), float(xs[-1]))
    Gs = SampledFunction(xs, Gu, iv)
    us = SampledFunction(xs, ux, iv)
    lo, hi = float(ux.min()), float(ux.max())
    probe = np.concatenate([np.linspace(lo, hi, 4097), ux])
    lip = float(np.max(np.abs(_sample_expr(Gp, probe))))
    sob_G = sobolev_fd_norm(Gs, p)
    sob_u = sobolev_fd_norm(us, p)
    lp_Gu, lp_u = lp_norm(Gu, dx, p), lp_norm(ux, dx, p)
    rhs = lp_Gu + lip * (sob_u - lp_u)
    rep_bound = _report("sobolev-chain-bound", sob_G, rhs, inputs, seed,
                        dict(base, lip=lip, sobolev_u=sob_u, finite=bool(math.isfinite(sob_G))))
    return rep_res, rep_bound


def sobolev_pair(seed: int, i: int, kink: bool) -> tuple:
    """Seeded (G, u) with G(0) = 0; the kink variant makes u cross 0."""
    rng = np.random.default_rng([seed, 13, i])
    a, b = rng.uniform(-1.5, 1.5, 2)
    fam = ("smooth-poly", "trig")[i % 2]
    um = FunctionFamily(fam, seed, 0).member(i).expr
    if kink:
        c = float(rng.uniform(0.2, 0.8))
        u = um - Const(float(evaluate(um, c)))
        if abs(float(evaluate(differentiate(u), c))) < 1e-3:
            u = u + Const(0.5) * (X - Const(c))
        G = Const(float(a)) * AbsPow(X, 1.5) + Const(float(b)) * X
    else:
        u = um
        G = Const(float(a)) * X + Const(float(b)) * X ** 2 + Const(0.3) * Unary("sin", X)
    return G, u


# --- Example 4 scan --------------------------------------------------------------

@dataclass(frozen=True)
class Example4Scan:
    alpha: float
    beta: float
    p: float
    ns: tuple
    values: tuple
    growth: tuple
    classification: str
    expected: str
    margin: float

    @property
    def agrees(self) -> bool:
        return self.classification == self.expected

    def to_dict(self) -> dict:
        d = asdict(self)
        d["agrees"] = self.agrees
        return d


def scan_example4(alpha: float, beta: float, p: float, levels: int = 7, kmin: int = 8) -> Example4Scan:
    """nu_p of the derivative of |t|^(a+1) rho(t) sin(|t|^-b) on midpoint grids
    of [-1/2, 1/2] with n = 2^kmin ... 2^(kmin+levels-1)."""
    if not 0 < beta < alpha:
        raise ValidationError(f"need 0 < beta < alpha, got alpha={alpha}, beta={beta}")
    if levels < 2:
        raise ValidationError("need at least two refinement levels")
    if not p >= 1:
        raise ValidationError("p must be >= 1")
    dpsi = differentiate(psi_ab(alpha, beta))
    iv = Interval(-0.5, 0.5)
    ns, vals = [], []
    for k in range(kmin, kmin + levels):
        n = 2 ** k
        xs = iv.midpoints(n)
        vals.append(pvar_dp(SampledFunction(xs, _sample_expr(dpsi, xs)), p, prune=True).value)
        ns.append(n)
    growth = tuple(vals[i + 1] / vals[i] for i in range(len(vals) - 1))
    if abs(vals[-1] - vals[-2]) < 0.05 * abs(vals[-2]):
        cls = CONVERGENT
    elif all(r >= 1.2 for r in growth):
        cls = DIVERGENT
    else:
        cls = INCONCLUSIVE
    margin = alpha / beta - 1 - 1 / p
    expected = CONVERGENT if margin > 0 else DIVERGENT
    return Example4Scan(alpha, beta, p, tuple(ns), tuple(vals), growth, cls, expected, margin)


# --- sweeps ------------------------------------------------------------------

FAMILY_MIX = ("smooth-poly", "trig", "abs-kink", "step")
SMOOTH = ("smooth-poly", "trig")


def _member(fam, seed, i):
    return FunctionFamily(fam, seed, 0).member(i)


def basic_pair(seed: int, i: int, n: int = 129) -> tuple:
    rng = np.random.default_rng([seed, 2, i])
    h = _member(FAMILY_MIX[i % 4], seed, 2 * i).sample(n)
    alpha0 = float(rng.uniform(-1, 1))
    t0 = float(rng.uniform(0, 1))
    g = cumulative_integral(h, alpha0, t0)
    J = image_interval(g)
    f = _member(FAMILY_MIX[(i // 4) % 4], seed, 2 * i + 1).sample(n, interval=J)
    p = float(rng.choice([1.0, 2.0, 3.0]))
    return f, h, p, alpha0, t0


def nfold_chain(seed: int, i: int, m: int) -> tuple:
    rng = np.random.default_rng([seed, 4, i])
    gs = [_member(SMOOTH[int(rng.integers(2))], seed, m * i + k).expr for k in range(m)]
    f = _member("trig", seed, 10_000 + i).expr
    p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    return gs, f, p


def chain_function(seed: int, i: int, n: int = 65) -> SampledFunction:
    fam = FAMILY_MIX[i % 4]
    mem = _member(fam, seed, i)
    if i % 5 == 4:
        rng = np.random.default_rng([seed, 5, i])
        xs = UNIT.linspace(n)
        return SampledFunction(xs, rng.normal(size=n), UNIT)
    return mem.sample(n)



def _trial_banach(seed, i, p=None, alpha=0.0, n=65, **_):
    rng = np.random.default_rng([seed, 1, i])
    mid = alpha > 0
    f = _member(FAMILY_MIX[i % 4], seed, 2 * i).sample(n, midpoint=mid)
    g = _member(FAMILY_MIX[(i // 4) % 4], seed, 2 * i + 1).sample(n, midpoint=mid)
    pp = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    return [check_banach_algebra(f, g, pp if p is None else p, alpha, seed=seed)]


def _trial_basic(seed, i, p=None, **_):
    f, h, pp, a0, t0 = basic_pair(seed, i)
    if p is not None:
        pp = p
    return list(check_basic_inequality(f, h, pp, a0, t0, seed=seed))


def _trial_bvp1(seed, i, p=None, n=257, **_):
    rng = np.random.default_rng([seed, 3, i])
    f = _member(("smooth-poly", "trig", "abs-kink")[i % 3], seed, 2 * i).expr
    g = _member(SMOOTH[(i // 3) % 2], seed, 2 * i + 1).expr
    pp = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    return [check_composition_bvp1(f, g, pp if p is None else p, UNIT, n, seed=seed)]


def _trial_nfold(seed, i, p=None, chain=None, n=257, with_f=True, **_):
    m = chain if chain is not None else (2, 3, 4)[i % 3]
    gs, f, pp = nfold_chain(seed, i, m)
    return list(check_nfold(gs, f if with_f else None, pp if p is None else p, UNIT, n, seed=seed))


def _trial_mult(seed, i, p=None, **_):
    f, g, pp, w = mult_support_pair(seed, i)
    return [check_mult_support(f, g, pp if p is None else p, w, seed=seed)]


def _trial_sobolev(seed, i, p=None, n=10_000, **_):
    kink = i % 2 == 1
    G, u = sobolev_pair(seed, i, kink)
    return list(check_sobolev_chain(G, u, 2.0 if p is None else p, UNIT, n, tol=1e-2 if kink else 1e-3,
                                    grid="midpoint" if kink else "nodes", seed=seed))


def _trial_chain_embed(seed, i, p=None, alpha=0.0, n=65, n_random=16, **_):
    pp = 2.0 if p is None else p
    f = chain_function(seed, i, n)
    rep = embedding_chain_report(f, pp, alpha, seed=seed, n_random=n_random, slack=SLACK)
    return [_report(f"chain-{name}", b["lhs"], b["rhs"], (f, pp, alpha, n_random), seed,
                    {"p": pp, "alpha": alpha, "n": n, "ratios": rep.ratios})
            for name, b in rep.bounds.items()]


TRIALS = {
    "banach": _trial_banach,
    "basic": _trial_basic,
    "bvp1": _trial_bvp1,
    "nfold": _trial_nfold,
    "mult-support": _trial_mult,
    "sobolev-chain": _trial_sobolev,
    "chain-embed": _trial_chain_embed,
}


def run_trial(theorem: str, seed: int, i: int, **params) -> list:
    if theorem not in TRIALS:
        raise ValidationError(f"no seeded sweep for {theorem!r}; choose from {', '.join(TRIALS)}")
    return TRIALS[theorem](seed, i, **params)


def run_sweep(theorem: str, seed: int, trials: int, **params) -> list:
    """[(trial index, [reports])] for trials 0 .. trials-1."""
    if trials < 0:
        raise ValidationError("trials must be >= 0")
    return [(i, run_trial(theorem, seed, i, **params)) for i in range(trials)]


def flat(sweep) -> list:
    return [r for _, reps in sweep for r in reps]
