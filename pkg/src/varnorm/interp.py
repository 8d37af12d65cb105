"""K-functional of the couple (l^inf, l^1), real interpolation norms, and the
embedding-chain comparator built on increment vectors."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, ValidationError
from .findiff import BesovParams, besov_fd_seminorm
from .pvar import bvp_alpha_norm, local_extrema, pvar_dp, up_seminorm, vp_norm, weighted_sup
from .sampled import SampledFunction

DECAY = 1e-6
MAX_WIDENINGS = 3
POINTS_PER_DECADE = 48
RANDOM_MARK_SETS = 64


def kfunctional_sup_l1(a, t):
    """min over a = a0 + a1 of ||a0||_inf + t ||a1||_1.

    The optimum clips |a| at a level lambda taken from {0} U {|a_i|}.
    ``t`` may be an array.
    """
    b = np.sort(np.abs(np.asarray(a, dtype=np.float64)).ravel())[::-1]
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0):
        raise ValidationError("t must be positive")
    if b.size == 0:
        return np.zeros_like(t) if t.ndim else 0.0
    lam = np.concatenate([b, [0.0]])                 # candidate clip levels, descending
    cnt = np.arange(lam.size)                        # entries strictly above lam[m] (ties give zero excess)
    excess = np.concatenate([[0.0], np.cumsum(b)]) - cnt * lam
    vals = lam[None, :] + np.multiply.outer(np.atleast_1d(t), excess)
    out = vals.min(axis=1)
    return out.reshape(t.shape) if t.ndim else float(out[0])


def kfunctional_l1_sup(a, s):
    """K-functional of the swapped couple (l^1, l^inf): min ||a0||_1 + s ||a1||_inf."""
    b = np.abs(np.asarray(a, dtype=np.float64)).ravel()
    s = np.asarray(s, dtype=np.float64)
    lam = np.concatenate([[0.0], np.unique(b)])
    vals = np.maximum(b[None, :] - lam[:, None], 0).sum(axis=1)[None, :] + np.multiply.outer(np.atleast_1d(s), lam)
    out = vals.min(axis=1)
    return out.reshape(s.shape) if s.ndim else float(out[0])


def jfunctional_sup_l1(a, t) -> float:
    a = np.asarray(a, dtype=np.float64)
    return float(max(np.abs(a).max(initial=0.0), t * np.abs(a).sum()))


@dataclass(frozen=True)
class KProfile:
    t: np.ndarray
    K: np.ndarray
    couple: str = "linf-l1"

    def is_monotone(self, rtol=1e-12) -> bool:
        return bool(np.all(np.diff(self.K) >= -rtol * np.abs(self.K[1:])))

    def is_concave(self, rtol=1e-12) -> bool:
        # midpoint concavity on the (log-spaced) grid: chords lie below K
        t, K = self.t, self.K
        lam = (t[1:-1] - t[:-2]) / (t[2:] - t[:-2])
        chord = (1 - lam) * K[:-2] + lam * K[2:]
        return bool(np.all(K[1:-1] >= chord - rtol * np.abs(K[1:-1]) - 1e-300))


def kprofile(a, t_grid) -> KProfile:
    t = np.asarray(t_grid, dtype=np.float64)
    return KProfile(t, kfunctional_sup_l1(a, t))


def _tgrid(lo, hi, breaks):
    k = max(int(np.ceil(np.log10(hi / lo) * POINTS_PER_DECADE)), 8)
    t = np.geomspace(lo, hi, k)
    b = breaks[(breaks > lo) & (breaks < hi)]
    return np.unique(np.concatenate([t, b]))


def interp_norm(a, theta: float, p: float, return_meta: bool = False):
    """(int_0^inf (t^-theta K(t, a))^p dt/t)^(1/p), trapezoid in log t.

    The t-window starts at [1e-2/N, 1e2] and is widened by 10^3 on each side
    until the integrand at both ends is below 1e-6 of its peak.
    """
    if not 0 < theta < 1:
        raise ValidationError("theta must lie in (0, 1)")
    if not p >= 1:
        raise ValidationError("p must lie in [1, inf]")
    a = np.asarray(a, dtype=np.float64).ravel()
    if a.size == 0 or not np.any(a):
        return (0.0, {"widenings": 0}) if return_meta else 0.0
    N = a.size
    breaks = 1.0 / np.arange(1, N + 1)
    lo, hi = 1e-2 / N, 1e2
    for widen in range(MAX_WIDENINGS + 1):
        t = _tgrid(lo, hi, breaks)
        F = t ** (-theta) * kfunctional_sup_l1(a, t)
        peak = F.max()
        if p == np.inf:
            integrand = F
        else:
            integrand = F ** p
            peak = peak ** p
        if integrand[0] <= DECAY * peak and integrand[-1] <= DECAY * peak:
            if p == np.inf:
                val = float(peak)
            else:
                val = float(np.trapezoid(integrand, np.log(t)) ** (1.0 / p))
            meta = {"widenings": widen, "t_min": lo, "t_max": hi, "nodes": int(t.size)}
            return (val, meta) if return_meta else val
        lo, hi = lo * 1e-3, hi * 1e3
    raise NumericError(f"interpolation integrand not decayed after {MAX_WIDENINGS} widenings")


def variation_increment_vector(f: SampledFunction, alpha: float, marks) -> np.ndarray:
    """((f(t_i) - f(t_{i-1})) / |t_i - t_{i-1}|^alpha) over the marked nodes."""
    marks = np.asarray(marks)
    if marks.ndim != 1 or marks.size < 2:
        raise ValidationError("need at least two marks")
    if marks.dtype.kind not in "iu" or marks.min() < 0 or marks.max() >= f.n or np.any(np.diff(marks) <= 0):
        raise ValidationError("marks must be strictly increasing node indices")
    dy = np.diff(f.ys[marks])
    if alpha:
        dy = dy / np.diff(f.xs[marks]) ** alpha
    return dy


def mark_family(f: SampledFunction, seed: int = 0, n_random: int = RANDOM_MARK_SETS) -> list:
    """All nodes, local extrema, and seeded random subsets (endpoints kept)."""
    n = f.n
    fam = [np.arange(n), local_extrema(f.ys)]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        keep = rng.random(n) < rng.uniform(0.1, 0.9)
        keep[0] = keep[-1] = True
        fam.append(np.flatnonzero(keep))
    return fam


@dataclass
class ChainReport:
    p: float
    alpha: float
    besov_q1: float
    interp: float
    bvp_alpha: float
    up: float
    besov_qinf: float
    ratios: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def values(self) -> list:
        return [self.besov_q1, self.interp, self.bvp_alpha, self.up, self.besov_qinf]

    @property
    def exact_bounds_hold(self) -> bool:
        return all(b["holds"] for b in self.bounds.values())


def bv_endpoint_values(f: SampledFunction, alpha: float) -> tuple:
    """(BV_inf^alpha value, BV_1^alpha value) used to bound increment vectors.

    For alpha = 0 the first is sup|f|.  For alpha > 0 it is the largest
    alpha-Holder quotient over node pairs plus the weighted sup.
    """
    ws = weighted_sup(f, alpha)
    if alpha == 0:
        v_inf = f.sup_abs()
    else:
        dy = np.abs(f.ys[None, :] - f.ys[:, None])
        dt = np.abs(f.xs[None, :] - f.xs[:, None])
        iu = np.triu_indices(f.n, 1)
        v_inf = float(np.max(dy[iu] / dt[iu] ** alpha)) + ws
    v_one = pvar_dp(f, 1.0, alpha).value + ws
    return v_inf, v_one


def embedding_chain_report(f: SampledFunction, p: float, alpha: float = 0.0, seed: int = 0,
                           n_random: int = RANDOM_MARK_SETS, slack: float = 1e-9) -> ChainReport:
    """Five norms along the embedding chain, pairwise ratios, and the three
    discrete bounds that hold exactly."""
    if not 1 < p < np.inf:
        raise ValidationError("p must lie in (1, inf)")
    s = 1.0 / p
    b1 = besov_fd_seminorm(f, BesovParams(s, p, 1.0)).value
    binf = besov_fd_seminorm(f, BesovParams(s, p, np.inf)).value
    bva = bvp_alpha_norm(f, p, alpha)
    up = up_seminorm(f, p)
    vp = vp_norm(f, p)

    worst_interp, worst_inf, worst_one = 0.0, 0.0, 0.0
    for marks in mark_family(f, seed, n_random):
        u = variation_increment_vector(f, alpha, marks)
        worst_inf = max(worst_inf, float(np.abs(u).max()))
        worst_one = max(worst_one, float(np.abs(u).sum()))
        worst_interp = max(worst_interp, interp_norm(u, s, p))
    v_inf, v_one = bv_endpoint_values(f, alpha)

    vals = {"besov_q1": b1, "interp": worst_interp, "bvp_alpha": bva, "up": up, "besov_qinf": binf}
    names = list(vals)
    ratios = {}
    for i in range(len(names) - 1):
        num, den = vals[names[i + 1]], vals[names[i]]
        ratios[f"{names[i + 1]}/{names[i]}"] = num / den if den else (0.0 if num == 0 else np.inf)

    def bound(lhs, rhs):
        return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs + slack)}

    bounds = {
        "increments_linf": bound(worst_inf, 2.0 * v_inf),
        "increments_l1": bound(worst_one, v_one),
        "up_vs_vp": bound(up, 2.0 ** (1.0 / p) * vp),
    }
    return ChainReport(p, alpha, b1, worst_interp, bva, up, binf, ratios, bounds,
                       meta={"n": f.n, "mark_sets": 2 + n_random, "seed": seed, "vp": vp})
