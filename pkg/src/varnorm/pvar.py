"""p-variation over grid partitions and the norms built from it."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ValidationError
from .sampled import SampledFunction, StepFunction

BRUTEFORCE_MAX_N = 20


@dataclass(frozen=True)
class VariationResult:
    value: float
    partition: tuple
    p: float
    alpha: float
    meta: dict = field(default_factory=dict, compare=False)


def _check(f, p, alpha):
    if isinstance(f, StepFunction):
        f = f.to_sampled()
    if not isinstance(f, SampledFunction):
        raise ValidationError(f"expected a SampledFunction, got {type(f).__name__}")
    if f.n < 2:
        raise ValidationError("need at least 2 samples")
    if not p >= 1:
        raise ValidationError(f"p must be >= 1, got {p}")
    if not 0 <= alpha < 1:
        raise ValidationError(f"alpha must lie in [0, 1), got {alpha}")
    return f


def partition_objective(xs, ys, idx, p, alpha=0.0) -> float:
    """sum_k |f(t_k)-f(t_{k-1})|^p / |t_k-t_{k-1}|^(alpha p), returned to the 1/p."""
    idx = np.asarray(idx)
    dy = np.abs(np.diff(np.asarray(ys)[idx]))
    dt = np.diff(np.asarray(xs)[idx])
    if idx.size == 2:
        # single increment: skip the power round trip
        return float(dy[0] / dt[0] ** alpha) if alpha else float(dy[0])
    w = dy ** p
    if alpha:
        w = w / dt ** (alpha * p)
    return float(np.sum(w) ** (1.0 / p))


def local_extrema(ys) -> np.ndarray:
    """Indices that survive pruning of flat runs and monotone interior points.

    For alpha = 0 some optimal partition only uses these indices.
    """
    ys = np.asarray(ys)
    n = ys.size
    keep = np.concatenate([[True], np.diff(ys) != 0])
    keep[-1] = True
    idx = np.flatnonzero(keep)
    if idx.size > 2 and ys[idx[-1]] == ys[idx[-2]]:
        idx = np.delete(idx, -2)
    while True:
        d = np.diff(ys[idx])
        mono = np.concatenate([[False], d[:-1] * d[1:] > 0, [False]])
        if not mono.any():
            break
        idx = idx[~mono]
    if idx[0] != 0 or idx[-1] != n - 1:  # pragma: no cover
        raise AssertionError("pruning must keep the endpoints")
    return idx


def pvar_dp(f: SampledFunction, p: float, alpha: float = 0.0, prune: bool = False, backend=None) -> VariationResult:
    """Exact maximum over all grid partitions by the O(n^2) recurrence.

    Near-ties (relative 1e-13) go to the earliest predecessor and the
    earliest end node, so a monotone f yields the two-point partition.
    ``prune=True`` first drops non-extremal points, which is only valid for
    ``alpha == 0``.
    """
    f = _check(f, p, alpha)
    xs, ys = f.xs, f.ys
    sub = np.arange(f.n)
    if prune:
        if alpha != 0:
            raise ValidationError("extremum pruning is only valid for alpha = 0")
        sub = local_extrema(ys)
    V, parent = _kernels.pvar_dp_kernel(xs[sub], ys[sub], p, alpha, backend=backend)
    best = V[1:].max()
    end = 1 + int(np.argmax(V[1:] >= best - _kernels.TIE_RTOL * abs(best)))
    path = [end]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    idx = sub[np.array(path[::-1])]
    value = partition_objective(xs, ys, idx, p, alpha)
    return VariationResult(value, tuple(int(i) for i in idx), float(p), float(alpha),
                           meta={"n": f.n, "nodes_used": int(sub.size), "pruned": prune})


def pvar_bruteforce(f: SampledFunction, p: float, alpha: float = 0.0) -> VariationResult:
    """Exhaustive search over every subset of >= 2 nodes (n <= 20)."""
    f = _check(f, p, alpha)
    n = f.n
    if n > BRUTEFORCE_MAX_N:
        raise ValidationError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    xs, ys = f.xs, f.ys
    dy = np.abs(ys[None, :] - ys[:, None])
    dt = np.abs(xs[None, :] - xs[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        W = dy ** p / np.where(dt > 0, dt, 1.0) ** (alpha * p)
    masks = np.arange(1 << n, dtype=np.int64)
    count = np.zeros(masks.size, dtype=np.int64)
    total = np.zeros(masks.size)
    last = np.full(masks.size, -1, dtype=np.int64)
    for j in range(n):
        sel = (masks >> j) & 1 == 1
        step = sel & (last >= 0)
        total[step] += W[last[step], j]
        last[sel] = j
        count += sel
    ok = count >= 2
    cand = np.flatnonzero(ok)
    best = total[cand].max()
    near = cand[total[cand] >= best - 1e-13 * abs(best)]
    # canonical choice among near-ties: fewest points, then lexicographic
    def key(m):
        bits = [j for j in range(n) if (m >> j) & 1]
        return (len(bits), bits)
    m = min(near.tolist(), key=key)
    idx = np.array(key(m)[1])
    return VariationResult(partition_objective(xs, ys, idx, p, alpha), tuple(int(i) for i in idx),
                           float(p), float(alpha), meta={"n": n, "subsets": int(ok.sum())})


def vp_norm(f: SampledFunction, p: float, alpha: float = 0.0) -> float:
    """sup |f| + (order-alpha) p-variation."""
    f = _check(f, p, alpha)
    return f.sup_abs() + pvar_dp(f, p, alpha).value


def bvp1_norm(fprime: SampledFunction, f_at_x0: float, p: float) -> float:
    """|f(x0)| + sup |f'| + nu_p(f') for f given through its derivative."""
    return abs(float(f_at_x0)) + vp_norm(fprime, p)


def weighted_sup(f: SampledFunction, alpha: float) -> float:
    """sup over nodes x != 0 of |f(x)| / |x|^alpha (all nodes when alpha = 0)."""
    if alpha == 0:
        return f.sup_abs()
    mask = f.xs != 0
    if not mask.any():
        raise ValidationError("every node was excluded from the weighted sup")
    return float(np.max(np.abs(f.ys[mask]) / np.abs(f.xs[mask]) ** alpha))


def bvp_alpha_norm(f: SampledFunction, p: float, alpha: float,
                   fprime: SampledFunction | None = None, f_at_x0: float | None = None) -> float:
    """nu_p^alpha(f) + sup_{x != 0} |f(x)|/|x|^alpha.

    ``alpha == 1`` is handled through the derivative: pass ``fprime`` and
    ``f_at_x0`` and the result is |f(x0)| + the order-0 norm of f'.
    """
    if alpha == 1:
        if fprime is None or f_at_x0 is None:
            raise ValidationError("alpha = 1 needs fprime and f_at_x0")
        return bvp1_norm(fprime, f_at_x0, p)
    f = _check(f, p, alpha)
    return pvar_dp(f, p, alpha).value + weighted_sup(f, alpha)


def up_seminorm(f: SampledFunction, p: float, backend=None) -> float:
    """sup_t t^-1 int sup_{|h|<=t} |f(x+h)-f(x)|^p dx, to the 1/p.

    t and h run over grid multiples; the integral is the left rectangle rule
    over the n-1 cells, so dx cancels against t = k dx.
    """
    if not 1 <= p < np.inf:
        raise ValidationError(f"p must lie in [1, inf), got {p}")
    f.spacing()
    val, _ = _kernels.up_sweep_kernel(f.ys, p, backend=backend)
    return float(val ** (1.0 / p))


def variation_profile(f: SampledFunction, ps) -> dict:
    return {float(p): pvar_dp(f, p).value for p in ps}
