"""Finite differences on uniform grids and the seminorms built from them.

Steps h are always positive multiples r*dx of the grid spacing.  Discrete
L^p norms use the left rectangle rule over the truncated domain; p = inf is
the max over its nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ValidationError
from .sampled import SampledFunction

H_NODES_DEFAULT = 64


@dataclass(frozen=True)
class DiffSpec:
    m: int
    h: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValidationError(f"difference order must be an integer >= 1, got {self.m}")
        if self.h == 0 or not math.isfinite(self.h):
            raise ValidationError("difference step must be finite and nonzero")


@dataclass(frozen=True)
class BesovParams:
    """Smoothness s, integrability p, summability q.

    The seminorm uses differences of order M + 1 (default M = floor(s) + 1)
    and needs 0 < s < M + 1.
    """

    s: float
    p: float = 2.0
    q: float = 2.0
    M: int | None = None

    def __post_init__(self):
        if self.M is None:
            object.__setattr__(self, "M", int(math.floor(self.s)) + 1)
        if self.M < 1:
            raise ValidationError("M must be >= 1")
        if not 0 < self.s < self.M + 1:
            raise ValidationError(f"need 0 < s < M+1 = {self.M + 1}, got s={self.s}")
        for name in ("p", "q"):
            v = getattr(self, name)
            if not v >= 1:
                raise ValidationError(f"{name} must lie in [1, inf], got {v}")

    @property
    def order(self) -> int:
        return self.M + 1


@dataclass(frozen=True)
class NormValue:
    kind: str
    value: float
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "params": dict(self.params), "meta": dict(self.meta)}


def stencil(m: int) -> np.ndarray:
    """Coefficients C(m, l)(-1)^(m-l), l = 0..m."""
    return np.array([math.comb(m, l) * (-1) ** (m - l) for l in range(m + 1)], dtype=np.float64)


def _stride(f: SampledFunction, h: float) -> int:
    dx = f.spacing()
    r = abs(h) / dx
    ri = int(round(r))
    if ri < 1 or abs(r - ri) > 1e-9 * max(1.0, r):
        raise ValidationError(f"step h={h!r} is not a positive multiple of the grid spacing {dx!r}; resample first")
    return ri


def _dx(f: SampledFunction) -> float:
    return f.spacing()


def finite_difference(f: SampledFunction, spec: DiffSpec) -> SampledFunction:
    """Delta_h^m f on [lo, hi - m h] (h > 0) or [lo + m|h|, hi] (h < 0)."""
    r = _stride(f, spec.h)
    m = spec.m
    N = f.n - m * r
    if N < 2:
        raise ValidationError(f"stencil m*h = {m * abs(spec.h)!r} does not fit in the interval")
    c = stencil(m)
    ys = f.ys
    if spec.h > 0:
        vals = sum(c[l] * ys[l * r: l * r + N] for l in range(m + 1))
        xs = f.xs[:N]
    else:
        off = m * r
        vals = sum(c[l] * ys[off - l * r: off - l * r + N] for l in range(m + 1))
        xs = f.xs[off:]
    return SampledFunction(xs, vals, meta={"order": m, "h": spec.h})


def lp_norm(ys, dx: float, p: float) -> float:
    """Left rectangle rule over len(ys) - 1 cells; max for p = inf."""
    ys = np.abs(np.asarray(ys))
    if p == np.inf:
        return float(ys.max())
    return float((np.sum(ys[:-1] ** p) * dx) ** (1.0 / p))


def diff_norms(f: SampledFunction, m: int, rs, p: float, backend=None) -> np.ndarray:
    """||Delta_{r dx}^m f||_p for each stride r."""
    rs = np.asarray(rs, dtype=np.int64)
    if rs.size and (rs.min() < 1 or f.n - m * rs.max() < 2):
        raise ValidationError("stride out of range for this grid")
    return _kernels.fd_profile_kernel(f.ys, stencil(m), rs, p, _dx(f), backend=backend)


def modulus(f: SampledFunction, m: int, t: float, p: float) -> float:
    """sup over grid steps 0 < h <= t of ||Delta_h^m f||_p."""
    dx = _dx(f)
    if t < dx * (1 - 1e-9):
        raise ValidationError(f"t={t!r} is below the grid spacing {dx!r}")
    rmax = min(int(math.floor(t / dx * (1 + 1e-12))), (f.n - 2) // m)
    if rmax < 1:
        raise ValidationError("no admissible step fits in the interval")
    return float(diff_norms(f, m, np.arange(1, rmax + 1), p).max())


def _log_strides(rmax: int, nodes: int) -> np.ndarray:
    """At least ``nodes`` distinct integer strides, log-spaced in [1, rmax]."""
    if rmax <= nodes:
        return np.arange(1, rmax + 1)
    k = nodes
    while True:
        rs = np.unique(np.round(np.geomspace(1, rmax, k)).astype(np.int64))
        if rs.size >= nodes:
            return rs
        k = int(k * 1.5) + 1


def besov_fd_seminorm(f: SampledFunction, params: BesovParams, h_nodes: int = H_NODES_DEFAULT,
                      h_max: float = 1.0) -> NormValue:
    """(int (h^-s ||Delta_h^{M+1} f||_p)^q dh/h)^(1/q) over h in [dx, h_max].

    Trapezoid rule in log h; q = inf takes the max over the h nodes.
    """
    dx = _dx(f)
    order = params.order
    rmax = min(int(math.floor(h_max / dx * (1 + 1e-12))), (f.n - 2) // order)
    if rmax < 1:
        raise ValidationError("grid too coarse for the requested difference order")
    rs = _log_strides(rmax, h_nodes)
    hs = rs * dx
    norms = diff_norms(f, order, rs, params.p)
    g = hs ** (-params.s) * norms
    if params.q == np.inf:
        val = float(g.max())
    elif rs.size == 1:
        val = float(g[0])
    else:
        val = float(np.trapezoid(g ** params.q, np.log(hs)) ** (1.0 / params.q))
    return NormValue(
        "besov-fd", val,
        params={"s": params.s, "p": params.p, "q": params.q, "M": params.M, "order": order},
        meta={"n": f.n, "h_nodes": int(rs.size), "h_min": float(hs[0]), "h_max": float(hs[-1])},
    )


def holder_zygmund_seminorm(f: SampledFunction, s: float) -> float:
    """sup|f| + sup_{0<h<=1} h^-s sup_x |Delta_h^k f(x)|, k = floor(s) + 1.

    Steps up to k h = |I| are allowed (a single stencil position).
    """
    if not s > 0:
        raise ValidationError("s must be positive")
    k = int(math.floor(s)) + 1
    dx = _dx(f)
    rmax = min(int(math.floor(1.0 / dx * (1 + 1e-12))), (f.n - 1) // k)
    diff_term = 0.0
    if rmax >= 1:
        rs = np.arange(1, rmax + 1)
        sups = _kernels.fd_profile_kernel(f.ys, stencil(k), rs, np.inf, dx)
        diff_term = float(np.max(sups / (rs * dx) ** s))
    return f.sup_abs() + diff_term


def sobolev_fd_norm(f: SampledFunction, p: float) -> float:
    """||f||_p + sup_h ||Delta_h f||_p / h over every grid step that fits."""
    if not p >= 1:
        raise ValidationError("p must lie in [1, inf]")
    dx = _dx(f)
    rs = np.arange(1, f.n - 1)
    if rs.size == 0:
        rs = np.arange(1, 2)
        quot = np.abs(np.diff(f.ys)) / dx
    else:
        quot = diff_norms(f, 1, rs, p) / (rs * dx)
    return lp_norm(f.ys, dx, p) + float(np.max(quot))
