"""Dyadic Littlewood-Paley blocks on a periodic grid, via the DFT.

Frequencies are integer wavenumbers (cycles per window).  The level-j
window is phi(2^-j |k|), where phi = theta / sum_p theta(2^-p .) and theta
is a smooth bump equal to 1 on [1, 2].  theta is supported in
[max(1/K, 0.8), min(2K, 2.5)], so windows two levels apart never overlap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bump import smooth_step
from .errors import ValidationError
from .findiff import NormValue
from .sampled import SampledFunction, UniformGrid

RAMP_LO = 0.8
RAMP_HI = 2.5


def theta(xi, K: float = 2.0) -> np.ndarray:
    a = max(1.0 / K, RAMP_LO)
    b = min(2.0 * K, RAMP_HI)
    xi = np.abs(np.asarray(xi, dtype=np.float64))
    up = smooth_step((xi - a) / (1.0 - a))
    down = smooth_step((b - xi) / (b - 2.0))
    return np.where(xi <= 1.0, up, np.where(xi >= 2.0, down, 1.0))


def _support(K):
    return max(1.0 / K, RAMP_LO), min(2.0 * K, RAMP_HI)


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    K: float
    grid: UniformGrid
    freqs: np.ndarray        # integer wavenumbers in FFT order
    levels: tuple            # resolvable j, ascending
    phi: dict                # j -> window on freqs
    psi: np.ndarray          # low-frequency window, 1 - sum_{j>=1} phi_j

    @property
    def support(self):
        return _support(self.K)

    def window(self, j: int) -> np.ndarray:
        if j not in self.phi:
            raise ValidationError(f"level {j} not resolvable; levels are {self.levels[0]}..{self.levels[-1]}")
        return self.phi[j]

    def partition_sum(self, homogeneous: bool = True) -> np.ndarray:
        total = sum(self.phi.values())
        if not homogeneous:
            total = self.psi + sum(v for j, v in self.phi.items() if j >= 1)
        return total


def build_partition(K: float, grid: UniformGrid) -> PartitionOfUnity:
    if not K > 1:
        raise ValidationError(f"K must exceed 1, got {K}")
    n = grid.n
    if n < 64:
        raise ValidationError(f"grid needs n >= 64 to host two dyadic levels, got {n}")
    a, b = _support(K)
    k = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    kmax = n // 2
    jmin = int(np.ceil(np.log2(1.0 / b) - 1e-12))
    jmax = int(np.floor(np.log2(kmax / a) + 1e-12))
    levels = tuple(range(jmin, jmax + 1))
    # s(xi) = sum over all p with theta(2^-p xi) possibly nonzero
    nz = k > 0
    s = np.zeros(n)
    for p in range(jmin - 2, jmax + 3):
        s[nz] += theta(k[nz] / 2.0 ** p, K)
    phi = {}
    for j in levels:
        w = np.zeros(n)
        w[nz] = theta(k[nz] / 2.0 ** j, K) / s[nz]
        phi[j] = w
    psi = 1.0 - sum(w for j, w in phi.items() if j >= 1)
    return PartitionOfUnity(float(K), grid, k, levels, phi, psi)


def _values(f, grid: UniformGrid) -> np.ndarray:
    if isinstance(f, SampledFunction):
        ys = f.ys
    else:
        ys = np.asarray(f, dtype=np.float64)
    if ys.shape != (grid.n,):
        raise ValidationError(f"expected {grid.n} samples on the periodic grid, got {ys.shape}")
    return ys


def _as_sampled(vals, grid):
    return SampledFunction(grid.xs, vals)


def apply_window(f, window, grid) -> np.ndarray:
    return np.fft.ifft(window * np.fft.fft(_values(f, grid))).real


def dyadic_block(f, pou: PartitionOfUnity, j: int) -> SampledFunction:
    """Delta_j f as samples on the periodic grid."""
    return _as_sampled(apply_window(f, pou.window(j), pou.grid), pou.grid)


def low_part(f, pou: PartitionOfUnity) -> SampledFunction:
    return _as_sampled(apply_window(f, pou.psi, pou.grid), pou.grid)


@dataclass(frozen=True)
class BlockDecomposition:
    low: np.ndarray
    blocks: dict
    residual: float       # relative L2 reconstruction error


def decompose(f, pou: PartitionOfUnity, homogeneous: bool = False) -> BlockDecomposition:
    """Low part plus blocks.  Homogeneous mode keeps every level and puts only
    the mean in the low part."""
    ys = _values(f, pou.grid)
    F = np.fft.fft(ys)
    if homogeneous:
        levels = pou.levels
        low_w = (pou.freqs == 0).astype(float)
    else:
        levels = [j for j in pou.levels if j >= 1]
        low_w = pou.psi
    low = np.fft.ifft(low_w * F).real
    blocks = {j: np.fft.ifft(pou.phi[j] * F).real for j in levels}
    rec = low + sum(blocks.values())
    denom = np.linalg.norm(ys)
    res = float(np.linalg.norm(rec - ys) / denom) if denom > 0 else float(np.linalg.norm(rec))
    return BlockDecomposition(low, blocks, res)


def periodic_lp(vals, grid: UniformGrid, p: float) -> float:
    v = np.abs(vals)
    if p == np.inf:
        return float(v.max())
    return float((np.sum(v ** p) * grid.spacing) ** (1.0 / p))


def lp_besov_norm(f, pou: PartitionOfUnity, s: float, p: float = 2.0, q: float = 2.0,
                  homogeneous: bool = True) -> NormValue:
    """l^q over levels of 2^(s j) ||Delta_j f||_p.

    Non-homogeneous mode adds ||psi * f||_p and sums levels j >= 1.
    """
    if not (p >= 1 and q >= 1):
        raise ValidationError("p and q must lie in [1, inf]")
    grid = pou.grid
    F = np.fft.fft(_values(f, grid))
    levels = pou.levels if homogeneous else [j for j in pou.levels if j >= 1]
    terms = np.array([2.0 ** (s * j) * periodic_lp(np.fft.ifft(pou.phi[j] * F).real, grid, p) for j in levels])
    if q == np.inf:
        val = float(terms.max()) if terms.size else 0.0
    else:
        val = float(np.sum(terms ** q) ** (1.0 / q))
    low = 0.0
    if not homogeneous:
        low = periodic_lp(np.fft.ifft(pou.psi * F).real, grid, p)
        val += low
    return NormValue("besov-lp", val, params={"s": s, "p": p, "q": q, "homogeneous": homogeneous, "K": pou.K},
                     meta={"n": grid.n, "levels": [int(j) for j in levels], "level_terms": terms.tolist(),
                           "low_term": low})


def dilate(vals, m: int, center: int | None = None) -> np.ndarray:
    """g[i] = f[c + 2^m (i - c)], zero where the source index leaves the grid."""
    vals = np.asarray(vals, dtype=np.float64)
    n = vals.size
    c = n // 2 if center is None else center
    src = c + (2 ** m) * (np.arange(n) - c)
    out = np.zeros(n)
    ok = (src >= 0) & (src < n)
    out[ok] = vals[src[ok]]
    return out


@dataclass(frozen=True)
class ScalingReport:
    m: int
    ratio: float              # ||f(2^m .)|| / (2^{m(s-1/p)} ||f||)
    exponent: float           # log2(||f(2^m .)|| / ||f||) / m
    lp_ratio: float           # ||f(2^m .)||_p / (2^{-m/p} ||f||_p)
    norm_f: float
    norm_dilated: float
    passed: bool


def scaling_check(f, pou: PartitionOfUnity, s: float, p: float = 2.0, q: float = 2.0, m: int = 1,
                  tol: float = 0.05, guard: float = 1e-6) -> ScalingReport:
    """Compare the homogeneous norm of f(2^m .) with 2^{m(s-1/p)} ||f||.

    The dilation is about the window centre, so f must be localised in the
    central 2^-m of the window (it is zero-extended) and band-limited below
    n / 2^(m+1).
    """
    grid = pou.grid
    ys = _values(f, grid)
    n = grid.n
    if m < 0:
        raise ValidationError("m must be >= 0")
    if m > 0:
        F = np.abs(np.fft.fft(ys)) ** 2
        high = F[pou.freqs >= n / 2 ** (m + 1)].sum()
        if high > guard * F.sum():
            raise ValidationError(f"aliasing guard: spectrum not band-limited below n/2^{m + 1}")
        c = n // 2
        far = np.abs(np.arange(n) - c) >= n / 2 ** (m + 1)
        if np.abs(ys[far]).max(initial=0.0) > guard * np.abs(ys).max():
            raise ValidationError("dilation guard: f is not localised in the central part of the window")
    g = dilate(ys, m) if m else ys
    nf = lp_besov_norm(ys, pou, s, p, q).value
    ng = lp_besov_norm(g, pou, s, p, q).value
    ratio = ng / (2.0 ** (m * (s - 1.0 / p)) * nf)
    exponent = np.log2(ng / nf) / m if m else s - 1.0 / p
    lp_ratio = periodic_lp(g, grid, p) / (2.0 ** (-m / p) * periodic_lp(ys, grid, p))
    return ScalingReport(m, float(ratio), float(exponent), float(lp_ratio), nf, ng, abs(ratio - 1) <= tol)


def wave_packet(grid: UniformGrid, k0: float, width: float, center: float | None = None) -> np.ndarray:
    """Gaussian-windowed cosine at wavenumber k0; width is the envelope std in window units."""
    L = grid.length
    c = L * (grid.n // 2) / grid.n if center is None else center
    x = grid.xs
    return np.exp(-0.5 * ((x - c) / (width * L)) ** 2) * np.cos(2 * np.pi * k0 * (x - c) / L)


@dataclass(frozen=True)
class Paraproduct:
    high_low: np.ndarray      # sum_j Delta_j f * S_{j-2} g
    low_high: np.ndarray      # sum_j S_{j-2} f * Delta_j g
    diagonal: np.ndarray      # sum_{|j-l|<=1} Delta_j f * Delta_l g
    target: np.ndarray        # Delta_k (f g)
    residual: float           # relative L2 error of the three-term sum


def paraproduct_split(f, g, pou: PartitionOfUnity, k: int) -> Paraproduct:
    """Split Delta_k(f g) into high-low, low-high and diagonal interactions.

    The mean of each factor is carried as the level below the lowest one,
    so the three parts cover every pair of levels exactly once and sum to
    Delta_k(f g) up to rounding.
    """
    levels = pou.levels
    if k - 2 < levels[0] or k + 4 > levels[-1]:
        raise ValidationError(f"level {k} needs levels {k - 2}..{k + 4}; resolvable are {levels[0]}..{levels[-1]}")
    grid = pou.grid
    fv, gv = _values(f, grid), _values(g, grid)
    dc = (pou.freqs == 0).astype(float)

    def pieces(v):
        V = np.fft.fft(v)
        out = {levels[0] - 1: np.fft.ifft(dc * V).real}
        for j in levels:
            out[j] = np.fft.ifft(pou.phi[j] * V).real
        return out

    A, B = pieces(fv), pieces(gv)
    keys = sorted(A)
    cumA = np.cumsum([A[j] for j in keys], axis=0)
    cumB = np.cumsum([B[j] for j in keys], axis=0)
    pos = {j: i for i, j in enumerate(keys)}
    zero = np.zeros(grid.n)

    def S(cum, j):
        return cum[pos[j]] if j in pos else (zero if j < keys[0] else cum[-1])

    hl = sum(A[j] * S(cumB, j - 2) for j in keys)
    lh = sum(S(cumA, l - 2) * B[l] for l in keys)
    dg = sum(A[j] * B[l] for j in keys for l in keys if abs(j - l) <= 1)
    win = pou.phi[k]
    Dk = lambda v: np.fft.ifft(win * np.fft.fft(v)).real  # noqa: E731
    p1, p2, p3 = Dk(hl), Dk(lh), Dk(dg)
    target = Dk(fv * gv)
    denom = np.linalg.norm(target)
    err = np.linalg.norm(p1 + p2 + p3 - target)
    res = float(err / denom) if denom > 0 else float(err)
    return Paraproduct(p1, p2, p3, target, res)
