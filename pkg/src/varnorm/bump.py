"""A C-infinity cutoff equal to 1 on [-1/e, 1/e] and supported in [-1/2, 1/2],
together with all of its derivatives.

Built from e(u) = exp(-1/u) through the smooth step T(u) = e(u)/(e(u)+e(1-u)),
with rho(t) = T((1/2 - |t|)/(1/2 - 1/e)).
"""
from functools import lru_cache
from math import comb

import numpy as np

INNER = 1.0 / np.e
OUTER = 0.5
_W = OUTER - INNER
_UCUT = 1.0 / 700.0  # exp(-700) underflows every derivative term


@lru_cache(maxsize=None)
def _poly(k: int) -> np.ndarray:
    """Coefficients (ascending in w = 1/u) of P_k with e^(k)(u) = P_k(1/u) e(u)."""
    if k == 0:
        return np.array([1.0])
    c = _poly(k - 1)
    dc = np.array([i * c[i] for i in range(1, c.size)]) if c.size > 1 else np.zeros(1)
    diff = np.zeros(max(c.size, dc.size))
    diff[: c.size] += c
    diff[: dc.size] -= dc
    return np.concatenate([[0.0, 0.0], diff])  # multiply by w^2


def _edx(u: np.ndarray, k: int) -> np.ndarray:
    """k-th derivative of exp(-1/u) (zero for u <= 0)."""
    out = np.zeros_like(u)
    m = u > _UCUT
    if np.any(m):
        w = 1.0 / u[m]
        out[m] = np.polynomial.polynomial.polyval(w, _poly(k)) * np.exp(-w)
    return out


def smooth_step(u, k: int = 0) -> np.ndarray:
    """k-th derivative of T(u): 0 for u <= 0, 1 for u >= 1, smooth between."""
    u = np.asarray(u, dtype=np.float64)
    E = [_edx(u, j) for j in range(k + 1)]
    F = [(-1) ** j * _edx(1.0 - u, j) for j in range(k + 1)]
    D = [E[j] + F[j] for j in range(k + 1)]
    T = []
    inside = D[0] > 0
    for m in range(k + 1):
        acc = E[m].copy()
        for j in range(m):
            acc -= comb(m, j) * T[j] * D[m - j]
        Tm = np.zeros_like(u)
        Tm[inside] = acc[inside] / D[0][inside]
        T.append(Tm)
    out = T[k]
    if k == 0:
        out = np.where(u >= 1.0, 1.0, np.where(u <= 0.0, 0.0, out))
    else:
        out = np.where((u >= 1.0) | (u <= 0.0), 0.0, out)
    return out


def rho_derivative(t, k: int = 0):
    t = np.asarray(t, dtype=np.float64)
    u = (OUTER - np.abs(t)) / _W
    val = smooth_step(u, k)
    if k:
        # du/dt = -sign(t)/W; on the plateau around t = 0 every derivative vanishes
        val = val * (-np.sign(t) / _W) ** k
    return val
