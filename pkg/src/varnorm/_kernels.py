"""Hot loops: the O(n^2) partition DP, the U_p window sweep and the
finite-difference norm profile.

Every kernel exists twice, a numba loop version and a vectorised numpy
version.  ``_accel.USE_NUMBA`` picks which one the public wrappers call.
Both follow the same tie rule, so they return identical partitions up to
rounding.
"""
import numpy as np

from ._accel import USE_NUMBA, numba_installed

TIE_RTOL = 1e-13

if numba_installed:
    from numba import njit

    @njit(cache=True)
    def _pvar_dp_nb(xs, ys, p, alpha, tol):
        n = ys.size
        V = np.zeros(n)
        parent = np.full(n, -1, dtype=np.int64)
        cand = np.empty(n)
        ap = alpha * p
        for j in range(1, n):
            best = -1.0
            for i in range(j):
                d = abs(ys[j] - ys[i])
                if p == 1.0:
                    w = d
                elif p == 2.0:
                    w = d * d
                else:
                    w = d ** p
                if ap != 0.0:
                    w = w / (xs[j] - xs[i]) ** ap
                c = V[i] + w
                cand[i] = c
                if c > best:
                    best = c
            thr = best - tol * abs(best)
            for i in range(j):
                if cand[i] >= thr:
                    V[j] = cand[i]
                    parent[j] = i
                    break
        return V, parent

    @njit(cache=True)
    def _up_sweep_nb(ys, p):
        n = ys.size
        M = np.zeros(n)
        total = 0.0
        best = 0.0
        best_k = 1
        for k in range(1, n):
            for i in range(n - 1):
                m = M[i]
                if i + k < n:
                    d = abs(ys[i + k] - ys[i])
                    if d > m:
                        m = d
                if i - k >= 0:
                    d = abs(ys[i - k] - ys[i])
                    if d > m:
                        m = d
                if m > M[i]:
                    total += m ** p - M[i] ** p
                    M[i] = m
            val = total / k
            if val > best:
                best = val
                best_k = k
        # recompute the winning total from scratch to shed accumulated drift
        M[:] = 0.0
        for i in range(n - 1):
            for h in range(1, best_k + 1):
                if i + h < n:
                    d = abs(ys[i + h] - ys[i])
                    if d > M[i]:
                        M[i] = d
                if i - h >= 0:
                    d = abs(ys[i - h] - ys[i])
                    if d > M[i]:
                        M[i] = d
        s = 0.0
        for i in range(n - 1):
            s += M[i] ** p
        return s / best_k, best_k

    @njit(cache=True)
    def _fd_profile_nb(ys, coefs, rs, p, dx):
        n = ys.size
        m = coefs.size - 1
        out = np.zeros(rs.size)
        for a in range(rs.size):
            r = rs[a]
            N = n - m * r
            acc = 0.0
            for i in range(N):
                v = 0.0
                for l in range(m + 1):
                    v += coefs[l] * ys[i + l * r]
                v = abs(v)
                if p == np.inf:
                    if v > acc:
                        acc = v
                elif i < N - 1:
                    if p == 2.0:
                        acc += v * v
                    elif p == 1.0:
                        acc += v
                    else:
                        acc += v ** p
            if p == np.inf:
                out[a] = acc
            else:
                out[a] = (acc * dx) ** (1.0 / p)
        return out


def _pvar_dp_np(xs, ys, p, alpha, tol):
    n = ys.size
    V = np.zeros(n)
    parent = np.full(n, -1, dtype=np.int64)
    ap = alpha * p
    for j in range(1, n):
        w = np.abs(ys[j] - ys[:j]) ** p
        if ap != 0.0:
            w = w / (xs[j] - xs[:j]) ** ap
        c = V[:j] + w
        best = c.max()
        i = int(np.argmax(c >= best - tol * abs(best)))
        V[j] = c[i]
        parent[j] = i
    return V, parent


def _up_sweep_np(ys, p):
    n = ys.size
    M = np.zeros(n)
    best, best_k = 0.0, 1
    for k in range(1, n):
        d = np.abs(ys[k:] - ys[:-k])
        np.maximum(M[: n - k], d, out=M[: n - k])
        np.maximum(M[k:], d, out=M[k:])
        val = np.sum(M[: n - 1] ** p) / k
        if val > best:
            best, best_k = val, k
    return best, best_k


def _fd_profile_np(ys, coefs, rs, p, dx):
    n = ys.size
    m = coefs.size - 1
    out = np.zeros(rs.size)
    for a, r in enumerate(rs):
        N = n - m * r
        v = np.zeros(N)
        for l in range(m + 1):
            v += coefs[l] * ys[l * r: l * r + N]
        v = np.abs(v)
        if p == np.inf:
            out[a] = v.max()
        else:
            out[a] = (np.sum(v[: N - 1] ** p) * dx) ** (1.0 / p)
    return out


def pvar_dp_kernel(xs, ys, p, alpha, tol=TIE_RTOL, backend=None):
    """Return (V, parent) of the max-sum partition recurrence."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if _pick(backend) == "numba":
        return _pvar_dp_nb(xs, ys, float(p), float(alpha), float(tol))
    return _pvar_dp_np(xs, ys, float(p), float(alpha), float(tol))


def up_sweep_kernel(ys, p, backend=None):
    """max_k k^-1 sum_i max_{|h|<=k} |y[i+h]-y[i]|^p over the n-1 left cells."""
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if _pick(backend) == "numba":
        val, k = _up_sweep_nb(ys, float(p))
        return float(val), int(k)
    return _up_sweep_np(ys, float(p))


def fd_profile_kernel(ys, coefs, rs, p, dx, backend=None):
    """Discrete L^p norm of the stencil ``coefs`` applied at each stride in ``rs``."""
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    coefs = np.ascontiguousarray(coefs, dtype=np.float64)
    rs = np.ascontiguousarray(rs, dtype=np.int64)
    if _pick(backend) == "numba":
        return _fd_profile_nb(ys, coefs, rs, float(p), float(dx))
    return _fd_profile_np(ys, coefs, rs, float(p), float(dx))


def _pick(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend == "numba" and not numba_installed:
        raise RuntimeError("numba backend requested but numba is not installed")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend
