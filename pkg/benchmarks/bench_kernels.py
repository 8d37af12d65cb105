"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--sizes 256 1024 4096] [--repeat 3]

Each row checks that both backends agree before reporting timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from varnorm import _kernels
from varnorm.findiff import stencil


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _kernels.numba_installed:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    cases = {
        "pvar_dp": lambda xs, ys, b: _kernels.pvar_dp_kernel(xs, ys, 2.0, 0.3, backend=b)[0][-1],
        "up_sweep": lambda xs, ys, b: _kernels.up_sweep_kernel(ys, 2.0, backend=b)[0],
        "fd_profile": lambda xs, ys, b: _kernels.fd_profile_kernel(
            ys, stencil(2), np.arange(1, ys.size // 2 - 1), 2.0, xs[1] - xs[0], backend=b)[-1],
    }
    # warm the JIT cache so compile time is not timed
    xs0 = np.linspace(0, 1, 16)
    for fn in cases.values():
        fn(xs0, np.sin(xs0), "numba")

    print(f"{'kernel':<12}{'n':>7}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, fn in cases.items():
        for n in args.sizes:
            xs = np.linspace(0, 1, n)
            ys = np.cumsum(rng.normal(size=n))
            t_nb, v_nb = best_of(lambda: fn(xs, ys, "numba"), args.repeat)
            t_np, v_np = best_of(lambda: fn(xs, ys, "numpy"), args.repeat)
            if not np.isclose(v_nb, v_np, rtol=1e-10, atol=0):
                raise SystemExit(f"{name} n={n}: backends disagree ({v_nb!r} vs {v_np!r})")
            print(f"{name:<12}{n:>7}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
