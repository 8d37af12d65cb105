"""Command-line interface: ``varnorm norm|verify|lp|corpus``.

Exit codes: 0 all pass, 1 inequality violated, 2 bad input, 3 numeric failure.
"""
from __future__ import annotations

import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .corpus import FAMILIES, FunctionFamily, listing, psi_ab, psi_log, u_alpha
from .errors import NumericError, ValidationError
from .expr import differentiate, evaluate, parse, to_text
from .findiff import BesovParams, besov_fd_seminorm, holder_zygmund_seminorm, sobolev_fd_norm
from .interp import interp_norm, variation_increment_vector
from .lpaley import build_partition, decompose, lp_besov_norm, periodic_lp, wave_packet
from .lpaley import scaling_check as lp_scaling_check
from .pvar import bvp_alpha_norm, pvar_dp, up_seminorm, vp_norm
from .sampled import Interval, SampledFunction, UniformGrid, read_csv, to_csv
from . import verify as V

SCHEMA = 1
SEED_ENV = "VARNORM_SEED"
NORM_KINDS = ("vp", "vp-alpha", "bvp1", "up", "besov-fd", "holder-zygmund", "sobolev-fd", "besov-lp", "interp")
THEOREMS = ("banach", "basic", "bvp1", "nfold", "norm-property", "mult-support", "sobolev-chain",
            "example4", "chain-embed")
FAMILY_ALIASES = {"psi": "corpus-psi", "psi-ab": "corpus-psi_ab", "u-alpha": "corpus-u_alpha"}

P_TYPE = click.FloatRange(min=1.0)


def _clean(v):
    """JSON-safe copy: numpy scalars to floats, non-finite floats to strings."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def _write(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    d = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".varnorm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"


@click.group()
@click.version_option(__version__, prog_name="varnorm")
def cli():
    """Variation, Besov and interpolation norms of sampled functions, and
    numerical checks of composition inequalities."""


# --- norm --------------------------------------------------------------------

def _source(fn, csv_path, interval, n, midpoint):
    if (fn is None) == (csv_path is None):
        raise ValidationError("give exactly one of --fn or --csv")
    if csv_path is not None:
        f = read_csv(csv_path)
        return f, None, {"source": "csv", "path": csv_path, "n": f.n, "lo": float(f.xs[0]), "hi": float(f.xs[-1])}
    e = parse(fn)
    iv = Interval(*interval)
    xs = iv.midpoints(n) if midpoint else iv.linspace(n)
    ys = np.broadcast_to(np.asarray(evaluate(e, xs), dtype=np.float64), xs.shape)
    f = SampledFunction(xs, ys, None if midpoint else iv)
    return f, e, {"source": "expr", "fn": to_text(e), "n": n, "lo": iv.lo, "hi": iv.hi, "midpoint": midpoint}


def _norm_value(kind, f, e, grid, p, q, s, alpha, M, K, x0, homogeneous):
    extra = {}
    if kind == "vp":
        nu = pvar_dp(f, p).value
        return f.sup_abs() + nu, {"variation": nu, "sup": f.sup_abs()}
    if kind == "vp-alpha":
        if not 0 < alpha < 1:
            raise ValidationError("vp-alpha needs --alpha in (0, 1)")
        return bvp_alpha_norm(f, p, alpha), {"variation": pvar_dp(f, p, alpha).value}
    if kind == "bvp1":
        if e is not None:
            lo = grid["lo"] if x0 is None else x0
            mids = Interval(grid["lo"], grid["hi"]).midpoints(grid["n"])
            d = np.broadcast_to(np.asarray(evaluate(differentiate(e), mids), dtype=np.float64), mids.shape)
            fx0 = float(evaluate(e, lo))
            fp = SampledFunction(mids, d)
        else:
            fp = SampledFunction(0.5 * (f.xs[1:] + f.xs[:-1]), np.diff(f.ys) / np.diff(f.xs))
            fx0 = float(f.ys[0]) if x0 is None else float(f(x0))
        return abs(fx0) + vp_norm(fp, p), {"f_at_x0": fx0}
    if kind == "up":
        return up_seminorm(f, p), extra
    if kind == "besov-fd":
        nv = besov_fd_seminorm(f, BesovParams(s, p, q, M))
        return nv.value, nv.meta
    if kind == "holder-zygmund":
        return holder_zygmund_seminorm(f, s), extra
    if kind == "sobolev-fd":
        return sobolev_fd_norm(f, p), extra
    if kind == "besov-lp":
        g = UniformGrid(f.n, f.xs[-1] - f.xs[0] + (f.xs[1] - f.xs[0]))
        pou = build_partition(K, g)
        nv = lp_besov_norm(f.ys, pou, s, p, q, homogeneous)
        return nv.value, nv.meta
    if kind == "interp":
        u = variation_increment_vector(f, alpha, np.arange(f.n))
        theta = s if s is not None else 1.0 / p
        return interp_norm(u, theta, p), {"theta": theta}
    raise ValidationError(f"unknown norm kind {kind!r}")


@cli.command()
@click.option("--kind", type=click.Choice(NORM_KINDS), required=True)
@click.option("--fn", help="expression in x")
@click.option("--csv", "csv_path", type=click.Path(exists=True, dir_okay=False), help="x,y samples")
@click.option("--interval", nargs=2, type=float, default=(0.0, 1.0), show_default=True)
@click.option("--n", type=click.IntRange(min=2), default=1024, show_default=True)
@click.option("--midpoint", is_flag=True, help="sample at cell centres instead of nodes")
@click.option("--p", type=P_TYPE, default=2.0, show_default=True)
@click.option("--q", type=P_TYPE, default=2.0, show_default=True)
@click.option("--s", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--alpha", type=click.FloatRange(min=0, max=1, max_open=True), default=0.0, show_default=True)
@click.option("--M", "M", type=click.IntRange(min=1), default=None)
@click.option("--K", "K", type=click.FloatRange(min=1, min_open=True), default=2.0, show_default=True)
@click.option("--x0", type=float, default=None, help="base point for bvp1 (default: left end)")
@click.option("--homogeneous/--nonhomogeneous", default=True, show_default=True)
@click.option("--seed", type=int, envvar=SEED_ENV, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def norm(kind, fn, csv_path, interval, n, midpoint, p, q, s, alpha, M, K, x0, homogeneous, seed, out):
    """Compute one norm of a function given by --fn or --csv."""
    needs_s = kind in ("besov-fd", "holder-zygmund", "besov-lp")
    if needs_s and s is None:
        raise ValidationError(f"--kind {kind} needs --s")
    t = time.perf_counter()
    f, e, grid = _source(fn, csv_path, interval, n, midpoint)
    value, meta = _norm_value(kind, f, e, grid, p, q, s, alpha, M, K, x0, homogeneous)
    if not math.isfinite(value):
        raise NumericError(f"{kind} evaluated to {value!r}")
    doc = {
        "schema": SCHEMA, "command": "norm", "kind": kind, "value": value,
        "params": {"p": p, "q": q, "s": s, "alpha": alpha, "M": M, "K": K, "x0": x0, "homogeneous": homogeneous},
        "grid": grid, "meta": meta, "seed": seed, "wall_time_s": time.perf_counter() - t,
    }
    _write(_dump(doc), out)
    return 0


# --- verify ------------------------------------------------------------------

def _trial_job(args):
    theorem, seed, i, params = args
    return i, [r.to_dict() for r in V.run_trial(theorem, seed, i, **params)]


@cli.command()
@click.option("--theorem", type=click.Choice(THEOREMS), required=True)
@click.option("--seed", type=int, envvar=SEED_ENV, default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--p", type=P_TYPE, default=None, help="fix p (default: drawn per trial)")
@click.option("--n", "chain", type=click.IntRange(min=2), default=None, help="chain length for nfold")
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--levels", type=click.IntRange(min=2), default=7, show_default=True)
@click.option("--f", "f_text", default="abs(x)", show_default=True, help="outer function for norm-property")
@click.option("--family", type=click.Choice(FAMILIES), default="smooth-poly", show_default=True)
@click.option("--norm", "norm_sel", type=click.Choice(["vp", "bvp1"]), default="vp", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def verify(theorem, seed, trials, p, chain, alpha, beta, levels, f_text, family, norm_sel, jobs, out):
    """Run a seeded sweep of one inequality check."""
    t = time.perf_counter()
    params = {"p": p, "seed": seed, "trials": trials}
    if theorem == "example4":
        if alpha is None or beta is None:
            raise ValidationError("example4 needs --alpha and --beta")
        pp = 2.0 if p is None else p
        scan = V.scan_example4(alpha, beta, pp, levels)
        doc = {"schema": SCHEMA, "command": "verify", "theorem": theorem, "seed": seed,
               "params": {"alpha": alpha, "beta": beta, "p": pp, "levels": levels},
               "scan": scan.to_dict(),
               "summary": {"classification": scan.classification, "expected": scan.expected,
                           "all_hold": scan.agrees},
               "wall_time_s": time.perf_counter() - t}
        _write(_dump(doc), out)
        return 0 if scan.agrees else 1
    if theorem == "norm-property":
        pp = 2.0 if p is None else p
        est = V.check_norm_property(parse(f_text), FunctionFamily(family, seed, trials), norm_sel, pp)
        ok = math.isfinite(est.c)
        doc = {"schema": SCHEMA, "command": "verify", "theorem": theorem, "seed": seed,
               "params": {"f": f_text, "family": family, "norm": norm_sel, "p": pp, "trials": trials, "n": est.n},
               "estimate": {"c": est.c, "argmax_digest": est.digest, "ratios": list(est.ratios)},
               "summary": {"trials": trials, "all_hold": ok}, "wall_time_s": time.perf_counter() - t}
        _write(_dump(doc), out)
        return 0 if ok else 1

    kw = {}
    if p is not None:
        kw["p"] = p
    if chain is not None:
        if theorem != "nfold":
            raise ValidationError("--n applies to nfold only")
        kw["chain"] = chain
    if alpha is not None:
        if theorem not in ("banach", "chain-embed"):
            raise ValidationError("--alpha applies to banach, chain-embed and example4")
        if not 0 <= alpha < 1:
            raise ValidationError("--alpha must lie in [0, 1)")
        kw["alpha"] = alpha
    params.update(kw)
    jobs_in = [(theorem, seed, i, kw) for i in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_trial_job, jobs_in))
    else:
        results = [_trial_job(a) for a in jobs_in]
    entries = []
    for i, reps in results:
        entries.append({"trial": i, "holds": all(r["holds"] for r in reps), "reports": reps})
    entries.sort(key=lambda e: e["reports"][0]["digest"] if e["reports"] else "")
    all_reports = [r for e in entries for r in e["reports"]]
    worst = max(all_reports, key=lambda r: r["ratio"], default=None)
    summary = {
        "trials": trials,
        "reports": len(all_reports),
        "passed": sum(e["holds"] for e in entries),
        "failed": sum(not e["holds"] for e in entries),
        "worst_ratio": worst["ratio"] if worst else None,
        "worst_digest": worst["digest"] if worst else None,
        "all_hold": all(e["holds"] for e in entries),
    }
    doc = {"schema": SCHEMA, "command": "verify", "theorem": theorem, "seed": seed, "params": params,
           "trials": entries, "summary": summary, "wall_time_s": time.perf_counter() - t}
    _write(_dump(doc), out)
    return 0 if summary["all_hold"] else 1


# --- lp ----------------------------------------------------------------------

@cli.command()
@click.option("--fn", help="expression in x, sampled on [0, L)")
@click.option("--csv", "csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", type=click.IntRange(min=2), default=4096, show_default=True)
@click.option("--length", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True)
@click.option("--K", "K", type=click.FloatRange(min=1, min_open=True), default=2.0, show_default=True)
@click.option("--s", type=float, default=0.5, show_default=True)
@click.option("--p", type=P_TYPE, default=2.0, show_default=True)
@click.option("--q", type=P_TYPE, default=2.0, show_default=True)
@click.option("--scaling-check", is_flag=True, help="dilation ratio instead of the block table")
@click.option("--m", type=click.IntRange(min=0), default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def lp(fn, csv_path, n, length, K, s, p, q, scaling_check, m, fmt, out):
    """Dyadic block table of a periodic sample (or a dilation check)."""
    if fn is not None and csv_path is not None:
        raise ValidationError("give at most one of --fn or --csv")
    if csv_path is not None:
        f = read_csv(csv_path)
        grid = UniformGrid(f.n, length)
        ys = f.ys
        source = {"csv": csv_path}
    else:
        grid = UniformGrid(n, length)
        if fn is None:
            if not scaling_check:
                raise ValidationError("give --fn or --csv")
            ys = wave_packet(grid, grid.n / 64, 0.02)
            source = {"fn": f"wave_packet(k0={grid.n / 64}, width=0.02)"}
        else:
            e = parse(fn)
            ys = np.broadcast_to(np.asarray(evaluate(e, grid.xs), dtype=np.float64), (grid.n,))
            source = {"fn": to_text(e)}
    pou = build_partition(K, grid)
    meta = {"schema": SCHEMA, "n": grid.n, "length": length, "K": K, "s": s, "p": p, "q": q, **source}
    if scaling_check:
        r = lp_scaling_check(ys, pou, s, p, q, m)
        row = {"m": r.m, "ratio": r.ratio, "exponent": r.exponent, "lp_ratio": r.lp_ratio, "passed": r.passed}
        if fmt == "json":
            _write(_dump({**meta, "command": "lp", "scaling": row}), out)
        else:
            buf = io.StringIO()
            buf.write("".join(f"# {k}={v}\n" for k, v in meta.items()))
            buf.write("m,ratio,exponent,lp_ratio,passed\n")
            buf.write(f"{r.m},{r.ratio!r},{r.exponent!r},{r.lp_ratio!r},{int(r.passed)}\n")
            _write(buf.getvalue(), out)
        return 0 if r.passed else 1
    dec = decompose(ys, pou, homogeneous=False)
    dx = grid.spacing
    total = float(np.sum(ys ** 2) * dx)
    rows = [("low", float(np.sum(dec.low ** 2) * dx), periodic_lp(dec.low, grid, p))]
    for j, b in sorted(dec.blocks.items()):
        rows.append((int(j), float(np.sum(b ** 2) * dx), 2.0 ** (s * j) * periodic_lp(b, grid, p)))
    dev = float(np.max(np.abs(pou.partition_sum(True)[pou.freqs > 0] - 1.0)))
    meta.update(partition_sum_deviation=dev, reconstruction_residual=dec.residual, total_energy=total)
    if fmt == "json":
        table = [{"level": lv, "energy": en, "energy_fraction": en / total if total else 0.0, "weighted_lp": w}
                 for lv, en, w in rows]
        _write(_dump({**meta, "command": "lp", "levels": table}), out)
        return 0
    buf = io.StringIO()
    buf.write("".join(f"# {k}={v}\n" for k, v in meta.items()))
    buf.write("# energy = sum |block|^2 dx (squared L2 norm), weighted_lp = 2^(s j) ||block||_p\n")
    buf.write("level,energy,energy_fraction,weighted_lp\n")
    for lv, en, w in rows:
        frac = en / total if total else 0.0
        buf.write(f"{lv},{en!r},{frac!r},{w!r}\n")
    _write(buf.getvalue(), out)
    return 0



# --- corpus --------------------------------------------------------------------

@cli.group()
def corpus():
    """List or sample the built-in function families."""


@corpus.command("list")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def corpus_list(out):
    _write(_dump({"schema": SCHEMA, "command": "corpus list", "families": listing()}), out)
    return 0


@corpus.command("emit")
@click.option("--family", required=True, help="family id or alias (psi, psi-ab, u-alpha)")
@click.option("--seed", type=int, envvar=SEED_ENV, default=0, show_default=True)
@click.option("--index", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--n", type=click.IntRange(min=2), default=1024, show_default=True)
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def corpus_emit(family, seed, index, n, alpha, beta, out):
    """Write one corpus member as x,y CSV with its parameters in # lines."""
    fam = FAMILY_ALIASES.get(family, family)
    if fam not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}")
    meta = {"schema": SCHEMA, "family": fam, "seed": seed, "index": index, "n": n}
    expr = None
    if fam == "corpus-psi_ab" and (alpha is not None or beta is not None):
        if alpha is None or beta is None:
            raise ValidationError("psi-ab needs both --alpha and --beta")
        expr, iv = psi_ab(alpha, beta), Interval(-0.5, 0.5)
        meta.update(alpha=alpha, beta=beta)
    elif fam == "corpus-u_alpha" and alpha is not None:
        expr, iv = u_alpha(alpha), Interval(-2.0, 2.0)
        meta.update(alpha=alpha)
    elif fam == "corpus-psi":
        expr, iv = psi_log(), Interval(-0.5, 0.5)
    midpoint = fam in ("corpus-psi", "corpus-psi_ab")
    if expr is None:
        mem = FunctionFamily(fam, seed, 0).member(index)
        f = mem.sample(n, midpoint=midpoint)
        meta.update(mem.params)
        meta["expr"] = mem.text()
        meta["window"] = [mem.native.lo, mem.native.hi]
    else:
        xs = iv.midpoints(n) if midpoint else iv.linspace(n)
        f = SampledFunction(xs, np.broadcast_to(np.asarray(evaluate(expr, xs), dtype=np.float64), xs.shape))
        meta["expr"] = to_text(expr)
        meta["window"] = [iv.lo, iv.hi]
    meta["grid"] = "midpoint" if midpoint else "nodes"
    comments = [f"{k}={json.dumps(_clean(v))}" for k, v in meta.items()]
    _write(to_csv(f, header=True, comments=comments), out)
    return 0


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="varnorm", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ValidationError as e:
        click.echo(f"error: {e}", err=True)
        return 2
    except (NumericError, ArithmeticError) as e:
        click.echo(f"numeric error: {e}", err=True)
        return 3
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
