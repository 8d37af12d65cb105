"""Functions on compact intervals represented by samples.

Everything here is immutable: arrays are copied on construction and
flagged read-only.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvalDomainError, ValidationError

UNIFORM_RTOL = 1e-9


def _frozen(a, dtype=np.float64):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValidationError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ValidationError(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval", tol: float = 0.0) -> bool:
        return other.lo >= self.lo - tol and other.hi <= self.hi + tol

    def linspace(self, n: int) -> np.ndarray:
        xs = np.linspace(self.lo, self.hi, n)
        xs[0], xs[-1] = self.lo, self.hi
        return xs

    def midpoints(self, n: int) -> np.ndarray:
        """``n`` cell centres; never touches the endpoints."""
        return self.lo + (np.arange(n) + 0.5) * (self.length / n)


class SampledFunction:
    """Values ``ys`` at strictly increasing nodes ``xs``.

    The function between nodes is the piecewise-linear interpolant.  The
    interval defaults to ``[xs[0], xs[-1]]`` and must match it when given.
    """

    __slots__ = ("xs", "ys", "interval", "meta")

    def __init__(self, xs, ys, interval: Interval | None = None, meta: dict | None = None):
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        if xs.ndim != 1 or ys.shape != xs.shape:
            raise ValidationError(f"xs and ys must be 1-d of equal length, got {xs.shape} and {ys.shape}")
        if xs.size < 2:
            raise ValidationError("a sampled function needs at least 2 nodes")
        if not np.all(np.isfinite(xs)):
            raise ValidationError("grid contains non-finite nodes")
        steps = np.diff(xs)
        if np.any(steps <= 0):
            k = int(np.argmax(steps <= 0))
            raise ValidationError(f"grid not strictly increasing at index {k + 1}: {float(xs[k])!r} -> {float(xs[k + 1])!r}")
        bad = ~np.isfinite(ys)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise ValidationError(f"non-finite value {float(ys[k])!r} at x={float(xs[k])!r}")
        if interval is None:
            interval = Interval(xs[0], xs[-1])
        elif xs[0] != interval.lo or xs[-1] != interval.hi:
            raise ValidationError(
                f"grid endpoints [{float(xs[0])!r}, {float(xs[-1])!r}] do not match interval [{interval.lo!r}, {interval.hi!r}]"
            )
        object.__setattr__(self, "xs", _frozen(xs))
        object.__setattr__(self, "ys", _frozen(ys))
        object.__setattr__(self, "interval", interval)
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("SampledFunction is immutable")

    def __repr__(self):
        return f"SampledFunction(n={self.n}, interval=[{self.interval.lo:g}, {self.interval.hi:g}])"

    def __len__(self):
        return self.xs.size

    @property
    def n(self) -> int:
        return self.xs.size

    def __call__(self, x):
        return np.interp(x, self.xs, self.ys)

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.ys)))

    def with_values(self, ys, meta: dict | None = None) -> "SampledFunction":
        return SampledFunction(self.xs, ys, self.interval, meta if meta is not None else self.meta)

    def is_uniform(self) -> bool:
        steps = np.diff(self.xs)
        return bool(np.max(np.abs(steps - steps.mean())) <= UNIFORM_RTOL * steps.mean())

    def spacing(self) -> float:
        """Grid step; raises unless the grid is uniform."""
        if not self.is_uniform():
            raise ValidationError("operation requires a uniform grid")
        return self.interval.length / (self.n - 1)

    def restrict(self, lo: float, hi: float) -> "SampledFunction":
        """The interpolant restricted to [lo, hi], with interpolated end nodes."""
        lo = max(lo, self.xs[0])
        hi = min(hi, self.xs[-1])
        if not lo < hi:
            raise ValidationError(f"restriction window [{lo}, {hi}] is empty")
        inner = (self.xs > lo) & (self.xs < hi)
        xs = np.concatenate([[lo], self.xs[inner], [hi]])
        return SampledFunction(xs, self(xs))


class StepFunction:
    """A step function on ``[breakpoints[0], breakpoints[-1]]``.

    ``plateaus[k]`` is the value on the open cell between breakpoints k and
    k+1; ``values[k]`` is the value taken at breakpoint k itself.
    """

    __slots__ = ("breakpoints", "values", "plateaus")

    def __init__(self, breakpoints, values, plateaus):
        b = np.asarray(breakpoints, dtype=np.float64)
        v = np.asarray(values, dtype=np.float64)
        pl = np.asarray(plateaus, dtype=np.float64)
        if b.ndim != 1 or b.size < 2:
            raise ValidationError("need at least two breakpoints (the interval ends)")
        if np.any(np.diff(b) <= 0):
            raise ValidationError("breakpoints must be strictly increasing")
        if v.shape != b.shape or pl.shape != (b.size - 1,):
            raise ValidationError("need one value per breakpoint and one plateau per cell")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(pl)) and np.all(np.isfinite(b))):
            raise ValidationError("step function values must be finite")
        object.__setattr__(self, "breakpoints", _frozen(b))
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "plateaus", _frozen(pl))

    def __setattr__(self, name, value):
        raise AttributeError("StepFunction is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, StepFunction)
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.plateaus, other.plateaus)
        )

    @property
    def interval(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1])

    @property
    def left_limits(self) -> np.ndarray:
        """f(b-) at each breakpoint; NaN at the left end."""
        return np.concatenate([[np.nan], self.plateaus])

    @property
    def right_limits(self) -> np.ndarray:
        return np.concatenate([self.plateaus, [np.nan]])

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        k = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, self.plateaus.size - 1)
        out = self.plateaus[k].astype(np.float64)
        j = np.searchsorted(self.breakpoints, x).clip(0, self.values.size - 1)
        return np.where(self.breakpoints[j] == x, self.values[j], out)

    def sup_abs(self) -> float:
        return float(max(np.abs(self.values).max(), np.abs(self.plateaus).max()))

    def to_sampled(self) -> SampledFunction:
        """Interleave breakpoint values with plateau values at cell centres.

        The variation of a step function only depends on the order of the
        values it takes, so this sequence has the same p-variation.
        """
        b = self.breakpoints
        xs = np.empty(2 * b.size - 1)
        ys = np.empty_like(xs)
        xs[0::2], ys[0::2] = b, self.values
        xs[1::2], ys[1::2] = 0.5 * (b[:-1] + b[1:]), self.plateaus
        return SampledFunction(xs, ys)


@dataclass(frozen=True)
class UniformGrid:
    """n equispaced points on [0, length), n a power of two."""

    n: int
    length: float = 1.0

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise ValidationError(f"grid size must be a power of two, got {self.n}")
        if not self.length > 0:
            raise ValidationError("grid length must be positive")

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def xs(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def sample(self, expr) -> np.ndarray:
        from .expr import evaluate
        return np.asarray(evaluate(expr, self.xs), dtype=np.float64)


# --- operations -----------------------------------------------------------

def sample(f, interval: Interval, n: int) -> SampledFunction:
    """Evaluate an expression at n equispaced nodes including both ends."""
    from .expr import evaluate, parse

    if n < 2:
        raise ValidationError("need n >= 2 samples")
    if isinstance(f, str):
        f = parse(f)
    xs = interval.linspace(n)
    ys = np.broadcast_to(np.asarray(evaluate(f, xs), dtype=np.float64), xs.shape)
    bad = ~np.isfinite(ys)
    if np.any(bad):
        raise EvalDomainError("expression is not finite", x=float(xs[np.argmax(bad)]))
    return SampledFunction(xs, ys, interval)


def sample_midpoints(f, interval: Interval, n: int) -> SampledFunction:
    """Evaluate at the n cell centres of ``interval`` (endpoints avoided)."""
    from .expr import evaluate, parse

    if isinstance(f, str):
        f = parse(f)
    xs = interval.midpoints(n)
    ys = np.broadcast_to(np.asarray(evaluate(f, xs), dtype=np.float64), xs.shape)
    bad = ~np.isfinite(ys)
    if np.any(bad):
        raise EvalDomainError("expression is not finite", x=float(xs[np.argmax(bad)]))
    return SampledFunction(xs, ys)


def cumulative_integral(h: SampledFunction, alpha: float, t0: float) -> SampledFunction:
    """g(t) = alpha + integral from t0 to t of h, trapezoid rule on h's grid."""
    iv = h.interval
    if not iv.lo <= t0 <= iv.hi:
        raise ValidationError(f"t0={t0!r} outside [{iv.lo!r}, {iv.hi!r}]")
    cells = 0.5 * (h.ys[1:] + h.ys[:-1]) * np.diff(h.xs)
    G = np.concatenate([[0.0], np.cumsum(cells)])
    # G at t0: exact integral of the linear interpolant of h up to t0
    k = min(int(np.searchsorted(h.xs, t0, side="right")) - 1, h.n - 2)
    dt = t0 - h.xs[k]
    slope = (h.ys[k + 1] - h.ys[k]) / (h.xs[k + 1] - h.xs[k])
    G0 = G[k] + h.ys[k] * dt + 0.5 * slope * dt * dt
    return h.with_values(alpha + (G - G0), meta={"built_by": "cumulative_integral", "alpha": alpha, "t0": t0})


def image_interval(g: SampledFunction) -> Interval:
    """[min g, max g]; a constant g gets a padded interval flagged degenerate."""
    lo, hi = float(g.ys.min()), float(g.ys.max())
    if lo == hi:
        pad = max(abs(lo), 1.0) * np.finfo(float).eps * 4
        return Interval(lo - pad, hi + pad, degenerate=True)
    return Interval(lo, hi)


def interpolate(f: SampledFunction, x) -> np.ndarray:
    """Piecewise-linear interpolation anchored at the nearest node.

    Anchoring at the nearest node makes the identity interpolant exact on
    grids whose nonzero nodes are at least one cell away from 0.
    """
    x = np.asarray(x, dtype=np.float64)
    xs, ys = f.xs, f.ys
    k = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, xs.size - 2)
    slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
    near_right = (x - xs[k]) > (xs[k + 1] - x)
    a = np.where(near_right, k + 1, k)
    return ys[a] + (x - xs[a]) * slope


def compose_samples(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """(f o g) at g's nodes, f interpolated piecewise-linearly."""
    J = f.interval
    tol = 1e-12 * J.length
    below = J.lo - g.ys
    above = g.ys - J.hi
    excess = np.maximum(below, above)
    if np.any(excess > tol):
        k = int(np.argmax(excess))
        raise ValidationError(
            f"image of g escapes [{J.lo!r}, {J.hi!r}]: worst offender g({float(g.xs[k])!r}) = {float(g.ys[k])!r}"
            f" (index {k}, outside by {excess[k]:.3g})"
        )
    y = np.clip(g.ys, J.lo, J.hi)
    return g.with_values(interpolate(f, y), meta={})


def normalize(f: StepFunction) -> StepFunction:
    """Midpoint of the one-sided limits at interior breakpoints, the interior
    one-sided limit at the two ends."""
    v = np.empty_like(f.values)
    pl = f.plateaus
    v[0], v[-1] = pl[0], pl[-1]
    v[1:-1] = 0.5 * (pl[:-1] + pl[1:])
    return StepFunction(f.breakpoints, v, pl)


# --- CSV ------------------------------------------------------------------

def _parse_rows(text: str):
    rows = []
    header_seen = False
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise ValidationError(f"line {lineno}: expected 2 columns x,y, got {len(row)}")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            if not rows and not header_seen:
                header_seen = True
                continue
            raise ValidationError(f"line {lineno}: non-numeric entry {row!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(f"line {lineno}: non-finite entry {row!r}")
        if rows and x <= rows[-1][1]:
            raise ValidationError(f"line {lineno}: x={x!r} not greater than previous x={rows[-1][1]!r}")
        rows.append((lineno, x, y))
    if len(rows) < 2:
        raise ValidationError("CSV needs at least 2 data rows")
    return rows


def read_csv(path) -> SampledFunction:
    with open(path, newline="") as fh:
        text = fh.read()
    return parse_csv(text)


def parse_csv(text: str) -> SampledFunction:
    rows = _parse_rows(text)
    return SampledFunction([r[1] for r in rows], [r[2] for r in rows])


def to_csv(f: SampledFunction, header: bool = True, comments=()) -> str:
    """x,y rows; ``comments`` become leading ``# `` lines that readers skip."""
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    if header:
        out.write("x,y\n")
    for x, y in zip(f.xs, f.ys):
        out.write(f"{float(x)!r},{float(y)!r}\n")
    return out.getvalue()
