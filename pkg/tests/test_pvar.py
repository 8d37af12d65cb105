import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from varnorm.errors import ValidationError
from varnorm.expr import parse
from varnorm.pvar import (
    bvp1_norm, bvp_alpha_norm, local_extrema, partition_objective, pvar_bruteforce, pvar_dp,
    up_seminorm, vp_norm, weighted_sup,
)
from varnorm.sampled import Interval, SampledFunction, StepFunction, sample, sample_midpoints

P_VALUES = [1.0, 1.5, 2.0, 3.0]


def seq(ys, lo=0.0, hi=1.0):
    ys = np.asarray(ys, dtype=float)
    return SampledFunction(np.linspace(lo, hi, ys.size), ys)


ys_lists = st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=12)


def test_four_point_example():
    f = seq([0, 1, 0, 1])
    r2 = pvar_dp(f, 2)
    assert abs(r2.value - math.sqrt(3)) <= 1e-12
    assert r2.partition == (0, 1, 2, 3)
    assert pvar_dp(f, 1).value == 3.0


@pytest.mark.parametrize("p", P_VALUES + [7.0])
def test_monotone_two_point_partition(p):
    f = sample(parse("x^3 + x"), Interval(-1, 2), 200)
    r = pvar_dp(f, p)
    assert r.value == abs(f.ys[-1] - f.ys[0])
    assert r.partition == (0, 199)


def test_bruteforce_trivia():
    assert pvar_bruteforce(seq([2, 2, 2, 2]), 2).value == 0.0
    two = SampledFunction([0.0, 0.25], [1.0, 3.0])
    assert pvar_bruteforce(two, 2, 0.5).value == pytest.approx(2 / 0.25 ** 0.5, rel=1e-15)
    with pytest.raises(ValidationError):
        pvar_bruteforce(seq(np.zeros(21)), 1)


def test_preconditions():
    with pytest.raises(ValidationError):
        pvar_dp(seq([1, 2]), 0.5)
    with pytest.raises(ValidationError):
        pvar_dp(seq([1, 2]), 2, alpha=1.0)
    with pytest.raises(ValidationError):
        pvar_dp(seq([1, 2, 1]), 2, alpha=0.3, prune=True)


@given(ys_lists, st.sampled_from(P_VALUES), st.sampled_from([0.0, 0.3, 0.7]))
def test_dp_matches_bruteforce(ys, p, alpha):
    f = seq(ys)
    a, b = pvar_dp(f, p, alpha), pvar_bruteforce(f, p, alpha)
    assert abs(a.value - b.value) <= 1e-12 * max(1.0, b.value)


@given(ys_lists, st.sampled_from(P_VALUES), st.sampled_from([0.0, 0.5]))
def test_partition_reproduces_value(ys, p, alpha):
    f = seq(ys)
    r = pvar_dp(f, p, alpha)
    assert all(np.diff(r.partition) > 0)
    assert abs(partition_objective(f.xs, f.ys, r.partition, p, alpha) - r.value) <= 1e-12 * max(1.0, r.value)


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=60), st.sampled_from(P_VALUES))
def test_pruning_is_exact(ys, p):
    f = seq(ys)
    assert abs(pvar_dp(f, p, prune=True).value - pvar_dp(f, p).value) <= 1e-12 * max(1.0, pvar_dp(f, p).value)


def test_local_extrema_keeps_ends_and_turning_points():
    ys = np.array([0, 1, 2, 2, 1, 0, 0, 3], dtype=float)
    idx = local_extrema(ys)
    assert idx[0] == 0 and idx[-1] == 7
    d = np.diff(ys[idx])
    assert np.all(d != 0) and np.all(d[:-1] * d[1:] < 0)


@given(ys_lists, st.sampled_from([1.0, 1.5, 2.0]), st.sampled_from([1.5, 2.0, 3.0]))
def test_monotone_in_p(ys, q, p):
    if p < q:
        p, q = q, p
    f = seq(ys)
    assert pvar_dp(f, p).value <= pvar_dp(f, q).value * (1 + 1e-12) + 1e-12


@given(ys_lists, st.floats(-3, 3), st.floats(-3, 3), st.sampled_from(P_VALUES))
def test_translation_and_homogeneity(ys, c, lam, p):
    f = seq(ys)
    base = pvar_dp(f, p).value
    assert pvar_dp(f.with_values(f.ys + c), p).value == pytest.approx(base, rel=1e-9, abs=1e-9)
    assert pvar_dp(f.with_values(lam * f.ys), p).value == pytest.approx(abs(lam) * base, rel=1e-9, abs=1e-9)


@given(ys_lists, st.sampled_from(P_VALUES))
def test_two_term_bound(ys, p):
    f = seq(ys)
    nu = pvar_dp(f, p).value
    assert np.all(np.abs(f.ys) <= nu + abs(f.ys[0]) + 1e-9)


def test_vp_norm_examples():
    assert vp_norm(seq([-3, -3, -3]), 2) == 3.0
    assert vp_norm(sample(parse("x"), Interval(0, 1), 101), 1) == 2.0
    rng = np.random.default_rng(0)
    f = seq(rng.normal(size=30))
    g = f.with_values(-2 * f.ys)
    assert vp_norm(g, 2) == pytest.approx(2 * f.sup_abs() + 2 * pvar_dp(f, 2).value, rel=1e-12)


def test_bvp1_examples():
    one = SampledFunction([0.25, 0.75], [1.0, 1.0])
    assert bvp1_norm(one, 0.0, 2) == 1.0
    assert bvp1_norm(SampledFunction([0.0, 1.0], [0.0, 0.0]), 4.0, 2) == 4.0
    xs = Interval(0, 1).midpoints(1000)
    fprime = SampledFunction(np.concatenate([[0.0], xs, [1.0]]), np.concatenate([[0.0], xs, [1.0]]))
    assert bvp1_norm(fprime, 0.0, 1) == 2.0


def test_bvp_alpha_examples():
    f = sample_midpoints("x", Interval(-1, 1), 64)
    assert bvp_alpha_norm(f, 2, 0.0) == vp_norm(f, 2)
    g = sample(parse("x"), Interval(0, 1), 101)
    assert weighted_sup(g, 0.5) == pytest.approx(1.0, rel=1e-15)
    assert bvp_alpha_norm(seq([0, 0, 0], 0.1, 1), 2, 0.5) == 0.0


def test_bvp_alpha_one_uses_derivative():
    fprime = SampledFunction([0.0, 1.0], [1.0, 1.0])
    assert bvp_alpha_norm(None, 2, 1, fprime=fprime, f_at_x0=0.0) == 1.0
    with pytest.raises(ValidationError):
        bvp_alpha_norm(None, 2, 1)


def test_up_examples():
    assert up_seminorm(sample(parse("3"), Interval(0, 1), 64), 2) == 0.0
    v = up_seminorm(sample(parse("x"), Interval(0, 1), 1024), 1)
    assert 0.9 <= v <= 1.0 + 1e-12
    with pytest.raises(ValidationError):
        up_seminorm(SampledFunction([0, 0.1, 1.0], [0, 1, 2]), 2)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_up_bounded_by_vp_on_random_steps(seed, p):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 8))
    b = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, k)), [1.0]])
    step = StepFunction(b, rng.normal(size=k + 2), rng.normal(size=k + 1))
    xs = np.linspace(0, 1, 257)
    f = SampledFunction(xs, step(xs))
    assert up_seminorm(f, p) <= 2 ** (1 / p) * vp_norm(f, p) + 1e-9


def test_total_variation_of_smooth_sine():
    f = sample(parse("sin(2*pi*x)"), Interval(0, 1), 10_000)
    assert abs(pvar_dp(f, 1).value - 4.0) <= 1e-3 * 4.0


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_order_alpha_vs_sobolev_ratio_stable(p):
    alpha = 1 - 1 / p
    ratios = []
    for k in range(8, 13):
        n = 2 ** k
        f = sample(parse("sin(2*pi*x) + x^2"), Interval(0, 1), n)
        dx = 1.0 / (n - 1)
        d = np.diff(f.ys) / dx
        lp = (np.sum(np.abs(d) ** p) * dx) ** (1 / p)
        ratios.append(pvar_dp(f, p, alpha).value / lp)
    assert all(0.25 <= r <= 4 for r in ratios)
