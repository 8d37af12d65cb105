import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from varnorm.errors import EvalDomainError, ValidationError
from varnorm.expr import parse
from varnorm.pvar import pvar_dp
from varnorm.sampled import (
    Interval, SampledFunction, StepFunction, UniformGrid, compose_samples, cumulative_integral,
    image_interval, normalize, parse_csv, sample, sample_midpoints, to_csv,
)

finite = st.floats(-10, 10, allow_nan=False)


def test_interval_rejects_degenerate():
    with pytest.raises(ValidationError):
        Interval(1.0, 1.0)
    with pytest.raises(ValidationError):
        Interval(2.0, 1.0)


def test_sampled_function_invariants():
    with pytest.raises(ValidationError):
        SampledFunction([0, 0, 1], [1, 2, 3])
    with pytest.raises(ValidationError):
        SampledFunction([0, 1], [0, np.nan])
    with pytest.raises(ValidationError):
        SampledFunction([0], [0])
    f = SampledFunction([0, 1], [0, 1])
    with pytest.raises((ValueError, AttributeError)):
        f.ys[0] = 3.0


def test_sample_identity():
    f = sample(parse("x"), Interval(0, 1), 3)
    assert f.xs.tolist() == [0, 0.5, 1]
    assert f.ys.tolist() == [0, 0.5, 1]
    assert f.interval == Interval(0, 1)


def test_sample_sin_peak():
    f = sample(parse("sin(x)"), Interval(0, math.pi), 5)
    assert f.xs[2] == pytest.approx(math.pi / 2)
    assert f.ys[2] == 1.0


def test_sample_singular_point_reports_x():
    with pytest.raises(EvalDomainError) as ei:
        sample(parse("1/x"), Interval(-1, 1), 3)
    assert ei.value.x == 0.0


def test_sample_midpoints_avoid_zero():
    f = sample_midpoints("1/x", Interval(-1, 1), 4)
    assert not np.any(f.xs == 0)


def test_cumulative_integral_unit():
    h = sample(parse("1"), Interval(0, 1), 11)
    g = cumulative_integral(h, 0.0, 0.0)
    np.testing.assert_allclose(g.ys, h.xs, atol=1e-15)


def test_cumulative_integral_zero():
    h = sample(parse("0"), Interval(0, 1), 11)
    g = cumulative_integral(h, 3.0, 0.37)
    assert np.all(g.ys == 3.0)


def test_cumulative_integral_linear():
    h = sample(parse("2*x"), Interval(0, 1), 1001)
    g = cumulative_integral(h, 0.0, 0.0)
    assert abs(g.ys[-1] - 1.0) <= 1e-6


def test_cumulative_integral_base_point_between_nodes():
    h = sample(parse("2*x"), Interval(0, 1), 11)
    g = cumulative_integral(h, 1.5, 0.33)
    # g is PL between nodes of an exact quadratic for PL h; g(t0) = alpha
    assert float(g(0.33)) == pytest.approx(1.5, abs=0.01)
    np.testing.assert_allclose(g.ys, 1.5 + h.xs ** 2 - 0.33 ** 2, atol=1e-12)


def test_cumulative_integral_t0_outside():
    h = sample(parse("1"), Interval(0, 1), 5)
    with pytest.raises(ValidationError):
        cumulative_integral(h, 0.0, 1.5)


def test_differencing_recovers_integrand():
    n = 2001
    h = sample(parse("cos(3*x)"), Interval(0, 2), n)
    g = cumulative_integral(h, 0.0, 0.0)
    dx = h.xs[1] - h.xs[0]
    central = (g.ys[2:] - g.ys[:-2]) / (2 * dx)
    assert np.max(np.abs(central - h.ys[1:-1])) <= 10 * dx ** 2


def test_image_interval():
    g = sample(parse("x"), Interval(0, 1), 5)
    J = image_interval(g)
    assert (J.lo, J.hi, J.degenerate) == (0.0, 1.0, False)
    s = sample(parse("sin(x)"), Interval(0, 2 * math.pi), 1025)
    J = image_interval(s)
    assert J.lo == pytest.approx(-1, abs=1e-4) and J.hi == pytest.approx(1, abs=1e-4)
    c = sample(parse("5"), Interval(0, 1), 5)
    J = image_interval(c)
    assert J.degenerate and J.lo < 5 < J.hi and J.hi - J.lo < 1e-13


def test_compose_identity_exact():
    rng = np.random.default_rng(1)
    g = SampledFunction(np.linspace(0, 1, 50), rng.uniform(-1, 1, 50), Interval(0, 1))
    ident = sample(parse("x"), Interval(-1, 1), 201)
    assert np.array_equal(compose_samples(ident, g).ys, g.ys)


def test_compose_square_and_abs():
    f = sample(parse("x^2"), Interval(0, 1), 101)
    g = sample(parse("x"), Interval(0, 1), 101)
    np.testing.assert_allclose(compose_samples(f, g).ys, g.xs ** 2, atol=1e-15)
    fa = sample(parse("abs(x)"), Interval(-1, 1), 201)
    ga = sample(parse("x - 0.5"), Interval(0, 1), 101)
    np.testing.assert_allclose(compose_samples(fa, ga).ys, np.abs(ga.xs - 0.5), atol=1e-15)


def test_compose_escape_names_offender():
    f = sample(parse("x"), Interval(0, 1), 11)
    g = sample(parse("2*x"), Interval(0, 1), 11)
    with pytest.raises(ValidationError, match="worst offender g\\(1.0\\) = 2.0"):
        compose_samples(f, g)


def test_normalize_heaviside():
    H = StepFunction([-1, 0, 1], [0, 0, 1], [0, 1])
    assert normalize(H).values[1] == 0.5


def test_normalize_continuous_fixed_point():
    f = StepFunction([0, 1, 2], [2, 2, 2], [2, 2])
    assert normalize(f) == f


def test_normalize_big_spike():
    f = StepFunction([-1, 0, 1], [1, 100, 3], [1, 3])
    g = normalize(f)
    assert g.values[1] == 2.0
    assert g.sup_abs() == 3.0 <= f.sup_abs() == 100.0


@st.composite
def step_functions(draw):
    k = draw(st.integers(1, 6))
    b = np.cumsum(draw(st.lists(st.floats(0.1, 2.0), min_size=k + 1, max_size=k + 1)))
    b = np.concatenate([[0.0], b])
    vals = draw(st.lists(finite, min_size=k + 2, max_size=k + 2))
    pl = draw(st.lists(finite, min_size=k + 1, max_size=k + 1))
    return StepFunction(b, vals, pl)


@given(step_functions())
def test_normalize_idempotent(f):
    g = normalize(f)
    assert normalize(g) == g


@given(step_functions(), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_normalize_reduces_variation_and_sup(f, p):
    g = normalize(f)
    assert pvar_dp(g.to_sampled(), p).value <= pvar_dp(f.to_sampled(), p).value + 1e-9
    assert g.sup_abs() <= f.sup_abs()


def test_uniform_grid():
    g = UniformGrid(8, 2.0)
    assert g.spacing == 0.25
    assert g.xs[-1] == 1.75
    with pytest.raises(ValidationError):
        UniformGrid(12)


def test_csv_round_trip_and_errors():
    f = SampledFunction([0.0, 0.1, 0.7], [1.0, -2.5, 1e-300])
    g = parse_csv(to_csv(f))
    assert np.array_equal(f.xs, g.xs) and np.array_equal(f.ys, g.ys)
    assert parse_csv("0,1\n1,2\n").n == 2  # header optional
    with pytest.raises(ValidationError, match="line 3"):
        parse_csv("x,y\n0,1\n0,2\n")
    with pytest.raises(ValidationError, match="line 2"):
        parse_csv("x,y\n0,1,3\n1,2\n")
    with pytest.raises(ValidationError, match="line 3"):
        parse_csv("x,y\n0,1\n1,abc\n")


def test_restrict_interpolates_ends():
    f = sample(parse("x^2"), Interval(0, 1), 11)
    r = f.restrict(0.25, 0.75)
    assert r.xs[0] == 0.25 and r.xs[-1] == 0.75
    assert r.ys[0] == pytest.approx(float(f(0.25)))
