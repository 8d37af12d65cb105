import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from varnorm.errors import EvalDomainError, ParseError, ValidationError
from varnorm.expr import (
    X, AbsPow, Binary, Bump, ChainProduct, Compose, Const, Unary, Var, chain_derivative, compose,
    differentiate, evaluate, parse, to_text,
)


def test_parse_variable():
    assert parse("x") == Var()


def test_parse_u_alpha():
    e = parse("abs(x+1) - abs(1)")
    assert e == Binary("-", Unary("abs", Binary("+", Var(), Const(1.0))), Unary("abs", Const(1.0)))
    assert evaluate(e, 0.0) == 0.0


def test_precedence():
    assert evaluate(parse("-2^2"), 0.0) == -4.0
    assert evaluate(parse("2*3+4"), 0.0) == 10.0
    assert evaluate(parse("2^3^1"), 0.0) == 8.0
    assert evaluate(parse("x^-2"), 2.0) == 0.25
    assert evaluate(parse("(1+x)*(1-x)"), 0.5) == 0.75


def test_deferred_domain_error():
    e = parse("sin(x^-2)")
    assert math.isfinite(evaluate(e, 1.0))
    with pytest.raises(EvalDomainError) as ei:
        evaluate(e, 0.0)
    assert ei.value.x == 0.0


def test_syntax_error_offsets():
    with pytest.raises(ParseError) as ei:
        parse("x + * 2")
    assert ei.value.offset == 4
    with pytest.raises(ParseError) as ei:
        parse("foo(x)")
    assert ei.value.offset == 0
    with pytest.raises(ParseError):
        parse("(x")
    with pytest.raises(ParseError):
        parse("x^x")


def test_evaluate_examples():
    assert evaluate(parse("x^2"), 3.0) == 9.0
    with pytest.raises(EvalDomainError):
        evaluate(parse("log(x)"), -1.0)
    with pytest.raises(EvalDomainError):
        evaluate(parse("1/x"), 0.0)
    with pytest.raises(EvalDomainError):
        evaluate(parse("x^-1"), 0.0)


def test_sign_zero():
    assert evaluate(parse("sign(x)"), 0.0) == 0.0


def test_derivatives():
    xs = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(evaluate(differentiate(parse("x^2")), xs), 2 * xs)
    np.testing.assert_allclose(evaluate(differentiate(parse("sin(x)")), xs), np.cos(xs))
    d_abs = differentiate(parse("abs(x)"))
    assert evaluate(d_abs, 0.0) == 0.0
    pts = np.array([-1.3, -0.2, 0.4, 2.0])
    h = 1e-6
    central = (np.abs(pts + h) - np.abs(pts - h)) / (2 * h)
    np.testing.assert_allclose(evaluate(d_abs, pts), central, rtol=1e-9)


def test_abspow_and_bump_derivatives_match_central_differences():
    for text in ("abspow(x, 2.5)", "abspow(x, 3)*rho(x)*sin(abspow(x, -0.5))", "rho(x)", "drho2(x)"):
        e = parse(text)
        d = differentiate(e)
        pts = np.array([-0.41, -0.33, -0.2, 0.07, 0.38, 0.45])
        h = 1e-6
        central = (evaluate(e, pts + h) - evaluate(e, pts - h)) / (2 * h)
        np.testing.assert_allclose(evaluate(d, pts), central, rtol=1e-5, atol=1e-6)


def test_rho_profile():
    e = parse("rho(x)")
    assert evaluate(e, 0.0) == 1.0
    assert evaluate(e, 1 / math.e) == 1.0
    assert evaluate(e, 0.5) == 0.0
    assert evaluate(e, -0.7) == 0.0
    assert 0 < evaluate(e, 0.45) < 1


smooth_nodes = st.deferred(lambda: st.one_of(
    st.just(X),
    st.floats(-3, 3, allow_nan=False).map(Const),
    st.tuples(st.sampled_from(["neg", "abs", "sin", "cos", "exp", "sign"]), smooth_nodes).map(lambda t: Unary(*t)),
    st.tuples(st.sampled_from(["+", "-", "*"]), smooth_nodes, smooth_nodes).map(lambda t: Binary(*t)),
    st.tuples(smooth_nodes, st.sampled_from([2.0, 3.0, -1.0, 0.5])).map(lambda t: t[0] ** t[1]),
    st.tuples(smooth_nodes, st.floats(0.5, 3)).map(lambda t: AbsPow(*t)),
    st.tuples(st.integers(0, 2), smooth_nodes).map(lambda t: Bump(*t)),
    st.tuples(smooth_nodes, smooth_nodes).map(lambda t: Compose(*t)),
))


@given(smooth_nodes)
def test_print_parse_round_trip(e):
    assert parse(to_text(e)) == e


def test_round_trip_negative_literals():
    for text in ("-3", "x - -2", "abspow(x, -0.5)", "(-1)^2", "-x^2", "2^-1"):
        e = parse(text)
        assert parse(to_text(e)) == e


# smooth family with ranges kept in [-3, 3]
def _chain_member(rng):
    kind = rng.integers(4)
    if kind == 0:
        c = rng.uniform(-1, 1, 4) / np.array([1, 1, 2, 4])
        return Const(c[0]) + Const(c[1]) * X + Const(c[2]) * X ** 2 + Const(c[3]) * X ** 3
    if kind == 1:
        return Const(rng.uniform(0.5, 2)) * Unary("sin", X)
    if kind == 2:
        return Const(rng.uniform(0.5, 2)) * Unary("cos", X)
    return Unary("exp", Const(rng.uniform(-0.5, 0.5)) * X)


def random_chain(seed, n):
    rng = np.random.default_rng(seed)
    return [_chain_member(rng) for _ in range(n)]


def test_chain_factor_structure_n3():
    g1, g2, g3 = parse("sin(x)"), parse("x^2"), parse("exp(x)")
    cp = chain_derivative([g1, g2, g3])
    assert len(cp) == 3
    assert cp.factors[2] == differentiate(g3)
    assert cp.factors[1] == Compose(differentiate(g2), g3)
    assert cp.factors[0] == Compose(differentiate(g1), Compose(g2, g3))


def test_identity_chain():
    cp = chain_derivative([X, X])
    assert np.all(cp.evaluate(np.linspace(-1, 1, 7)) == 1.0)


def test_square_of_sin():
    cp = chain_derivative([parse("x^2"), parse("sin(x)")])
    xs = np.linspace(0, 1, 101)
    np.testing.assert_allclose(cp.evaluate(xs), 2 * np.sin(xs) * np.cos(xs), atol=1e-9)


def test_chain_needs_two():
    with pytest.raises(ValidationError):
        chain_derivative([X])


@pytest.mark.parametrize("seed", range(10))
def test_chain_vs_composed_and_reordered(seed):
    n = 2 + seed % 4
    gs = random_chain(seed, n)
    cp = chain_derivative(gs)
    xs = np.random.default_rng(100 + seed).uniform(-1, 1, 100)
    a = cp.evaluate(xs)
    b = evaluate(differentiate(compose(*gs)), xs)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)
    rev = cp.evaluate(xs, order=list(reversed(range(n))))
    np.testing.assert_allclose(rev, a, rtol=1e-14)
    assert isinstance(cp, ChainProduct) and len(cp.factors) == n
