import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affsurf.errors import (DomainError, ExprSyntaxError, TranscendentalInExactBackend,
                            UnboundParameter, UnknownIdentifier)
from affsurf.expr import (BinOp, Call, Neg, Num, Pow, Var, linear_combination, lower_exact,
                          lower_numeric, parse, substitute, to_source)
from affsurf.scalars import RatFn


def test_product_node():
    assert parse("2*u", ["u"]) == BinOp("*", Num(F(2)), Var("u"))


def test_quotient_node():
    node = parse("-(2*gamma+1)/x1", ["gamma"])
    assert isinstance(node, BinOp) and node.op == "/"
    assert isinstance(node.left, Neg)


def test_transcendental_flag():
    node = parse("(1/2)*tanh(x1)")
    assert node.transcendental
    assert isinstance(node.right, Call)
    assert not parse("x1^2/x2").transcendental


def test_precedence():
    # power binds tighter than unary minus
    assert parse("-x1^2") == Neg(Pow(Var("x1"), 2))
    assert parse("1 - x1 - x2") == BinOp("-", BinOp("-", Num(F(1)), Var("x1")), Var("x2"))
    assert lower_exact(parse("2/4/2")) == RatFn.const(F(1, 4))


def test_literals_are_exact():
    assert parse("0.25") == Num(F(1, 4))
    assert lower_exact(parse("1/3 + 0.5")) == RatFn.const(F(5, 6))


def test_unicode_minus():
    assert lower_exact(parse("x1 − 1")) == lower_exact(parse("x1 - 1"))


@pytest.mark.parametrize("src,col", [("2*", 3), ("x1 + (x2", 9), ("3 ^ x1", 5), ("", 1)])
def test_syntax_errors_carry_position(src, col):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.pos + 1 == col


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier):
        parse("2*w", ["u"])
    with pytest.raises(UnknownIdentifier):
        parse("log(x1)")


def test_lower_exact_examples():
    assert lower_exact(parse("0")).is_zero()
    assert lower_exact(parse("x1^2/x1")) == RatFn.var("x1")
    with pytest.raises(TranscendentalInExactBackend):
        lower_exact(parse("tanh(x1)"))


def test_lower_exact_bindings():
    assert lower_exact(parse("u*x1", ["u"]), {"u": F(3)}) == lower_exact(parse("3*x1"))


def test_lower_numeric_examples():
    assert lower_numeric(parse("x1+x2"))(1, 2).value == 3.0
    with pytest.raises(DomainError):
        lower_numeric(parse("1/x1"))(0, 0)
    assert lower_numeric(parse("(1/2)*tanh(x1)"))(1, 0).value == pytest.approx(0.3807970779778824,
                                                                               abs=1e-15)
    with pytest.raises(UnboundParameter):
        lower_numeric(parse("u*x1", ["u"]))


# -- random ASTs ----------------------------------------------------------

leaves = st.one_of(
    st.fractions(min_value=0, max_value=9, max_denominator=5).map(Num),
    st.sampled_from(["x1", "x2", "u"]).map(Var),
)


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
        children.map(Neg),
        st.tuples(children, st.integers(0, 3)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["tanh", "exp", "sin"]), children).map(lambda t: Call(*t)),
    )


asts = st.recursive(leaves, _extend, max_leaves=10)


@settings(max_examples=200, deadline=None)
@given(asts)
def test_print_parse_round_trip(node):
    assert parse(to_source(node), ["u"]) == node


@settings(max_examples=60, deadline=None)
@given(asts.filter(lambda n: not n.transcendental), st.randoms(use_true_random=False))
def test_exact_and_numeric_agree(node, rnd):
    exact = lower_exact(node)
    num = lower_numeric(node, {"u": F(2, 3)})
    for _ in range(20):
        x1, x2 = F(rnd.randint(-9, 9), 4), F(rnd.randint(-9, 9), 4)
        want = exact.evaluate({"x1": x1, "x2": x2, "u": F(2, 3)})
        got = num(x1, x2).value
        assert got == pytest.approx(float(want), rel=1e-10, abs=1e-10)


def test_substitute_and_linear_combination():
    node = parse("x1*x2 + tanh(x1)")
    lin = linear_combination([(F(2), Var("x1")), (F(-1), Var("x2"))])
    moved = substitute(node, {"x1": lin})
    rng = random.Random(3)
    for _ in range(5):
        a, b = rng.uniform(-1, 1), rng.uniform(-1, 1)
        assert lower_numeric(moved)(a, b).value == pytest.approx(
            lower_numeric(node)(2 * a - b, b).value, abs=1e-14)
    assert linear_combination([(F(0), Var("x1"))]) == Num(F(0))
