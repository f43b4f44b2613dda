import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affsurf.catalog import make
from affsurf.connection import (TRIPLES, Connection, Kind, cov_deriv_torsion, ricci_of,
                                torsion_of)
from affsurf.errors import NotTypeA, RadicalObstruction, SingularMatrix, ZeroTorsion
from affsurf.expr import lower_exact, parse
from affsurf.gauge import (Flip, GaugeChain, GaugeLinear, GaugeShear, apply_axb_B, apply_linear,
                           apply_shear_A, det2, normalize_torsion_A, shear_table,
                           transform_table, transform_torsion)
from affsurf.scalars import RadicalScalar, RatFn

SYMS = [f"g{i}{j}{k}" for i, j, k in TRIPLES] + ["a", "b"]


def sym(name):
    return lower_exact(parse(name, SYMS))


def symbolic_type_a():
    return Connection({t: sym("g{}{}{}".format(*t)) for t in TRIPLES}, Kind.TYPE_A)


def test_shear_formula_equals_linear_map_symbolically():
    conn = symbolic_type_a()
    a, b = sym("a"), sym("b")
    via_formula = apply_shear_A(conn, a, b)
    P = [[RatFn.const(1), RatFn.const(0)], [b, a]]
    via_linear = Connection(transform_table(conn.gamma, P), Kind.TYPE_A)
    assert via_formula == via_linear


def test_shear_torsion_rule():
    t = shear_table(symbolic_type_a().gamma, sym("a"), sym("b"))
    t1 = (t[(1, 2, 1)] - t[(2, 1, 1)]) / 2
    t2 = (t[(1, 2, 2)] - t[(2, 1, 2)]) / 2
    g = symbolic_type_a().gamma
    s1 = (g[(1, 2, 1)] - g[(2, 1, 1)]) / 2
    s2 = (g[(1, 2, 2)] - g[(2, 1, 2)]) / 2
    assert t1 == sym("a") * s1
    assert t2 == s2 - sym("b") * s1


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)
matrices = st.tuples(rationals, rationals, rationals, rationals).filter(
    lambda m: m[0] * m[3] - m[1] * m[2] != 0).map(lambda m: ((m[0], m[1]), (m[2], m[3])))


@settings(max_examples=40, deadline=None)
@given(matrices, matrices)
def test_group_law(P1, P2):
    conn = make("thm4-6", {"omega": F(1, 2), "epsilon": -1, "eta": 3})
    g1, g2 = GaugeLinear(P1), GaugeLinear(P2)
    twice = apply_linear(apply_linear(conn, g1), g2)
    chain = GaugeChain([g1, g2])
    assert chain.apply(conn) == twice
    assert apply_linear(conn, GaugeLinear(chain.matrix)) == twice
    assert chain.inverse().apply(twice) == conn


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_torsion_and_ricci_transform_as_tensors(P):
    conn = make("thm4-2", {"alpha": F(-3, 2)})
    g = GaugeLinear(P)
    new = apply_linear(conn, g)
    t = torsion_of(conn)
    want = transform_torsion((t.t1.constant_value(), t.t2.constant_value()), P)
    got = torsion_of(new)
    assert (got.t1.constant_value(), got.t2.constant_value()) == tuple(want)
    rho, rho2 = ricci_of(conn).matrix(), ricci_of(new).matrix()
    for a in range(2):
        for b in range(2):
            v = sum(P[i][a] * P[j][b] * rho[i][j].constant_value() for i in range(2) for j in range(2))
            assert rho2[a][b].constant_value() == v


def test_type_b_gauges():
    conn = make("thm5-8", {"gamma": 2, "alpha": 1, "epsilon": 1})
    out = apply_axb_B(conn, F(2), F(-1))
    assert out.kind is Kind.TYPE_B
    assert apply_linear(conn, Flip()).kind is Kind.TYPE_B
    assert apply_linear(conn, GaugeLinear(((1, 1), (0, 1)))).kind is Kind.GENERAL
    # the ax+b map keeps the 1/x1 form: x1 * Gamma is constant
    x1 = RatFn.var("x1")
    assert all((x1 * v).is_constant() for v in out.gamma.values())


def test_flip_on_thm4_6():
    conn = make("thm4-6", {"omega": 2, "epsilon": 1, "eta": 3})
    flipped = apply_linear(conn, Flip())
    assert flipped == make("thm4-6", {"omega": 2, "epsilon": 1, "eta": -3}, check=False)


def test_normalize_torsion():
    rng = random.Random(4)
    for _ in range(20):
        conn = make("thm4-5", {"beta": F(rng.randint(5, 11), 2)})
        while True:
            P = ((F(rng.randint(-5, 5)), F(rng.randint(-5, 5))), (F(rng.randint(-5, 5)), F(rng.randint(-5, 5))))
            if det2(P):
                break
        moved = apply_linear(conn, GaugeLinear(P))
        norm, g = normalize_torsion_A(moved)
        t = torsion_of(norm)
        assert (t.t1, t.t2) == (RatFn.const(0), RatFn.const(1))
        assert det2(g.matrix) == 1


def test_errors():
    with pytest.raises(SingularMatrix):
        GaugeLinear(((1, 2), (2, 4))).inverse()
    with pytest.raises(ZeroTorsion):
        normalize_torsion_A(make("thm1-5"))
    with pytest.raises(NotTypeA):
        apply_shear_A(make("thm5-5", {"xi": 1, "beta": 1}), 1, 0)
    with pytest.raises(RadicalObstruction):
        apply_linear(make("thm4-4"), GaugeLinear(((RadicalScalar.sqrt(2), 0), (0, 1))))
    with pytest.raises(TypeError):
        GaugeLinear(((0.5, 0), (0, 1)))


def test_describe_and_json():
    chain = GaugeChain([GaugeShear(2, F(1, 3)), Flip()])
    assert chain.describe()
    assert [s["type"] for s in chain.to_json()] == ["shear", "flip"]


def test_numeric_gauge_matches_exact():
    conn = make("thm5-9", {"alpha": 1, "gamma": 2, "epsilon": 1})
    for g in (GaugeLinear(((1, 2), (3, 5))), GaugeShear(3, F(-1, 2))):
        ex, nu = apply_linear(conn, g), apply_linear(conn.to_numeric(), g)
        assert ex.kind is nu.kind
        p = (1.3, 0.7)
        je, jn = ex.jets(p), nu.jets(p)
        for t in TRIPLES:
            assert abs(je[t].c - jn[t].c).max() < 1e-12
        assert abs(cov_deriv_torsion(nu, at=p)[(1, 1)].value
                   - cov_deriv_torsion(ex, at=p)[(1, 1)].value) < 1e-12
