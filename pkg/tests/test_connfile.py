from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affsurf.catalog import catalog, make
from affsurf.connection import SAMPLE_GRID, TRIPLES, Connection, Kind
from affsurf.connfile import parse_text, serialize
from affsurf.errors import ConnectionFileError
from affsurf.expr import lower_exact, parse
from affsurf.scalars import RatFn


def test_header_and_bindings():
    conn = parse_text("kind: A\nparams: u, v=1\nGamma 1 2 1 = 2*u  # comment\nGamma 2 2 1 = v\n")
    assert conn.kind is Kind.TYPE_A
    assert conn.params == ("u",)
    assert conn.gamma[(2, 2, 1)] == RatFn.const(1)
    override = parse_text("params: u\nGamma 1 2 1 = u\n", {"u": F(3)})
    assert override.gamma[(1, 2, 1)] == RatFn.const(3)


def test_type_b_inserts_factor():
    conn = parse_text("kind: B\nGamma 1 1 1 = 3\n")
    assert conn.gamma[(1, 1, 1)] == RatFn.const(3) / RatFn.var("x1")
    assert "Gamma 1 1 1 = 3" in serialize(conn)


@pytest.mark.parametrize("text,line,col", [
    ("kind: A\nGamma 1 2 = 3\n", 2, 1),
    ("Gamma 1 3 1 = 1\n", 1, 7),
    ("Gamma 1 1 1 = 2*\n", 1, 17),
    ("Gamma 1 1 1 = w\n", 1, 15),
    ("kind: C\n", 1, 1),
    ("Gamma 1 1 1 = 1\nGamma 1 1 1 = 2\n", 2, 1),
    ("params: x1\n", 1, 1),
    ("kind: A\nGamma 1 1 1 = tanh(x1)\n", 2, 15),
])
def test_errors_carry_location(text, line, col):
    with pytest.raises(ConnectionFileError) as info:
        parse_text(text)
    assert (info.value.line, info.value.column) == (line, col)


coeffs = st.one_of(
    st.fractions(min_value=-5, max_value=5, max_denominator=4).map(RatFn.const),
    st.sampled_from(["x1*x2 - 1/3", "u/(x1 + 2)", "x2^2*u - x1", "-u"]).map(
        lambda s: lower_exact(parse(s, ["u"]))),
)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from(TRIPLES), coeffs, max_size=8),
       st.sampled_from([Kind.GENERAL, Kind.TYPE_B]))
def test_round_trip(gamma, kind):
    conn = Connection(gamma, kind)
    assert parse_text(serialize(conn)) == conn


@pytest.mark.parametrize("key", [k for k in catalog() if catalog()[k].backend == "exact"])
def test_catalog_round_trip(key):
    spec = catalog()[key]
    params = {"epsilon": -1} if "epsilon" in spec.signs else {}
    params.update({s: 1 for s in spec.signs if s not in params})
    conn = make(spec, params, mode="symbolic")
    assert parse_text(serialize(conn)) == conn


def test_numeric_round_trip():
    conn = make("example1")
    again = parse_text(serialize(conn))
    for p in SAMPLE_GRID:
        a, b = conn.jets(p), again.jets(p)
        assert all(abs(a[t].c - b[t].c).max() == 0 for t in TRIPLES)
