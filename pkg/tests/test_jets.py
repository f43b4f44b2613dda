import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affsurf.errors import DomainError
from affsurf.expr import lower_numeric, parse
from affsurf.jets import Jet2

mpmath.mp.dps = 40


def jet(src, at):
    return lower_numeric(parse(src))(*at)


def test_tanh_at_origin():
    j = jet("tanh(x1)", (0.0, 0.0))
    assert j.value == 0.0
    assert j.partial(1, 0) == pytest.approx(1.0, abs=1e-15)
    assert j.partial(2, 0) == pytest.approx(0.0, abs=1e-15)


def test_half_tanh_slope():
    j = jet("(1/2)*tanh(x1)", (1.0, 0.0))
    assert j.value == pytest.approx(0.3807970779778824, abs=1e-15)
    assert j.partial(1, 0) == pytest.approx(0.5 / math.cosh(1.0) ** 2, abs=1e-15)
    assert j.partial(1, 0) == pytest.approx(0.2099871, abs=1e-7)


def test_central_differences_h_sweep():
    f = lower_numeric(parse("(1/2)*tanh(x1)"))
    exact = f(1.0, 0.0).partial(1, 0)
    errs = [abs((f(1 + h, 0).value - f(1 - h, 0).value) / (2 * h) - exact)
            for h in (1e-2, 1e-3, 1e-4)]
    assert errs[-1] < 1e-8
    assert errs[0] > errs[1] > errs[2]


CASES = [
    ("x1^2*x2 - 3*x2^3", lambda a, b: a ** 2 * b - 3 * b ** 3),
    ("exp(x1)*sin(x2)", lambda a, b: mpmath.exp(a) * mpmath.sin(b)),
    ("cosh(x1 - x2)/(1 + x1^2)", lambda a, b: mpmath.cosh(a - b) / (1 + a ** 2)),
    ("tanh(x1*x2)^2", lambda a, b: mpmath.tanh(a * b) ** 2),
    ("sinh(x1)*cos(x2)^-1", lambda a, b: mpmath.sinh(a) / mpmath.cos(b)),
]


@pytest.mark.parametrize("src,fn", CASES)
@settings(max_examples=15, deadline=None)
@given(a=st.floats(-1.5, 1.5), b=st.floats(-1.0, 1.0))
def test_partials_against_mpmath(src, fn, a, b):
    j = jet(src, (a, b))
    for n1 in range(4):
        for n2 in range(4 - n1):
            want = float(mpmath.diff(fn, (a, b), (n1, n2)))
            assert j.partial(n1, n2) == pytest.approx(want, rel=1e-8, abs=1e-8)


def test_diff_lowers_order():
    j = jet("x1^3", (2.0, 0.0)).diff(1)
    assert j.order == 2
    assert j.partial(1, 0) == pytest.approx(12.0)
    with pytest.raises(ValueError):
        j.partial(3, 0)


def test_division_by_vanishing_jet():
    with pytest.raises(DomainError):
        Jet2.constant(1.0) / Jet2.variable(1, (0.0, 0.0))
