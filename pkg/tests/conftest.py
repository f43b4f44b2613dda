import random
from fractions import Fraction as F

import pytest

from affsurf.catalog import catalog, make, spec_for
from affsurf.connection import Kind, cov_deriv_torsion
from affsurf.errors import ConstraintViolation
from affsurf.gauge import GaugeLinear, GaugeShear, apply_linear, det2

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    def _record(number, ok, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
    return _record


def rand_q(rng, lo=-6, hi=6, den=3):
    return F(rng.randint(lo, hi), rng.randint(1, den))


# parameters whose catalog domain is nonnegative
NONNEGATIVE = ("eta", "alpha")


def random_params(rng, spec):
    p = {}
    for n in spec.params:
        if n in spec.signs:
            p[n] = rng.choice((1, -1))
        else:
            v = rand_q(rng)
            p[n] = abs(v) if n in NONNEGATIVE else v
    return p


def random_gauge(rng, kind):
    if kind is Kind.TYPE_A:
        while True:
            P = ((rand_q(rng), rand_q(rng)), (rand_q(rng), rand_q(rng)))
            if det2(P) != 0:
                return GaugeLinear(P)
    a = rng.choice((1, -1)) * F(rng.randint(1, 4), rng.randint(1, 3))
    return GaugeShear(a, rand_q(rng))


def table_instances(n, seed, keep=lambda spec, conn: True):
    """``n`` random (spec, params, connection, gauge, gauged) tuples from the
    Thm4 / Thm5 tables.  Degenerate parameters with vanishing nabla T belong
    to the parallel-torsion families and are redrawn."""
    rng = random.Random(seed)
    keys = [k for k in catalog() if k.startswith(("thm4-", "thm5-"))]
    out = []
    while len(out) < n:
        spec = spec_for(rng.choice(keys))
        params = random_params(rng, spec)
        try:
            conn = make(spec, params)
        except ConstraintViolation:
            continue
        if cov_deriv_torsion(conn).is_zero() or not keep(spec, conn):
            continue
        g = random_gauge(rng, spec.kind)
        out.append((spec, params, conn, g, apply_linear(conn, g)))
    return out


def type_a_instances():
    out = []
    for key, spec in catalog().items():
        if spec.kind is not Kind.TYPE_A or spec.backend != "exact":
            continue
        choices = [{}]
        if spec.params:
            base = {"u": 1, "v": 1, "gamma": 2, "alpha": F(1, 2), "beta": 3,
                    "omega": F(-1, 3), "eta": 2, "epsilon": 1}
            choices = [{p: base[p] for p in spec.params}]
            if "epsilon" in spec.params:
                choices.append({**choices[0], "epsilon": -1})
        out += [(key, p) for p in choices]
    out += [("muv", {"u": 1, "v": 0}), ("muv", {"u": 0, "v": 0}), ("muv", {"u": 2, "v": -3})]
    return out
