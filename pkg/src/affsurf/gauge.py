"""Gauge actions on Type A and Type B connections.

A gauge step is a linear change of coordinates ``x = P y``: the columns of
``P`` are the new coordinate vector fields written in the old ones.  Under it

    Gamma'_ab^c = P_ia P_jb Gamma_ij^k (P^-1)_ck      (evaluated at x = P y)
    t'          = det(P) P^-1 t

and applying ``P1`` then ``P2`` is the single step ``P1 @ P2``.

A shear ``(a, b)`` is ``y = (x1, (x2 - b x1)/a)``, i.e. ``P = [[1, 0], [b, a]]``;
the same matrix is the ``ax+b`` map used on Type B surfaces.
"""

from dataclasses import dataclass
from fractions import Fraction

from .connection import IDX, TRIPLES, Connection, Kind, torsion_of
from .errors import NotTypeA, RadicalObstruction, SingularMatrix, ZeroTorsion
from .scalars import COORDS, RadicalScalar, RatFn


_HALF = Fraction(1, 2)


def _is_zero(x):
    if isinstance(x, RatFn):
        return x.is_zero()
    return not x


def det2(P):
    return P[0][0] * P[1][1] - P[0][1] * P[1][0]


def inv2(P):
    d = det2(P)
    if _is_zero(d):
        raise SingularMatrix("matrix is not invertible")
    return [[P[1][1] / d, -P[0][1] / d], [-P[1][0] / d, P[0][0] / d]]


def matmul2(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def _lift(x):
    if isinstance(x, (RatFn, RadicalScalar)):
        return x
    if isinstance(x, float):
        raise TypeError("gauge entries must be exact")
    return RadicalScalar(Fraction(x))


class _Step:
    def apply(self, conn):
        return apply_linear(conn, self)

    def apply_table(self, table):
        return transform_table(table, self.matrix)


@dataclass(frozen=True, eq=False)
class GaugeLinear(_Step):
    """A constant linear change of basis ``x = P y``."""

    matrix: tuple

    def __post_init__(self):
        P = tuple(tuple(_lift(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", P)
        d = det2(P)
        if _is_zero(d):
            raise SingularMatrix(f"determinant of {self.describe()} is zero")
        object.__setattr__(self, "det", d)

    @classmethod
    def identity(cls):
        return cls(((1, 0), (0, 1)))

    def inverse(self):
        return GaugeLinear(inv2(self.matrix))

    def __eq__(self, other):
        return isinstance(other, _Step) and all(
            self.matrix[i][j] == other.matrix[i][j] for i in range(2) for j in range(2))

    def __hash__(self):
        return hash(tuple(str(v) for row in self.matrix for v in row))

    def describe(self):
        return "linear [[{}, {}], [{}, {}]]".format(*(v for row in self.matrix for v in row))

    def to_json(self):
        return {"type": "linear", "matrix": [[str(v) for v in row] for row in self.matrix]}


class GaugeShear(GaugeLinear):
    """``(y1, y2) = (x1, (x2 - b x1)/a)``."""

    def __init__(self, a, b=0):
        a, b = _lift(a), _lift(b)
        if _is_zero(a):
            raise SingularMatrix("shear with a = 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        super().__init__(((1, 0), (b, a)))

    def inverse(self):
        return GaugeShear(1 / self.a, -self.b / self.a)

    def describe(self):
        return f"shear a={self.a}, b={self.b}"

    def to_json(self):
        return {"type": "shear", "a": str(self.a), "b": str(self.b)}


class Flip(GaugeLinear):
    """``x2 -> -x2``."""

    def __init__(self):
        super().__init__(((1, 0), (0, -1)))

    def inverse(self):
        return Flip()

    def describe(self):
        return "flip x2 -> -x2"

    def to_json(self):
        return {"type": "flip"}


class GaugeChain:
    """Ordered gauge steps; applying the chain applies the steps in order."""

    def __init__(self, steps=()):
        self.steps = tuple(steps)

    def then(self, step):
        return GaugeChain(self.steps + (step,))

    def __add__(self, other):
        return GaugeChain(self.steps + tuple(other.steps))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def matrix(self):
        P = [[_lift(1), _lift(0)], [_lift(0), _lift(1)]]
        for step in self.steps:
            P = matmul2(P, step.matrix)
        return P

    def as_linear(self):
        return GaugeLinear(self.matrix)

    def inverses(self):
        return [s.inverse() for s in self.steps]

    def inverse(self):
        return GaugeChain(reversed(self.inverses()))

    def apply(self, conn):
        for step in self.steps:
            conn = step.apply(conn)
        return conn

    def apply_table(self, table):
        for step in self.steps:
            table = step.apply_table(table)
        return table

    def describe(self):
        if not self.steps:
            return "identity"
        return " ; ".join(s.describe() for s in self.steps)

    def to_json(self):
        return [s.to_json() for s in self.steps]

    def __repr__(self):
        return f"GaugeChain({self.describe()})"


# ---------------------------------------------------------------------------
# transformations
# ---------------------------------------------------------------------------

def transform_table(table, P):
    """Tensorial transformation of a Christoffel table under ``x = P y``.

    Entries may be any exact scalars (Fraction, RadicalScalar, RatFn); no
    coordinate substitution is performed.
    """
    Q = inv2(P)
    zero = next(iter(table.values())) * 0 if table else 0
    out = {}
    for a, b, c in TRIPLES:
        total = zero
        for i, j, k in TRIPLES:
            g = table.get((i, j, k), 0)
            if _is_zero(g):
                continue
            coeff = P[i - 1][a - 1] * P[j - 1][b - 1] * Q[c - 1][k - 1]
            if _is_zero(coeff):
                continue
            total = total + coeff * g
        out[(a, b, c)] = total
    return out


def transform_torsion(t, P):
    """``det(P) P^-1 t``."""
    d = det2(P)
    Q = inv2(P)
    return tuple(d * (Q[c][0] * t[0] + Q[c][1] * t[1]) for c in range(2))


def _rational_entry(x):
    if isinstance(x, RatFn):
        return x
    x = RadicalScalar.lift(x)
    if not x.is_rational():
        raise RadicalObstruction(
            f"gauge entry {x} is irrational; use the constant-table functions instead")
    return RatFn.const(x.q)


def apply_linear(conn, g):
    """Apply a linear gauge ``x = P y`` to a connection.

    Constant (Type A) and ``c/x1`` (Type B, first matrix row ``(1, 0)``)
    connections keep their kind.  Other coefficients are substituted at
    ``x = P y`` so the result is still a correct coordinate expression.
    """
    if not isinstance(g, _Step):
        g = GaugeLinear(g)
    if conn.backend != "exact":
        return _apply_linear_numeric(conn, g)
    P = [[_rational_entry(v) for v in row] for row in g.matrix]
    ys = [RatFn.var(c) for c in COORDS]
    sub = {COORDS[i]: P[i][0] * ys[0] + P[i][1] * ys[1] for i in range(2)}
    moved = {t: v if v.is_constant() else v.subs(sub) for t, v in conn.gamma.items()}
    gamma = transform_table(moved, P)
    kind = conn.kind
    if kind is Kind.TYPE_B and not (P[0][0] == 1 and P[0][1] == 0):
        kind = Kind.GENERAL
    return Connection(gamma, kind, conn.backend, conn.params)


def _apply_linear_numeric(conn, g):
    """Numeric gauge: substitute ``x = P y`` into each coefficient expression."""
    from .connfile import _over_x1
    from .expr import BinOp, Var, linear_combination, lower_numeric, substitute

    P = [[_rational_entry(v).constant_value() for v in row] for row in g.matrix]
    Q = inv2(P)
    sub = {COORDS[i]: linear_combination([(P[i][0], Var("x1")), (P[i][1], Var("x2"))])
           for i in range(2)}
    asts, bindings = {}, {}
    for t, v in conn.gamma.items():
        if not callable(v):
            asts[t] = None
            continue
        node = v.ast
        if getattr(v, "over_x1", False):
            node = BinOp("/", node, Var("x1"))
        asts[t] = substitute(node, sub)
        bindings.update(getattr(v, "bindings", {}))
    keep_b = conn.kind is Kind.TYPE_B and P[0][0] == 1 and P[0][1] == 0
    gamma = {}
    for a, b, c in TRIPLES:
        terms = [(P[i - 1][a - 1] * P[j - 1][b - 1] * Q[c - 1][k - 1], asts[(i, j, k)])
                 for i, j, k in TRIPLES if asts[(i, j, k)] is not None]
        node = linear_combination(terms)
        if keep_b:
            gamma[(a, b, c)] = _over_x1(lower_numeric(BinOp("*", Var("x1"), node), bindings))
        else:
            gamma[(a, b, c)] = lower_numeric(node, bindings)
    kind = conn.kind
    if conn.kind is Kind.TYPE_B and not keep_b:
        kind = Kind.GENERAL
    return Connection(gamma, kind, "numeric", conn.params)


def symmetric_part(table):
    return {(i, j, k): (table[(i, j, k)] + table[(j, i, k)]) * _HALF for i, j, k in TRIPLES}


def torsion_components(table):
    return tuple((table[(1, 2, k)] - table[(2, 1, k)]) * _HALF for k in IDX)


def assemble(A, t):
    """Christoffel table with symmetric part ``A`` and torsion ``t``."""
    out = dict(A)
    for k in IDX:
        out[(1, 2, k)] = A[(1, 2, k)] + t[k - 1]
        out[(2, 1, k)] = A[(1, 2, k)] - t[k - 1]
    return out


def shear_symmetric(A, a, b):
    """Shear of a symmetric table, written out component by component."""
    A111, A112 = A[(1, 1, 1)], A[(1, 1, 2)]
    A121, A122 = A[(1, 2, 1)], A[(1, 2, 2)]
    A221, A222 = A[(2, 2, 1)], A[(2, 2, 2)]
    y = {}
    y[(1, 1, 1)] = A111 + 2 * b * A121 + b * b * A221
    y[(1, 1, 2)] = (A112 + b * (2 * A122 - A111) + b * b * (A222 - 2 * A121)
                    - b * b * b * A221) / a
    y[(1, 2, 1)] = a * (A121 + b * A221)
    y[(1, 2, 2)] = A122 + b * A222 - b * (A121 + b * A221)
    y[(2, 2, 1)] = a * a * A221
    y[(2, 2, 2)] = a * (A222 - b * A221)
    y[(2, 1, 1)] = y[(1, 2, 1)]
    y[(2, 1, 2)] = y[(1, 2, 2)]
    return y


def shear_table(table, a, b):
    """Shear a full table: symmetric part by :func:`shear_symmetric`,
    torsion by ``(a t1, t2 - b t1)``."""
    t1, t2 = torsion_components(table)
    A = shear_symmetric(symmetric_part(table), a, b)
    return assemble(A, (a * t1, t2 - b * t1))


def apply_shear_A(conn, a, b):
    """Shear a Type A connection."""
    if conn.kind is not Kind.TYPE_A:
        raise NotTypeA("apply_shear_A needs a Type A connection")
    a, b = _rational_entry(a), _rational_entry(b)
    if a.is_zero():
        raise SingularMatrix("shear with a = 0")
    return conn.replace(shear_table(conn.gamma, a, b))


def apply_axb_B(conn, a, b):
    """The ``ax+b`` map ``x2 = a y2 + b y1`` on a Type B connection."""
    if conn.kind is not Kind.TYPE_B:
        raise ValueError("apply_axb_B needs a Type B connection")
    return apply_linear(conn, GaugeShear(a, b))


def constant_table(conn):
    """The eight constants of a Type A connection as Fractions."""
    out = {}
    for t, v in conn.gamma.items():
        if not isinstance(v, RatFn):
            raise NotTypeA("numeric connections have no exact constant table")
        if not v.is_constant():
            raise NotTypeA(f"Gamma_{t[0]}{t[1]}^{t[2]} = {v} is not constant")
        out[t] = v.constant_value()
    return out


def normalize_torsion_A(conn):
    """Return ``(normalized, gauge)`` with torsion exactly ``(0, 1)``.

    ``gauge`` has second column ``t`` and first column the standard basis
    vector making ``|det|`` largest (``e1`` on ties), rescaled to ``det = 1``.
    """
    t = torsion_of(conn)
    t1, t2 = t.t1, t.t2
    if t.is_zero():
        raise ZeroTorsion("connection is torsion free")
    for v in (t1, t2):
        if isinstance(v, RatFn) and not v.is_constant():
            raise NotTypeA("torsion is not constant")
    t1 = t1.constant_value() if isinstance(t1, RatFn) else t1
    t2 = t2.constant_value() if isinstance(t2, RatFn) else t2
    g = torsion_gauge((t1, t2))
    return apply_linear(conn, g), g


def torsion_gauge(t):
    """The deterministic normalizing matrix for a torsion vector ``t``."""
    t1, t2 = (RadicalScalar.lift(v) for v in t)
    d1, d2 = t2, -t1   # det[e1, t], det[e2, t]
    if d1 and d1 * d1 >= d2 * d2:
        e = (1 / d1, RadicalScalar(0))
    else:
        e = (RadicalScalar(0), 1 / d2)
    return GaugeLinear(((e[0], t1), (e[1], t2)))
