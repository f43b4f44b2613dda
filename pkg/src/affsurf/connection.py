"""Connections on surfaces and their tensors.

Christoffel symbols are indexed from 1 as in ``nabla_{d_i} d_j = Gamma_ij^k d_k``;
the direction of differentiation is always the *first* lower index.  The
exact backend stores :class:`~affsurf.scalars.RatFn` coefficients; the numeric
backend stores callables ``(x1, x2) -> Jet2`` and evaluates every tensor at a
point.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

from .errors import BaseNotTorsionFree
from .expr import lower_numeric
from .jets import Jet2
from .scalars import COORDS, RatFn

IDX = (1, 2)
TRIPLES = tuple(product(IDX, IDX, IDX))

#: vanishing threshold for numeric tensors
NUMERIC_TOL = 1e-9

#: 10-point sample grid inside (0.5, 2) x (-1, 1); x1 > 0 keeps Type B finite
SAMPLE_GRID = tuple((a, b) for a in (0.6, 0.9, 1.2, 1.5, 1.8) for b in (-0.5, 0.5))


class Kind(str, Enum):
    TYPE_A = "A"
    TYPE_B = "B"
    GENERAL = "general"


@dataclass(frozen=True)
class Connection:
    """Eight Christoffel symbols plus bookkeeping.

    ``gamma[(i, j, k)]`` is ``Gamma_ij^k``.  Missing keys are zero.
    """

    gamma: dict
    kind: Kind = Kind.GENERAL
    backend: str = "exact"
    params: tuple = ()

    def __post_init__(self):
        full = {}
        for t in TRIPLES:
            v = self.gamma.get(t, 0)
            if self.backend == "exact" and not isinstance(v, RatFn):
                v = RatFn.const(v)
            full[t] = v
        object.__setattr__(self, "gamma", full)
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "params", tuple(self.params))

    def __getitem__(self, idx):
        return self.gamma[idx]

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        if self.backend != "exact" or other.backend != "exact":
            return self is other
        return all(self.gamma[t] == other.gamma[t] for t in TRIPLES)

    def __hash__(self):
        return hash(tuple(self.gamma[t] for t in TRIPLES)) if self.backend == "exact" else id(self)

    def replace(self, gamma=None, kind=None):
        return Connection(gamma if gamma is not None else self.gamma,
                          kind if kind is not None else self.kind,
                          self.backend, self.params)

    def tilde(self):
        """``x1 * Gamma`` -- the constant table of a Type B connection."""
        x1 = RatFn.var("x1")
        return {t: x1 * v for t, v in self.gamma.items()}

    def jets(self, at):
        """Numeric backend: the eight symbols as jets at ``at``."""
        if self.backend != "numeric":
            x1, x2 = at
            return {t: _ratfn_jet(v, at) for t, v in self.gamma.items()}
        return {t: (v(*at) if callable(v) else Jet2.constant(float(v)))
                for t, v in self.gamma.items()}

    def to_numeric(self, param_values=None):
        """Numeric copy of an exact connection (parameters bound to floats)."""
        from .expr import ratfn_to_ast
        gamma = {t: lower_numeric(ratfn_to_ast(v), param_values) for t, v in self.gamma.items()}
        return Connection(gamma, self.kind, "numeric", self.params)


def _ratfn_jet(f, at):
    from .expr import lower_numeric, ratfn_to_ast
    return lower_numeric(ratfn_to_ast(f))(*at)


# ---------------------------------------------------------------------------
# tensor value types
# ---------------------------------------------------------------------------

def _is_zero(v, tol):
    if isinstance(v, Jet2):
        return abs(v.value) < tol
    if isinstance(v, RatFn):
        return v.is_zero()
    return abs(v) < tol if isinstance(v, float) else v == 0


@dataclass(frozen=True)
class _Components:
    comps: dict = field(default_factory=dict)

    def __getitem__(self, idx):
        return self.comps[idx]

    def items(self):
        return self.comps.items()

    def is_zero(self, tol=NUMERIC_TOL):
        return all(_is_zero(v, tol) for v in self.comps.values())

    def map(self, fn):
        return type(self)({k: fn(v) for k, v in self.comps.items()})

    def values(self):
        """Plain floats (numeric) or the exact components."""
        return {k: (v.value if isinstance(v, Jet2) else v) for k, v in self.comps.items()}

    def at_x1_equal_1(self):
        return self.map(lambda v: v.subs({"x1": RatFn.const(1)}))

    def scaled(self, factor):
        return self.map(lambda v: v * factor)


class CurvatureTensor(_Components):
    """``R[(i, j, k, l)]``: ``R(d_i, d_j) d_k = R_ijk^l d_l``."""


class RicciTensor(_Components):
    """``rho[(j, k)] = R_ijk^i``."""

    def matrix(self):
        return [[self.comps[(j, k)] for k in IDX] for j in IDX]


class CovDerivRicci(_Components):
    """``[(j, k, i)] = rho_{jk;i}``."""


class CovDerivTorsion(_Components):
    """``[(k, i)] = S^k_{;i}``: row ``k`` is the component, column ``i`` the direction."""

    def matrix(self):
        return [[self.comps[(k, i)] for i in IDX] for k in IDX]

    def direction_major(self):
        """Transposed layout ``[i][k]`` as displayed in the Type A/B family tables."""
        return [[self.comps[(k, i)] for k in IDX] for i in IDX]


@dataclass(frozen=True)
class TorsionField:
    """``T = (dx1 ^ dx2) (x) (t1 d_x1 + t2 d_x2)``."""

    t1: object
    t2: object

    def __iter__(self):
        return iter((self.t1, self.t2))

    def __getitem__(self, k):
        return (self.t1, self.t2)[k - 1]

    def is_zero(self, tol=NUMERIC_TOL):
        return _is_zero(self.t1, tol) and _is_zero(self.t2, tol)


class AbstractTorsion(TorsionField):
    """An element ``S`` of the space of 2-form valued vector fields."""


@dataclass(frozen=True)
class VectorField:
    v1: object
    v2: object

    def __getitem__(self, k):
        return (self.v1, self.v2)[k - 1]


# ---------------------------------------------------------------------------
# backend plumbing
# ---------------------------------------------------------------------------

def _gammas(conn, at):
    """Return (gamma values, derivative function, zero) for either backend."""
    if conn.backend == "numeric":
        if at is None:
            raise ValueError("numeric connections are evaluated at a point: pass at=(x1, x2)")
        g = conn.jets(at)
        return g, (lambda f, i: f.diff(i)), Jet2.constant(0.0)
    if at is not None:
        return conn.jets(at), (lambda f, i: f.diff(i)), Jet2.constant(0.0)
    return conn.gamma, (lambda f, i: f.diff(COORDS[i - 1])), RatFn.const(0)


def _field_values(values, at, backend):
    """Lift abstract-torsion / vector components to the working backend."""
    out = []
    for v in values:
        if at is None:
            out.append(v if isinstance(v, RatFn) else RatFn.const(v))
        elif isinstance(v, Jet2):
            out.append(v)
        elif callable(v):
            out.append(v(*at))
        elif isinstance(v, RatFn):
            out.append(_ratfn_jet(v, at))
        else:
            out.append(Jet2.constant(float(v)))
    return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def torsion_of(conn, at=None):
    """``t^k = (Gamma_12^k - Gamma_21^k) / 2``."""
    g, _, _ = _gammas(conn, at)
    half = 0.5 if isinstance(g[(1, 1, 1)], Jet2) else RatFn.const(1) / 2
    return TorsionField(*((g[(1, 2, k)] - g[(2, 1, k)]) * half for k in IDX))


def symmetrize(conn):
    """The torsion-free connection with symbols ``(Gamma_ij^k + Gamma_ji^k)/2``."""
    if conn.backend != "exact":
        gamma = {}
        for (i, j, k) in TRIPLES:
            a, b = conn.gamma[(i, j, k)], conn.gamma[(j, i, k)]
            gamma[(i, j, k)] = _average(a, b)
        return Connection(gamma, conn.kind, conn.backend, conn.params)
    gamma = {(i, j, k): (conn.gamma[(i, j, k)] + conn.gamma[(j, i, k)]) / 2
             for (i, j, k) in TRIPLES}
    return conn.replace(gamma)


def _average(a, b):
    def fn(x1, x2):
        ja = a(x1, x2) if callable(a) else Jet2.constant(float(a))
        jb = b(x1, x2) if callable(b) else Jet2.constant(float(b))
        return (ja + jb) * 0.5
    return fn


def realize_torsion(base, s):
    """Perturb a torsion-free connection so that its torsion is ``s``."""
    if base.backend != "exact":
        raise NotImplementedError("torsion realization is implemented for the exact backend")
    if not torsion_of(base).is_zero():
        raise BaseNotTorsionFree("the base connection has torsion")
    s1, s2 = _field_values(s, None, "exact")
    gamma = dict(base.gamma)
    for k, sk in ((1, s1), (2, s2)):
        gamma[(1, 2, k)] = base.gamma[(1, 2, k)] + sk
        gamma[(2, 1, k)] = base.gamma[(1, 2, k)] - sk
    return base.replace(gamma)


def curvature_of(conn, at=None):
    """``R_ijk^l = d_i G_jk^l - d_j G_ik^l + G_im^l G_jk^m - G_jm^l G_ik^m``."""
    g, d, zero = _gammas(conn, at)
    dg = {(n, t): d(g[t], n) for n in IDX for t in TRIPLES}
    out = {}
    for i, j, k, l in product(IDX, repeat=4):
        if i == j:
            out[(i, j, k, l)] = zero
            continue
        if (j, i, k, l) in out:
            out[(i, j, k, l)] = -out[(j, i, k, l)]
            continue
        v = dg[(i, (j, k, l))] - dg[(j, (i, k, l))]
        for m in IDX:
            v = v + g[(i, m, l)] * g[(j, k, m)] - g[(j, m, l)] * g[(i, k, m)]
        out[(i, j, k, l)] = v
    return CurvatureTensor(out)


def ricci_of(conn, at=None, curvature=None):
    """``rho_jk = R_ijk^i``."""
    R = curvature if curvature is not None else curvature_of(conn, at)
    return RicciTensor({(j, k): R[(1, j, k, 1)] + R[(2, j, k, 2)] for j in IDX for k in IDX})


def cov_deriv_ricci(conn, at=None):
    """``rho_{jk;i} = d_i rho_jk - G_ij^m rho_mk - G_ik^m rho_jm``."""
    g, d, _ = _gammas(conn, at)
    rho = ricci_of(conn, at)
    out = {}
    for j, k, i in product(IDX, repeat=3):
        v = d(rho[(j, k)], i)
        for m in IDX:
            v = v - g[(i, j, m)] * rho[(m, k)] - g[(i, k, m)] * rho[(j, m)]
        out[(j, k, i)] = v
    return CovDerivRicci(out)


def cov_deriv_torsion(conn, s=None, at=None):
    """Covariant derivative of an abstract torsion tensor (default: the torsion).

    ``S^k_{;i} = d_i S^k + G_im^k S^m - (G_i1^1 + G_i2^2) S^k``; the last term
    differentiates the ``dx1 ^ dx2`` factor.
    """
    g, d, _ = _gammas(conn, at)
    if s is None:
        s = torsion_of(conn, at)
        comps = [s.t1, s.t2]
    else:
        comps = _field_values(s, at, conn.backend)
    out = {}
    for k, i in product(IDX, IDX):
        v = d(comps[k - 1], i)
        trace = g[(i, 1, 1)] + g[(i, 2, 2)]
        for m in IDX:
            v = v + g[(i, m, k)] * comps[m - 1]
        out[(k, i)] = v - trace * comps[k - 1]
    return CovDerivTorsion(out)


def is_symmetric_surface(conn, points=SAMPLE_GRID, tol=NUMERIC_TOL):
    """``grad(rho) == 0`` identically (exact) or at every sample point (numeric)."""
    if conn.backend == "exact":
        return cov_deriv_ricci(conn).is_zero()
    return all(cov_deriv_ricci(conn, at=p).is_zero(tol) for p in points)


def lie_derivative_of_connection(conn, x, at=None):
    """Components ``(L_X nabla)_jk^l`` of the Lie derivative of the connection.

    ``X^m d_m G_jk^l - G_jk^m d_m X^l + d_j X^m G_mk^l + d_k X^m G_jm^l + d_j d_k X^l``
    """
    g, d, _ = _gammas(conn, at)
    X = _field_values(x, at, conn.backend)
    dX = {(m, l): d(X[l - 1], m) for m in IDX for l in IDX}
    out = {}
    for j, k, l in TRIPLES:
        v = d(dX[(k, l)], j)
        for m in IDX:
            v = (v + X[m - 1] * d(g[(j, k, l)], m) - g[(j, k, m)] * dX[(m, l)]
                 + dX[(j, m)] * g[(m, k, l)] + dX[(k, m)] * g[(j, m, l)])
        out[(j, k, l)] = v
    return out


def is_affine_killing(conn, x, points=SAMPLE_GRID, tol=NUMERIC_TOL):
    """True iff all eight components of ``L_X nabla`` vanish."""
    if conn.backend == "exact" and not any(callable(v) for v in x):
        return all(_is_zero(v, 0) for v in lie_derivative_of_connection(conn, x).values())
    return all(_is_zero(v, tol)
               for p in points
               for v in lie_derivative_of_connection(conn, x, at=p).values())


def numeric_rank(matrix, tol=NUMERIC_TOL):
    m = np.array([[float(v.value if isinstance(v, Jet2) else v) for v in row] for row in matrix])
    return int(np.linalg.matrix_rank(m, tol=tol))
