"""Decision procedures for homogeneous symmetric surfaces with torsion.

:func:`classify` reduces a Type A or Type B connection to one of the normal
forms listed in :mod:`affsurf.catalog` and returns the gauge chain that does
it.  All case distinctions are exact equality tests on rational (or single
square-root) numbers, so no tolerance is involved.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .connection import (TRIPLES, Kind, cov_deriv_ricci, cov_deriv_torsion,
                         ricci_of, symmetrize, torsion_of)
from .errors import (InconsistentCase, NotHomogeneousModel, NotSymmetric,
                     NotSymmetricMatrix, NotTypeA, ParameterDependentSign,
                     TorsionFree)
from .gauge import (Flip, GaugeChain, GaugeLinear, GaugeShear, constant_table,
                    symmetric_part, torsion_components, torsion_gauge,
                    transform_table)
from .scalars import RadicalScalar, RatFn

R = RadicalScalar
ZERO, ONE, HALF = R(0), R(1), R(Fraction(1, 2))

SIGNATURE_CLASSES = ("zero", "positive-semidefinite", "negative-semidefinite",
                     "positive-definite", "negative-definite", "indefinite")


@dataclass(frozen=True)
class SignatureInfo:
    rank: int
    cls: str

    def __str__(self):
        return f"{self.cls} (rank {self.rank})"


@dataclass(frozen=True)
class ParallelSpaceDim:
    dim: int
    basis: tuple = ()
    commutator: tuple = ()


@dataclass
class ClassificationResult:
    theorem: str
    family: int
    params: dict
    signature: SignatureInfo
    witness: GaugeChain = None
    notes: list = field(default_factory=list)

    def key(self):
        return (self.theorem, self.family, tuple(sorted(self.params.items())))

    def summary(self):
        ps = ", ".join(f"{k} = {_signed(k, v)}" for k, v in self.params.items())
        head = f"{self.theorem} family {self.family}"
        return f"{head}, {ps}" if ps else head

    def to_json(self):
        return {
            "theorem": self.theorem,
            "family": self.family,
            "params": {k: str(v) for k, v in self.params.items()},
            "signature": {"rank": self.signature.rank, "class": self.signature.cls},
            "witness": None if self.witness is None else self.witness.to_json(),
            "notes": list(self.notes),
        }


def _signed(name, v):
    if name in ("v", "epsilon") and v > 0:
        return f"+{v}"
    return str(v)


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------

def _concrete(x):
    """RatFn / Fraction / int -> RadicalScalar, refusing free symbols."""
    if isinstance(x, RadicalScalar):
        return x
    if isinstance(x, RatFn):
        if not x.is_constant():
            raise ParameterDependentSign(f"{x} depends on {', '.join(sorted(x.free_symbols()))}")
        return R(x.constant_value())
    return R(Fraction(x))


def signature_of(rho):
    """Rank and signature class of a symmetric 2x2 matrix (or RicciTensor)."""
    m = rho.matrix() if hasattr(rho, "matrix") else rho
    m = [[_concrete(v) for v in row] for row in m]
    if m[0][1] != m[1][0]:
        raise NotSymmetricMatrix(f"rho_12 = {m[0][1]} but rho_21 = {m[1][0]}")
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    tr = m[0][0] + m[1][1]
    if det > 0:
        return SignatureInfo(2, "positive-definite" if tr > 0 else "negative-definite")
    if det < 0:
        return SignatureInfo(2, "indefinite")
    if all(not v for row in m for v in row):
        return SignatureInfo(0, "zero")
    return SignatureInfo(1, "positive-semidefinite" if tr > 0 else "negative-semidefinite")


# ---------------------------------------------------------------------------
# parallel abstract torsion
# ---------------------------------------------------------------------------

def _nullspace(rows, n=2):
    """Basis of {w : r.w = 0 for all rows} over the rationals."""
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        w = [Fraction(0)] * n
        w[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            w[pc] = -m[i][free]
        basis.append(tuple(w))
    return basis


def _rowspace(rows, n=2):
    """Independent rows spanning the same space (via the complement)."""
    ker = _nullspace(rows, n)
    return _nullspace(ker, n) if ker else [tuple(Fraction(int(i == j)) for j in range(n))
                                           for i in range(n)]


def torsion_parallel_matrices(table):
    """``(A_i)^k_m = -Gamma_im^k + (Gamma_i1^1 + Gamma_i2^2) delta^k_m``."""
    mats = []
    for i in (1, 2):
        tr = table[(i, 1, 1)] + table[(i, 2, 2)]
        mats.append([[-table[(i, m, k)] + (tr if k == m else 0) for m in (1, 2)] for k in (1, 2)])
    return mats


def _mm(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def parallel_torsion_dim(conn):
    """Dimension of the space of parallel abstract torsion tensors (Type A)."""
    if conn.kind is not Kind.TYPE_A:
        raise NotTypeA("parallel_torsion_dim is only defined for Type A connections")
    table = constant_table(conn)
    A1, A2 = torsion_parallel_matrices(table)
    C = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(_mm(A1, A2), _mm(A2, A1))]
    annihilator = []          # rows cutting out the current W
    while True:
        rows = list(annihilator) + [list(r) for r in C]
        for Ai in (A1, A2):
            rows += [[sum(n[k] * Ai[k][m] for k in range(2)) for m in range(2)] for n in annihilator]
        new = _rowspace(rows) if any(any(r) for r in rows) else []
        if len(new) == len(annihilator):
            break
        annihilator = new
    basis = tuple(_nullspace(annihilator)) if annihilator else (
        (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    return ParallelSpaceDim(len(basis), basis, tuple(tuple(r) for r in C))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _tilde_table(conn):
    x1 = RatFn.var("x1")
    out = {}
    for t, v in conn.gamma.items():
        c = x1 * v
        if not c.is_constant():
            raise NotHomogeneousModel(f"x1*Gamma_{t[0]}{t[1]}^{t[2]} = {c} is not constant")
        out[t] = c.constant_value()
    return out


def _check_homogeneous(conn):
    if conn.backend != "exact":
        raise NotHomogeneousModel("classification needs an exact connection")
    for v in conn.gamma.values():
        if v.free_symbols() - {"x1", "x2"}:
            raise ParameterDependentSign("classification needs concrete parameter values")
    if conn.kind is Kind.TYPE_A:
        try:
            constant_table(conn)
        except NotTypeA as exc:
            raise NotHomogeneousModel(str(exc)) from None
    elif conn.kind is Kind.TYPE_B:
        _tilde_table(conn)
    else:
        raise NotHomogeneousModel("only Type A and Type B connections are classified")


def _base_matrix(tensor_matrix, kind):
    """Constant matrix of a tensor at the base point ``x1 = 1``."""
    one = RatFn.const(1)
    out = []
    for row in tensor_matrix:
        out.append([_concrete(v.subs({"x1": one}) if kind is Kind.TYPE_B else v) for v in row])
    return out


def classify(conn):
    """Identify the normal form of a homogeneous symmetric surface with torsion."""
    _check_homogeneous(conn)
    if torsion_of(conn).is_zero():
        raise TorsionFree("torsion vanishes: torsion-free symmetric surfaces are the "
                          "Type A models thm1-5 / thm1-6 (and the metric models) of the catalog")
    if not cov_deriv_ricci(conn).is_zero():
        raise NotSymmetric("the Ricci tensor is not parallel")
    rho = _base_matrix(ricci_of(conn).matrix(), conn.kind)
    sig = signature_of(rho)
    if cov_deriv_torsion(conn).is_zero():
        return _parallel_torsion(conn, rho, sig)
    if conn.kind is Kind.TYPE_A:
        table = {t: R(v) for t, v in constant_table(conn).items()}
        return _finish("thm4", *_thm4(table), sig, table)
    table = {t: R(v) for t, v in _tilde_table(conn).items()}
    return _finish("thm5", *_thm5(table), sig, table)


def _finish(theorem, family, params, chain, notes, sig, table):
    from .catalog import family_table
    reached = chain.apply_table(table)
    expected = family_table(theorem, family, params)
    bad = [t for t in TRIPLES if reached[t] != expected[t]]
    if bad:
        raise InconsistentCase(
            f"{theorem} family {family}: witness does not reach the normal form at "
            + ", ".join(f"Gamma_{i}{j}^{k}" for i, j, k in bad))
    name = {"thm4": "Thm4", "thm5": "Thm5"}[theorem]
    return ClassificationResult(name, family, params, sig, chain, notes)


class _Run:
    """Table plus the gauge chain that produced it."""

    def __init__(self, table, chain=None):
        self.table = table
        self.chain = chain or GaugeChain()

    def apply(self, step):
        self.table = step.apply_table(self.table)
        self.chain = self.chain.then(step)

    def shear(self, a=ONE, b=ZERO):
        if a == ONE and not b:
            return
        self.apply(GaugeShear(a, b))

    @property
    def A(self):
        return symmetric_part(self.table)

    @property
    def T(self):
        return torsion_components(self.table)


def _inv_sqrt_abs(x):
    return 1 / R.sqrt(abs(x.to_fraction()))


def _thm4(table):
    run = _Run(table)
    run.apply(torsion_gauge(run.T))
    notes = []
    A = run.A
    if not A[(2, 2, 1)]:
        if A[(2, 2, 2)]:
            run.shear(a=1 / A[(2, 2, 2)])
            A = run.A
            if not A[(1, 2, 1)]:
                run.shear(b=-A[(1, 2, 2)])
                A = run.A
                return 1, {"gamma": A[(1, 1, 1)]}, run.chain, notes
            if A[(1, 2, 1)] == ONE:
                run.shear(b=-A[(1, 1, 1)] / 2)
                A = run.A
                return 2, {"alpha": A[(1, 1, 2)]}, run.chain, notes
            raise InconsistentCase(f"A_12^1 = {A[(1, 2, 1)]} after scaling A_22^2 to 1")
        if A[(1, 2, 1)]:
            raise InconsistentCase("A_22^* = 0 forces A_12^1 = 0")
        if A[(1, 2, 2)] == A[(1, 1, 1)] - 1:
            if A[(1, 1, 1)] != 2:
                run.shear(b=-A[(1, 1, 2)] / (A[(1, 1, 1)] - 2))
                return 3, {"gamma": run.A[(1, 1, 1)]}, run.chain, notes
            if A[(1, 1, 2)]:
                run.shear(a=A[(1, 1, 2)])
                return 4, {}, run.chain, notes
            return 3, {"gamma": R(2)}, run.chain, notes
        if A[(1, 2, 2)] == ONE:
            run.shear(b=-A[(1, 1, 2)] / (2 - A[(1, 1, 1)]))
            return 5, {"beta": run.A[(1, 1, 1)]}, run.chain, notes
        raise InconsistentCase("A_12^2 is neither A_11^1 - 1 nor 1")
    run.shear(b=-A[(1, 2, 1)] / A[(2, 2, 1)])
    A = run.A
    run.shear(a=_inv_sqrt_abs(A[(2, 2, 1)]))
    A = run.A
    if A[(2, 2, 2)] < 0:
        run.apply(Flip())
        notes.append("applied x2 -> -x2 to make eta >= 0")
        A = run.A
    eps = R(A[(2, 2, 1)].sign())
    return 6, {"omega": A[(1, 1, 1)], "epsilon": eps, "eta": A[(2, 2, 2)]}, run.chain, notes


def _thm5(table):
    run = _Run(table)
    notes = []
    A, T = run.A, run.T
    if A[(1, 2, 1)] != T[0] - A[(2, 2, 2)]:
        raise InconsistentCase("the symmetric-Ricci relation A~_12^1 = T~^1 - A~_22^2 fails")
    if not A[(2, 2, 1)] and A[(2, 2, 2)]:
        run.shear(a=1 / A[(2, 2, 2)])
        A, T = run.A, run.T
        run.shear(b=-(A[(1, 2, 2)] + T[1]))
        return 1, {"xi": run.table[(1, 1, 2)]}, run.chain, notes
    if not A[(2, 2, 1)]:
        if A[(1, 2, 2)] != T[1]:
            if A[(1, 1, 2)]:
                if A[(1, 1, 1)] != 2 * T[1] - 2:
                    run.shear(b=-A[(1, 1, 2)] / (2 * A[(1, 2, 2)] - A[(1, 1, 1)]))
                else:
                    run.shear(a=A[(1, 1, 2)])
                    return 3, {"beta": run.T[1]}, run.chain, notes
            A, T = run.A, run.T
            return 2, {"eta": A[(1, 1, 1)], "delta": T[1]}, run.chain, notes
        if T[0]:
            run.shear(b=-A[(1, 1, 1)] / (2 * T[0]))
            run.shear(a=1 / (2 * run.A[(1, 2, 1)]))
            A, T = run.A, run.T
            return 4, {"xi": A[(1, 1, 2)], "beta": T[1]}, run.chain, notes
        if A[(1, 1, 2)]:
            if A[(1, 1, 1)] != 2 * T[1]:
                run.shear(b=-A[(1, 1, 2)] / (2 * A[(1, 2, 2)] - A[(1, 1, 1)]))
            else:
                run.shear(a=A[(1, 1, 2)])
                return 6, {"beta": run.T[1]}, run.chain, notes
        A, T = run.A, run.T
        return 5, {"xi": A[(1, 1, 1)], "beta": T[1]}, run.chain, notes
    run.shear(b=A[(2, 2, 2)] / A[(2, 2, 1)])
    run.shear(a=_inv_sqrt_abs(run.A[(2, 2, 1)]))
    if run.T[0] < 0:
        run.apply(Flip())
        notes.append("applied x2 -> -x2 to make alpha >= 0")
    A, T = run.A, run.T
    eps = R(A[(2, 2, 1)].sign())
    alpha = T[0]
    if A[(1, 2, 2)] == T[1]:
        if T[1] == -HALF:
            return 7, {"xi": A[(1, 1, 1)], "alpha": alpha, "epsilon": eps}, run.chain, notes
        return 8, {"gamma": T[1], "alpha": alpha, "epsilon": eps}, run.chain, notes
    return 9, {"alpha": alpha, "gamma": T[1], "epsilon": eps}, run.chain, notes


# -- parallel torsion -------------------------------------------------------

def _parallel_torsion(conn, rho, sig):
    notes = []
    if sig.rank == 0:
        witness = _thm2_witness(conn, None) if conn.kind is Kind.TYPE_A else None
        if witness is None:
            notes.append("no linear witness (Type B input or non-linear equivalence)")
        return ClassificationResult("Thm2", 1, {}, sig, witness, notes)
    if sig.rank != 1:
        raise InconsistentCase("parallel nonzero torsion forces rank(rho) <= 1")
    v = R(1) if sig.cls == "positive-semidefinite" else R(-1)
    rho0 = _base_matrix(ricci_of(symmetrize(conn)).matrix(), conn.kind)
    (j, k) = next((j, k) for j in range(2) for k in range(2) if rho[j][k])
    lam = rho0[j][k] / rho[j][k]
    for jj in range(2):
        for kk in range(2):
            if rho0[jj][kk] != lam * rho[jj][kk]:
                raise InconsistentCase("rho of the symmetrization is not proportional to rho")
    u2 = v * (1 - lam)
    if not u2.is_rational() or u2.to_fraction() <= 0:
        raise InconsistentCase(f"u^2 = {u2} is not a positive rational")
    u = R.sqrt(u2.to_fraction())
    params = {"u": u, "v": v}
    witness = None
    if conn.kind is Kind.TYPE_A:
        witness = _thm2_witness(conn, params)
    if witness is None:
        notes.append("no linear witness (Type B input or non-linear equivalence)")
    res = ClassificationResult("Thm2", 2, params, sig, witness, notes)
    res.notes.append(f"u^2 = {u2}")
    return res


def _thm2_witness(conn, params):
    """Linear gauge onto M_{u,v} when one exists, else None."""
    from .catalog import family_table
    table = {t: R(v) for t, v in constant_table(conn).items()}
    t = [R(x) for x in torsion_components(table)]

    def nabla(w, z):
        return [sum((w[i - 1] * z[j - 1] * table[(i, j, k)] for i in (1, 2) for j in (1, 2)), ZERO)
                for k in (1, 2)]

    ntt = nabla(t, t)
    if ntt[0] * t[1] != ntt[1] * t[0]:
        return None
    c = ntt[0] / t[0] if t[0] else ntt[1] / t[1]
    if not c:
        return None
    e1 = [x / c for x in t]                        # nabla_{e1} e1 = e1
    rows = [[nabla([R(1), ZERO], t)[k], nabla([ZERO, R(1)], t)[k]] for k in range(2)]
    if rows[0][0] * rows[1][1] != rows[0][1] * rows[1][0]:
        return None
    if rows[0][0] or rows[0][1]:
        k2 = [-rows[0][1], rows[0][0]]
    else:
        k2 = [-rows[1][1], rows[1][0]]
    if e1[0] * k2[1] - e1[1] * k2[0] == 0:
        return None
    base = transform_table(table, [[e1[0], k2[0]], [e1[1], k2[1]]])
    c12 = base[(1, 2, 1)]
    if params is None:
        if not c12:
            return None
        mus = [2 / c12]
        target = family_table("thm2", 1, {})
    else:
        r22 = base[(2, 2, 1)]
        if not r22:
            return None
        mus = []
        q = r22 * params["v"]
        if q.is_rational() and q.to_fraction() > 0:
            m = 1 / R.sqrt(q.to_fraction())
            mus = [m, -m]
        target = family_table("thm2", 2, params)
    for mu in mus:
        P = [[e1[0], mu * k2[0]], [e1[1], mu * k2[1]]]
        try:
            out = transform_table(table, P)
        except ArithmeticError:
            continue
        if all(out[x] == target[x] for x in TRIPLES):
            return GaugeChain([GaugeLinear(P)])
    return None
