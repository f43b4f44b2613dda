"""Independent sympy implementations used as test oracles."""

from itertools import product

import sympy as sp

X1, X2 = sp.symbols("x1 x2")
XS = (X1, X2)
I2 = (1, 2)


def from_ratfn(f, symbols=None):
    env = {"x1": X1, "x2": X2}
    env.update(symbols or {})
    return sp.sympify(f.to_str().replace("^", "**"), locals=env)


def gamma_sympy(conn, symbols=None):
    return {t: from_ratfn(v, symbols) for t, v in conn.gamma.items()}


def curvature(G):
    """R[(i, j, k, l)] with R(d_i, d_j) d_k = R_ijk^l d_l."""
    R = {}
    for i, j, k, l in product(I2, repeat=4):
        v = sp.diff(G[(j, k, l)], XS[i - 1]) - sp.diff(G[(i, k, l)], XS[j - 1])
        v += sum(G[(i, m, l)] * G[(j, k, m)] - G[(j, m, l)] * G[(i, k, m)] for m in I2)
        R[(i, j, k, l)] = sp.cancel(v)
    return R


def ricci(G):
    R = curvature(G)
    return {(j, k): sp.cancel(sum(R[(i, j, k, i)] for i in I2)) for j in I2 for k in I2}


def nabla_ricci(G):
    rho = ricci(G)
    return {(j, k, i): sp.cancel(sp.diff(rho[(j, k)], XS[i - 1])
                                 - sum(G[(i, j, m)] * rho[(m, k)] + G[(i, k, m)] * rho[(j, m)]
                                       for m in I2))
            for j, k, i in product(I2, repeat=3)}


def torsion(G):
    return tuple(sp.cancel((G[(1, 2, k)] - G[(2, 1, k)]) / 2) for k in I2)


def nabla_torsion(G, S=None):
    """[(k, i)] = S^k_;i for the 2-form valued vector field S (dx1 ^ dx2) (x) S^k d_k."""
    S = S or torsion(G)
    out = {}
    for k, i in product(I2, repeat=2):
        v = sp.diff(S[k - 1], XS[i - 1]) + sum(G[(i, m, k)] * S[m - 1] for m in I2)
        v -= (G[(i, 1, 1)] + G[(i, 2, 2)]) * S[k - 1]
        out[(k, i)] = sp.cancel(v)
    return out


def parallel_torsion_dim_series(G, order=3):
    """Dimension of {S(0) : S a polynomial solution of nabla S = 0 mod degree ``order``}.

    Constant Christoffel symbols only.  Each S^k is a polynomial of degree
    ``order`` with unknown coefficients; the coefficients of the equations up
    to degree ``order - 1`` are set to zero, and the dimension of the space of
    admissible initial values S(0) is returned.
    """
    monos = [(a, b) for a in range(order + 1) for b in range(order + 1 - a)]
    coef = {(k, m): sp.Symbol(f"c{k}_{m[0]}{m[1]}") for k in I2 for m in monos}
    S = [sum(coef[(k, m)] * X1 ** m[0] * X2 ** m[1] for m in monos) for k in I2]
    eqs = []
    for expr in nabla_torsion(G, S).values():
        poly = sp.Poly(sp.expand(expr), X1, X2)
        for (a, b), c in poly.terms():
            if a + b <= order - 1:
                eqs.append(c)
    unknowns = list(coef.values())
    M = sp.Matrix([[sp.diff(e, u) for u in unknowns] for e in eqs]) if eqs else sp.zeros(0, len(unknowns))
    null = M.nullspace()
    initial = [unknowns.index(coef[(k, (0, 0))]) for k in I2]
    if not null:
        return 0
    return sp.Matrix([[v[i] for i in initial] for v in null]).rank()


def _bracket(X, Y):
    return [sum(X[m] * sp.diff(Y[l], XS[m]) - Y[m] * sp.diff(X[l], XS[m]) for m in range(2))
            for l in range(2)]


def _nabla(G, Y, Z):
    return [sum(Y[j] * sp.diff(Z[l], XS[j]) for j in range(2))
            + sum(Y[j] * Z[k] * G[(j + 1, k + 1, l + 1)] for j in range(2) for k in range(2))
            for l in range(2)]


def lie_derivative(G, X):
    """(L_X nabla)(Y, Z) = [X, nabla_Y Z] - nabla_[X,Y] Z - nabla_Y [X, Z] on coordinate fields."""
    basis = ([1, 0], [0, 1])
    out = {}
    for j, k in product(I2, repeat=2):
        Y, Z = basis[j - 1], basis[k - 1]
        first = _bracket(X, _nabla(G, Y, Z))
        second = _nabla(G, _bracket(X, Y), Z)
        third = _nabla(G, Y, _bracket(X, Z))
        for l in I2:
            out[(j, k, l)] = sp.simplify(first[l - 1] - second[l - 1] - third[l - 1])
    return out
