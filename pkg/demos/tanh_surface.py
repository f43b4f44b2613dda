"""
A surface of cohomogeneity one
==============================

Gamma_12^2 = f(x1), Gamma_21^2 = -f(x1).  Then rho_11 = f' + f^2 and every
other Ricci component vanishes, so rho = dx1⊗dx1 exactly when f' + f^2 = 1.
f = tanh solves this; f = tanh/2 does not.  Evaluated numerically on the
sample grid.
"""

import math

from affsurf import cov_deriv_ricci, cov_deriv_torsion, is_affine_killing, make, parse_text, ricci_of
from affsurf.connection import SAMPLE_GRID
from affsurf.expr import lower_numeric, parse

half = make("example1")
full = parse_text("backend: numeric\nGamma 1 2 2 = tanh(x1)\nGamma 2 1 2 = -tanh(x1)\n")

for name, conn in (("f = tanh/2", half), ("f = tanh", full)):
    print(name)
    for p in SAMPLE_GRID[:4]:
        rho = ricci_of(conn, at=p).values()
        nrho = max(abs(v) for v in cov_deriv_ricci(conn, at=p).values().values())
        nT = cov_deriv_torsion(conn, at=p).values()
        print(f"  at {p}: rho_11 = {rho[(1, 1)]:.6f}  max|nabla rho| = {nrho:.2e}  "
              f"T^2_;1 = {nT[(2, 1)]:.6f}  sech^2 x1 = {math.cosh(p[0]) ** -2:.6f}")

# affine Killing fields
fields = {"d/dx1": ("1", "0"), "d/dx2": ("0", "1"), "x1 d/dx2": ("0", "x1"), "x2 d/dx2": ("0", "x2")}
for name, comps in fields.items():
    X = [lower_numeric(parse(c)) for c in comps]
    print(f"{name:9s} Killing for tanh/2: {is_affine_killing(half, X)}, for tanh: {is_affine_killing(full, X)}")
