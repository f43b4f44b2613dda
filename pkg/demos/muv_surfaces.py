"""
The two-parameter surfaces M(u, v)
===================================

Torsion, Ricci tensor and the space of parallel torsion tensors for a few
members of the family, computed exactly.
"""

from affsurf import (cov_deriv_ricci, cov_deriv_torsion, make, parallel_torsion_dim,
                     ricci_of, signature_of, symmetrize, torsion_of)
from affsurf.cli import format_ricci, format_torsion

# symbolic u, v: the Ricci tensor is v dx2⊗dx2 whatever u is
M = make("muv", mode="symbolic")
print("T   =", format_torsion(torsion_of(M)))
print("rho =", format_ricci(ricci_of(M)))
print("rho of the symmetrized connection =", format_ricci(ricci_of(symmetrize(M))))
print("nabla rho = 0:", cov_deriv_ricci(M).is_zero())
print("nabla T = 0:", cov_deriv_torsion(M).is_zero())
print()

# dim of parallel torsion plus rank of rho never exceeds 2
for u, v in [(1, 1), (1, 0), (0, 0), (2, -3)]:
    conn = make("muv", {"u": u, "v": v})
    dim = parallel_torsion_dim(conn).dim
    sig = signature_of(ricci_of(conn))
    print(f"M({u}, {v}): parallel torsion dim {dim}, rho {sig}")
