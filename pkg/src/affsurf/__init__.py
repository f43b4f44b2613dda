"""Homogeneous symmetric affine surfaces with torsion.

Exact tensor calculus for affine connections on surfaces, gauge
transformations, and identification of the normal form of a homogeneous
symmetric surface with nonzero torsion.
"""

from .catalog import family_table, make, spec_for, verify_paper
from .classify import (ClassificationResult, classify, parallel_torsion_dim,
                       signature_of)
from .connection import (Connection, Kind, cov_deriv_ricci, cov_deriv_torsion,
                         curvature_of, is_affine_killing, is_symmetric_surface,
                         lie_derivative_of_connection, realize_torsion,
                         ricci_of, symmetrize, torsion_of)
from .connfile import parse_text, read, serialize
from .gauge import Flip, GaugeChain, GaugeLinear, GaugeShear, apply_linear
from .scalars import Poly, RadicalScalar, RatFn

__all__ = [
    "ClassificationResult", "Connection", "Flip", "GaugeChain", "GaugeLinear",
    "GaugeShear", "Kind", "Poly", "RadicalScalar", "RatFn", "apply_linear",
    "classify", "cov_deriv_ricci", "cov_deriv_torsion",
    "curvature_of", "family_table", "is_affine_killing", "is_symmetric_surface",
    "lie_derivative_of_connection", "make", "parallel_torsion_dim",
    "parse_text", "read", "realize_torsion", "ricci_of", "serialize",
    "signature_of", "spec_for", "symmetrize", "torsion_of", "verify_paper",
]
