"""Lattice models from finite-dimensional Hopf-algebra data.

Builds group algebras, Drinfel'd doubles, twists and decorated ribbon
graphs, assembles the associated lattice models (extended space, holonomies,
site representations, transport operators, defect removal), and verifies
their operator identities mechanically at desk scale.
"""

from .scalars import APPROX, EXACT, EPS_TOL, FIELDS, GaussRat
from .linalg import LinOp, Space, Vec, op_equal, compare_ops, rank, solve_linear
from .hopf import (Algebra, HopfAlgebra, CheckReport, check_hopf, dual_of,
                   drinfeld_double, drinfeld_double_dual, group_algebra, haar,
                   opposite, coopposite, op_cop, tensor_hopf)

__all__ = [
    "APPROX", "EXACT", "EPS_TOL", "FIELDS", "GaussRat",
    "LinOp", "Space", "Vec", "op_equal", "compare_ops", "rank", "solve_linear",
    "Algebra", "HopfAlgebra", "CheckReport", "check_hopf", "dual_of",
    "drinfeld_double", "drinfeld_double_dual", "group_algebra", "haar",
    "opposite", "coopposite", "op_cop", "tensor_hopf",
]
