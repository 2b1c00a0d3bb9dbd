"""Exact rank-constrained semidefinite programming over the rationals.

Given a symmetric pencil A(x) = A_0 + x_1 A_1 + ... + x_n A_n with rational
entries, a cost c and a rank bound r, ``solve_sdp`` returns a rational
parametrization of a finite set containing every minimizer of c.x over
{x : A(x) PSD, rank A(x) <= r}, together with the real points of that set,
classified exactly.
"""

from .errors import (
    DegenerateCostError, DegenerateSupportError, DimensionError, ExactSDPError, FieldError,
    PreconditionError, RandomnessBudgetError, RegularityError, ResourceError, SizeError,
)
from .exactpoly import MultiPoly, PolyMatrix, VariableSpace, poly_from_terms
from .groebner import Ideal, RationalParametrization, groebner_basis, rur, union_params
from .lagrange import CostForm, build_lagrange_compressed, degree_bound, theta_bound
from .pencil import (
    AlgebraicPoint, Pencil, build_incidence_full, build_incidence_reduced, check_regularity,
    classify_matrix, find_irregular_support, supports,
)
from .solver import SDPInstance, SolutionReport, filter_and_sort, solve_sdp
from .sos import build_gram_pencil, certify_sos_length, extract_rational_decomposition
from .univar import AlgebraicNumber, UniPoly, isolate_real_roots

__version__ = "0.1.0"

__all__ = [
    "ExactSDPError", "SizeError", "DimensionError", "ResourceError", "RandomnessBudgetError",
    "RegularityError", "DegenerateCostError", "DegenerateSupportError", "FieldError",
    "PreconditionError",
    "MultiPoly", "PolyMatrix", "VariableSpace", "poly_from_terms",
    "Ideal", "RationalParametrization", "groebner_basis", "rur", "union_params",
    "CostForm", "build_lagrange_compressed", "degree_bound", "theta_bound",
    "AlgebraicPoint", "Pencil", "build_incidence_full", "build_incidence_reduced",
    "check_regularity", "classify_matrix", "find_irregular_support", "supports",
    "SDPInstance", "SolutionReport", "filter_and_sort", "solve_sdp",
    "build_gram_pencil", "certify_sos_length", "extract_rational_decomposition",
    "AlgebraicNumber", "UniPoly", "isolate_real_roots",
]
