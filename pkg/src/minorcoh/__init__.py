"""Local cohomology of the ideal of 2x2 minors of a generic 2x3 matrix.

Exact weight-graded Čech computations over Z, Q and F_p, and numerical
periods over the residue cycle that separates 1/(f1 f2 f3) from the partial
localisations.
"""

from .weights import Weight, enumerate_basis, weight_dim, weight_of_monomial
from .polyring import GF, QQ, ZZ, Domain, SparsePolynomial, generators, multiplication_matrix, multiply
from .linalg import (
    SnfResult,
    divisibility_index,
    integer_cohomology,
    rank_over_field,
    smith_normal_form,
    solve_over_field,
)
from .cech import W_STAR, TruncatedComplex, build_truncated_complex, canonical_class_vector, transition_map
from .cohomology import (
    CohomologyResult,
    DeathReport,
    class_in_image,
    cohomology,
    colimit_rank,
    death_level,
    h6j_weight_dim,
    universal_coefficients_check,
)
from .residue import CycleParams, QuadratureSpec, cycle_point, homotopy_invariance_check, integrate, pullback_jacobian

__version__ = "0.1.0"
