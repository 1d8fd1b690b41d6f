"""Gauss-Lobatto-type cubature rules on the unit triangle for Jacobi weights.

Constructs rules with interior, edge, and corner nodes by a three-step
bootstrap (interior rule for the bumped weight, Gaussian edge quadratures
from boundary functionals, corner closure), checks node-count lower bounds,
and verifies any rule against closed-form moments.
"""

from .assembly import (
    SymmetricRule,
    TriangleRule,
    build_even_degree,
    build_lobatto,
    build_symmetric,
    expand_symmetric,
)
from .bounds import (
    NodeBudget,
    check_feasibility,
    gauss_lobatto_budget,
    interior_lower_bound,
    interior_plus_edge_lower_bound,
    minimal_lower_bound,
    strict_gauss_lobatto_budget,
)
from .functionals import (
    EDGE_DIAG,
    EDGE_LABELS,
    EDGE_X0,
    EDGE_Y0,
    MomentFunctional,
    boundary_functional,
    is_positive_definite,
)
from .interior import (
    BivariatePoly,
    InteriorRule,
    Point2,
    common_zeros,
    shift_weights_in,
    solve_moment_equations,
    weights_from_nodes,
)
from .kernels import backend_name
from .moments import JacobiExponents, MonomialIndex, dim_poly_space, triangle_moment
from .univariate import (
    EdgeQuadrature,
    MonicPoly,
    gaussian_quadrature,
    orthogonal_polynomials,
    quasi_orthogonal_even,
    real_roots,
)
from .verify import audit, classify_nodes, decomposition_report, verify_exactness

__version__ = "0.1.0"

__all__ = [
    "BivariatePoly",
    "EDGE_DIAG",
    "EDGE_LABELS",
    "EDGE_X0",
    "EDGE_Y0",
    "EdgeQuadrature",
    "InteriorRule",
    "JacobiExponents",
    "MomentFunctional",
    "MonicPoly",
    "MonomialIndex",
    "NodeBudget",
    "Point2",
    "SymmetricRule",
    "TriangleRule",
    "audit",
    "backend_name",
    "boundary_functional",
    "build_even_degree",
    "build_lobatto",
    "build_symmetric",
    "check_feasibility",
    "classify_nodes",
    "common_zeros",
    "decomposition_report",
    "dim_poly_space",
    "expand_symmetric",
    "gauss_lobatto_budget",
    "gaussian_quadrature",
    "interior_lower_bound",
    "interior_plus_edge_lower_bound",
    "is_positive_definite",
    "minimal_lower_bound",
    "orthogonal_polynomials",
    "quasi_orthogonal_even",
    "real_roots",
    "shift_weights_in",
    "solve_moment_equations",
    "strict_gauss_lobatto_budget",
    "triangle_moment",
    "verify_exactness",
    "weights_from_nodes",
]
