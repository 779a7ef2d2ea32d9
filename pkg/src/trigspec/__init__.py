"""Spectral collocation with trigonometric interpolation.

Dense matrix representations of linear differential operators on
arbitrary partitions of a period, rank prediction for constant-coefficient
operators, and boundary-value / eigenvalue solvers built on them.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    ExprDomainError,
    ExprSyntaxError,
    GridError,
    SingularMatrixError,
    TrigspecError,
)
from .grid import (
    Grid,
    TrigInterpolant,
    TrigPolyCoeffs,
    cardinal_eval,
    eval_coeffs,
    interpolate,
    make_grid,
    make_interval_grid,
    make_random_grid,
    make_uniform_grid,
    psi_weights,
    to_coefficients,
)
from .operators import diff_matrix, matrix_poly, mult_matrix, precond_diff, representation_of
from .expr import constant_coefficients, eval_scalar, parse_operator, parse_scalar
from .rank import RankReport, RankSpec, kernel_frequencies, phi_zeta, predicted_rank, verify_rank
from .bvp import BoundaryCondition, BVProblem, NodeSolution, PostMap, assemble, dense_sample, max_error, solve_bvp
from .eig import BoundsTable, EigProblem, EigResult, check_bounds, eigen_error, recover_eigenfunction, solve_eig
from .config import ProblemConfig, load, load_example, loads

__version__ = "0.1.0"
