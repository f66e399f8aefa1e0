"""Scale-invariant sparse precision matrix estimation with an L1 penalty on partial correlations."""

from .block_solver import BlockSolution, BlockSolveError, solve_block
from .core import (CovMatrix, DetQuadratic, NotPositiveDefiniteError, PrecisionDecomposition,
                   decompose, recompose, standardize)
from .descent import (DescentConfig, DescentResult, PathResult, coordinate_descent,
                      default_rho_grid, initial_estimate, regularization_path)
from .objective import BlockCoefficients, block_coefficients, log_likelihood, pcglasso_objective
from .selection import bic, ebic, select

__all__ = [
    "BlockCoefficients", "BlockSolution", "BlockSolveError", "CovMatrix", "DescentConfig",
    "DescentResult", "DetQuadratic", "NotPositiveDefiniteError", "PathResult",
    "PrecisionDecomposition", "bic", "block_coefficients", "coordinate_descent", "decompose",
    "default_rho_grid", "ebic", "initial_estimate", "log_likelihood", "pcglasso_objective",
    "recompose", "regularization_path", "select", "solve_block", "standardize",
]
__version__ = "0.1.0"
