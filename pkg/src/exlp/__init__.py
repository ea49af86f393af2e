"""Exact rational LP solving by iterative refinement over a floating-point simplex."""

from .estimator import ExactLPSolver, check_lp, solve
from .model import GeneralLP, LPFormatError, StandardLP, parse_exact_lp, parse_mps, read_lp, to_standard_form
from .oracle import OracleConfig, SimplexOracle
from .ratcore import RatMatrix, encoding_length
from .reconstruct import ReconConfig, reconstruct_scalar, reconstruct_vector, solve_with_reconstruction
from .refine import RefineConfig, iterative_refine
from .verify import ExactSolution, solve_with_basis_verification

__all__ = [
    "ExactLPSolver",
    "ExactSolution",
    "GeneralLP",
    "LPFormatError",
    "OracleConfig",
    "RatMatrix",
    "ReconConfig",
    "RefineConfig",
    "SimplexOracle",
    "StandardLP",
    "check_lp",
    "encoding_length",
    "iterative_refine",
    "parse_exact_lp",
    "parse_mps",
    "read_lp",
    "reconstruct_scalar",
    "reconstruct_vector",
    "solve",
    "solve_with_basis_verification",
    "solve_with_reconstruction",
    "to_standard_form",
]
