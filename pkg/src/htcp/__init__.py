"""Horizontal tensor complementarity problems: solvers, classifiers and spectra."""

__version__ = "0.1.0"

from .classifiers import (
    NotApplicable,
    Outcome,
    Verdict,
    check_det_condition,
    check_p_pair,
    check_p_pair_via_left_inverse,
    check_p_tensor,
    check_r0_pair,
    check_r_pair,
    check_strong_p_pair,
    verify_certificate,
)
from .estimators import HTCPSolver
from .hlcp import solve_hlcp_enumerate
from .solution import SolutionPair
from .solver import (
    GuardExceeded,
    HTCPInstance,
    SolveReport,
    SolverConfig,
    Status,
    solve,
    solve_homotopy,
    solve_newton,
    solve_newton_multistart,
    solve_pattern_enumeration,
    verify_solution,
)
from .spectra import DegreeEstimate, EigenPair, b_eigen, degree_estimate_pair, degree_estimate_tcp, h_eigen, z_eigen
from .tensor import Tensor, apply_power, identity_tensor, jacobian, shao_product

__all__ = [
    "__version__",
    "Tensor",
    "apply_power",
    "identity_tensor",
    "jacobian",
    "shao_product",
    "SolutionPair",
    "solve_hlcp_enumerate",
    "GuardExceeded",
    "HTCPInstance",
    "SolveReport",
    "SolverConfig",
    "Status",
    "solve",
    "solve_newton",
    "solve_newton_multistart",
    "solve_homotopy",
    "solve_pattern_enumeration",
    "verify_solution",
    "NotApplicable",
    "Outcome",
    "Verdict",
    "check_r0_pair",
    "check_r_pair",
    "check_p_pair",
    "check_p_tensor",
    "check_det_condition",
    "check_p_pair_via_left_inverse",
    "check_strong_p_pair",
    "verify_certificate",
    "EigenPair",
    "DegreeEstimate",
    "h_eigen",
    "z_eigen",
    "b_eigen",
    "degree_estimate_pair",
    "degree_estimate_tcp",
    "HTCPSolver",
]
