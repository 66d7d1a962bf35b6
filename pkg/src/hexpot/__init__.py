"""Boundary-integral solver for a sixth-order parameter-dependent problem."""

from .bessel import BesselValue, bessel_k, bessel_k0_reference
from .data import BoundaryData, ManufacturedData, TrigData, ZeroData, default_trig_data
from .estimator import BoundaryValueSolver
from .geometry import (
    BoundaryCurve,
    QuadratureNodes,
    encloses,
    lyapunov_exponent,
    make_curve,
    sample_nodes,
)
from .jumps import JumpCalibration, analytic_jump_table, calibrate_jumps
from .kernels import (
    DecayFit,
    KERNEL_IDS,
    KernelContext,
    eval_kernel,
    eval_kernel_gradient,
    eval_kernel_laplacian_power,
    log_coefficient,
    make_context,
    second_normal_derivative,
    verify_decay_bound,
)
from .solver import (
    AnalyticityReport,
    BoundarySystem,
    SolveResult,
    Solution,
    analyticity_check,
    assemble_system,
    eval_potential,
    solve_bvp,
    solve_direct,
    solve_neumann,
)
from .spectral import (
    CharacteristicRoots,
    Coefficients,
    SpectralParameter,
    canonical_coefficients,
    scaled_argument,
    solve_characteristic_cubic,
    sqrt_neg_branch,
)

__version__ = "0.1.0"

__all__ = [
    "BesselValue",
    "bessel_k",
    "bessel_k0_reference",
    "BoundaryData",
    "ManufacturedData",
    "TrigData",
    "ZeroData",
    "default_trig_data",
    "BoundaryValueSolver",
    "BoundaryCurve",
    "QuadratureNodes",
    "encloses",
    "lyapunov_exponent",
    "make_curve",
    "sample_nodes",
    "JumpCalibration",
    "analytic_jump_table",
    "calibrate_jumps",
    "DecayFit",
    "KERNEL_IDS",
    "KernelContext",
    "eval_kernel",
    "eval_kernel_gradient",
    "eval_kernel_laplacian_power",
    "log_coefficient",
    "make_context",
    "second_normal_derivative",
    "verify_decay_bound",
    "AnalyticityReport",
    "BoundarySystem",
    "SolveResult",
    "Solution",
    "analyticity_check",
    "assemble_system",
    "eval_potential",
    "solve_bvp",
    "solve_direct",
    "solve_neumann",
    "CharacteristicRoots",
    "Coefficients",
    "SpectralParameter",
    "canonical_coefficients",
    "scaled_argument",
    "solve_characteristic_cubic",
    "sqrt_neg_branch",
    "__version__",
]
