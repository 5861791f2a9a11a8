"""Mesh-free learned boundary-to-solution operators for the 2D Helmholtz equation.

Learn a discrete operator W from fundamental-solution training data on a
source circle, then apply it to arbitrary Dirichlet boundary inputs:
u(x) ~= b_x W f. Includes the classical direct fundamental-solution fit as
a baseline, convergence analytics, an experiment harness with a CLI, and a
FastAPI service for the learn-once / solve-many workflow.
"""

from .analytics import (
    DecayFit,
    ErrorReport,
    boundary_l2_error,
    error_report,
    estimate_rho,
    filter_above_floor,
    fit_decay,
    spectral_s,
    trim_error_plateau,
)
from .fields import Dipole, ExactField, PlaneProduct, PlaneWave, PointSource, field_from_spec
from .geometry import (
    BoundaryCurve,
    PointSet,
    circle_curve,
    collocation_points,
    curve_from_radius,
    flower_curve,
    interior_grid,
    source_points,
)
from .solver import (
    LearnedOperator,
    WaveProblem,
    apply,
    apply_coefficients,
    assemble_training_matrix,
    boundary_trace,
    default_alpha,
    evaluate_row,
    field_from_sources,
    learn,
    load_operator,
    mfs_direct_fit,
    operator_from_json_dict,
    operator_to_json_dict,
    save_operator,
)
from .specfun import bessel_j, bessel_y, hankel1, hankel1_order0, phi_2d, phi_2d_block, phi_3d
from .tikhonov import hermitian_solve, learn_operator_matrix, tikhonov_dual, tikhonov_primal

__version__ = "0.1.0"

__all__ = [
    "BoundaryCurve",
    "DecayFit",
    "Dipole",
    "ErrorReport",
    "ExactField",
    "LearnedOperator",
    "PlaneProduct",
    "PlaneWave",
    "PointSet",
    "PointSource",
    "WaveProblem",
    "apply",
    "apply_coefficients",
    "assemble_training_matrix",
    "bessel_j",
    "bessel_y",
    "boundary_l2_error",
    "boundary_trace",
    "circle_curve",
    "collocation_points",
    "curve_from_radius",
    "default_alpha",
    "error_report",
    "estimate_rho",
    "evaluate_row",
    "field_from_sources",
    "field_from_spec",
    "filter_above_floor",
    "fit_decay",
    "flower_curve",
    "hankel1",
    "hankel1_order0",
    "hermitian_solve",
    "interior_grid",
    "learn",
    "learn_operator_matrix",
    "load_operator",
    "mfs_direct_fit",
    "operator_from_json_dict",
    "operator_to_json_dict",
    "phi_2d",
    "phi_2d_block",
    "phi_3d",
    "save_operator",
    "source_points",
    "spectral_s",
    "tikhonov_dual",
    "tikhonov_primal",
    "trim_error_plateau",
]
