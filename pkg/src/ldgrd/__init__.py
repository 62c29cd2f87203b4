"""Local discontinuous Galerkin solver for singularly perturbed
reaction-diffusion problems on layer-adapted meshes, with energy- and
balanced-norm error measurement and a convergence-study CLI."""

from .assembly1d import FluxConfig, LdgSolution1D, assemble, bilinear_B, solve_1d
from .assembly2d import FluxConfig2D, LdgSolution2D, assemble2d, bilinear_B2d, solve_2d
from .mesh import MeshParams, ShishkinMesh1D, TensorMesh2D, build_shishkin_1d, build_tensor_2d
from .norms import (
    ErrorReport,
    balanced_error_1d,
    balanced_error_2d,
    energy_error_1d,
    energy_error_2d,
    error_report_1d,
    error_report_2d,
)
from .problems import get_problem, layer1d, layer2d, poly_exact_1d, poly_exact_2d
from .study import ConvergenceRecord, StudyConfig, rate_p, rate_s, run_study

__version__ = "0.1.0"

__all__ = [
    "FluxConfig",
    "FluxConfig2D",
    "LdgSolution1D",
    "LdgSolution2D",
    "MeshParams",
    "ShishkinMesh1D",
    "TensorMesh2D",
    "ErrorReport",
    "ConvergenceRecord",
    "StudyConfig",
    "assemble",
    "assemble2d",
    "bilinear_B",
    "bilinear_B2d",
    "balanced_error_1d",
    "balanced_error_2d",
    "build_shishkin_1d",
    "build_tensor_2d",
    "energy_error_1d",
    "energy_error_2d",
    "error_report_1d",
    "error_report_2d",
    "get_problem",
    "layer1d",
    "layer2d",
    "poly_exact_1d",
    "poly_exact_2d",
    "rate_p",
    "rate_s",
    "run_study",
    "solve_1d",
    "solve_2d",
]
