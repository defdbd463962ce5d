"""Sparse-group lasso regularization paths with bi-level screening.

Fits SGL and adaptive SGL paths by proximal gradient descent and reduces
each path point's problem with strong screening (group and variable
level), repairing any optimality violations before accepting a solution.
Competitor rules (group-level strong screening and sequential safe
screening) and a synthetic grouped-data generator are included for
benchmarking.
"""

from .adaptive import AdaptiveParams, adaptive_weights, \
    leading_right_singular_vector
from .datagen import GenSpec, INTERACTION_BENCH_SIZES, even_group_sizes, \
    expanded_dimension, generate, uneven_group_sizes
from .kernels import BACKEND
from .metrics import RunMetrics, compute_metrics
from .model import FitConfig, GroupPartition, GroupedDesign, PenaltySpec, \
    loss_and_gradient, objective, sgl_prox, standardize
from .norms import asgl_group_constants, asgl_group_params, epsilon_norm, \
    sgl_dual_norm, sgl_group_constants, sgl_norm, soft_threshold
from .pathfit import PathConfig, PathSolution, ScreenState, build_path, \
    fit_path
from .screening import RULES, dfr_group_screen, dfr_variable_screen, \
    gap_safe_screen_sequential, kkt_check, path_start_asgl, path_start_sgl, \
    sparsegl_group_screen, sparsegl_kkt_check, theoretical_group_screen, \
    theoretical_variable_screen
from .solver import FitResult, fit_at

__version__ = "0.1.0"

__all__ = [
    "AdaptiveParams", "BACKEND", "FitConfig", "FitResult", "GenSpec",
    "GroupPartition", "GroupedDesign", "INTERACTION_BENCH_SIZES",
    "PathConfig", "PathSolution", "PenaltySpec", "RULES", "RunMetrics",
    "ScreenState", "adaptive_weights", "asgl_group_constants",
    "asgl_group_params", "build_path", "compute_metrics",
    "dfr_group_screen", "dfr_variable_screen", "epsilon_norm",
    "even_group_sizes", "expanded_dimension", "fit_at", "fit_path",
    "gap_safe_screen_sequential", "generate", "kkt_check",
    "leading_right_singular_vector", "loss_and_gradient", "objective",
    "path_start_asgl", "path_start_sgl", "sgl_dual_norm",
    "sgl_group_constants", "sgl_norm", "sgl_prox", "soft_threshold",
    "sparsegl_group_screen", "sparsegl_kkt_check", "standardize",
    "theoretical_group_screen", "theoretical_variable_screen",
    "uneven_group_sizes", "__version__",
]
