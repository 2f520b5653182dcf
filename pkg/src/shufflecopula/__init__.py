"""Copulas, their *-product and the Sobolev norm, with exact shuffles of Min."""
from .core import (
    M,
    PI,
    W,
    CompleteDependence,
    Convex,
    DescriptorError,
    GridCopula,
    OrdinalSum,
    Parametric,
    ValidationReport,
    eval_cdf,
    fgm,
    partial1,
    partial2,
    to_grid,
    transpose,
    validate,
)
from .dependence import DependenceReport, check_shuffle_invariance, omega, omega_star_lower
from .empirical import SamplePairs, checkerboard, pseudo_observations, read_samples
from .io import read_descriptor, write_descriptor, write_report
from .maps import IntervalExchange, IntervalUnion, PiecewiseAffineMap
from .norms import NormReport, graph_l1_distance, shuffle_dist_sq, sobolev_dist_sq, sobolev_norm_sq
from .shuffles import (
    DiagonalizationTrace,
    approx_by_shuffles,
    diagonalize,
    right_diagonalize,
    selfsimilar,
    sorting_shuffle,
)
from .star import StarResult, shuffle_of, star

__version__ = "0.1.0"

__all__ = [
    "CompleteDependence",
    "Convex",
    "DependenceReport",
    "DescriptorError",
    "DiagonalizationTrace",
    "GridCopula",
    "IntervalExchange",
    "IntervalUnion",
    "M",
    "NormReport",
    "OrdinalSum",
    "PI",
    "Parametric",
    "PiecewiseAffineMap",
    "SamplePairs",
    "StarResult",
    "ValidationReport",
    "W",
    "approx_by_shuffles",
    "check_shuffle_invariance",
    "checkerboard",
    "diagonalize",
    "eval_cdf",
    "fgm",
    "graph_l1_distance",
    "omega",
    "omega_star_lower",
    "partial1",
    "partial2",
    "pseudo_observations",
    "read_descriptor",
    "read_samples",
    "right_diagonalize",
    "selfsimilar",
    "shuffle_dist_sq",
    "shuffle_of",
    "sobolev_dist_sq",
    "sobolev_norm_sq",
    "sorting_shuffle",
    "star",
    "to_grid",
    "transpose",
    "validate",
    "write_descriptor",
    "write_report",
]
