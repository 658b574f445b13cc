"""Iterative locally linear embedding: sparse nonnegative similarity
learning, degree-weighted spectral embedding, and the clustering /
semi-supervised evaluation helpers around them.

All matrix arguments are numpy arrays with points as rows.
"""

from ille._core import (
    ValidationError,
    ParameterError,
    ShapeError,
    NumericError,
    ParseError,
    accuracy,
    check_psd,
    combine_kernels,
    embed,
    gaussian_kernel,
    harmonic_label_prop,
    iterative_lle,
    kernel_from_embedding,
    kkt_residual,
    kmeans,
    learn_sparse_similarity,
    lg_consistency,
    linear_kernel,
    lle_objective,
    lle_weights_knn,
    nmi,
    nonneg_lle_weights_knn,
    normalized_cut_indicators,
    objective_sparse,
    purity,
    spectral_normalize,
)

__all__ = [
    "ValidationError",
    "ParameterError",
    "ShapeError",
    "NumericError",
    "ParseError",
    "accuracy",
    "check_psd",
    "combine_kernels",
    "embed",
    "gaussian_kernel",
    "harmonic_label_prop",
    "iterative_lle",
    "kernel_from_embedding",
    "kkt_residual",
    "kmeans",
    "learn_sparse_similarity",
    "lg_consistency",
    "linear_kernel",
    "lle_objective",
    "lle_weights_knn",
    "nmi",
    "nonneg_lle_weights_knn",
    "normalized_cut_indicators",
    "objective_sparse",
    "purity",
    "spectral_normalize",
]

__version__ = "0.1.0"
