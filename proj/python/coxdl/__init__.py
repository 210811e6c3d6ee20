"""Exact higher Deligne-Lusztig computations for inner forms of GL_n.

Thin wrapper over the C++ library; see the README for the command-line tool.
"""

from ._coxdl import (
    CapacityError,
    Pipeline,
    UnsupportedModel,
    group_order,
    macdonald_volume,
    points,
    run_acceptance,
    sigma_w_empty_predicate,
    staircase,
    verify_curve_reduction,
    verify_norm_image,
    verify_rh_fibers,
    verify_sigma_w,
    verify_turnbull,
)

__all__ = [
    "CapacityError",
    "Pipeline",
    "UnsupportedModel",
    "group_order",
    "macdonald_volume",
    "points",
    "run_acceptance",
    "sigma_w_empty_predicate",
    "staircase",
    "verify_curve_reduction",
    "verify_norm_image",
    "verify_rh_fibers",
    "verify_sigma_w",
    "verify_turnbull",
]
