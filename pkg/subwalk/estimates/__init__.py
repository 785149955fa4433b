"""
Heat-kernel estimates for subwalk.

This package evaluates the bound functions of the two-sided estimate,
sweeps exact kernels against them, and computes empirical parabolic
Harnack ratios.
"""

from .envelope import (
    ball_points,
    ball_volume,
    continuum_tail,
    crossover_radius,
    diagonal,
    envelope,
    envelope_grid,
    hitting_radius,
    j_profile,
    pruitt_components,
    pruitt_h,
    pruitt_report,
    tail_sum,
    tail_sum_check,
)
from .harnack import default_n0, harnack_ratio, spectral_source
from .models import EstimateEnvelope, HarnackWindow, PruittTerms, RatioReport, window_depth
from .verify import DEFECT_FILTER, diagonal_band, one_step_comparability, verify_two_sided

__all__ = [
    "DEFECT_FILTER",
    "EstimateEnvelope",
    "HarnackWindow",
    "PruittTerms",
    "RatioReport",
    "ball_points",
    "ball_volume",
    "continuum_tail",
    "crossover_radius",
    "default_n0",
    "diagonal",
    "diagonal_band",
    "envelope",
    "envelope_grid",
    "harnack_ratio",
    "hitting_radius",
    "j_profile",
    "one_step_comparability",
    "pruitt_components",
    "pruitt_h",
    "pruitt_report",
    "spectral_source",
    "tail_sum",
    "tail_sum_check",
    "verify_two_sided",
    "window_depth",
]
