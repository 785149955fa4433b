"""
Discrete subordination for subwalk.

This package computes the step-distribution weights a_m of a subordinate
walk and samples the increments R.
"""

from .models import SubordinationWeights, WeightsMethod
from .sampler import AliasTable, IncrementSampler, TailSampler, build_sampler, mix_seed
from .weights import (
    closed_form_weights,
    stable_survival,
    stable_tail_exact,
    stable_weights_exact,
    tail_survival,
    weights_quadrature,
    weights_series,
)

__all__ = [
    "AliasTable",
    "IncrementSampler",
    "SubordinationWeights",
    "TailSampler",
    "WeightsMethod",
    "build_sampler",
    "closed_form_weights",
    "mix_seed",
    "stable_survival",
    "stable_tail_exact",
    "stable_weights_exact",
    "tail_survival",
    "weights_quadrature",
    "weights_series",
]
