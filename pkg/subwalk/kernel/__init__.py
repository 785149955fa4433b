"""
Exact lattice kernels for subwalk.

This package computes transition probabilities of the simple random walk,
of the subordinate walk (by convolution and by spectral inversion) and of
its Poissonized continuous-time version.
"""

from .exact import compose, nstep_kernel_convolve, srw_kernel, subordinate_step_kernel
from .models import KernelMethod, LatticeKernel
from .spectral import (
    DEFAULT_MAX_ERROR,
    DEFAULT_MAX_GRID,
    MAX_DIMENSION,
    alias_estimate,
    clear_symbol_cache,
    ctrw_kernel,
    ctrw_kernel_poisson_sum,
    default_grid,
    nstep_kernel_spectral,
    ondiagonal_family,
    ondiagonal_fourier,
    poisson_cutoff,
    subordinate_symbol,
)
from .symmetry import clip_negative, symmetrize

__all__ = [
    "DEFAULT_MAX_ERROR",
    "DEFAULT_MAX_GRID",
    "MAX_DIMENSION",
    "KernelMethod",
    "LatticeKernel",
    "alias_estimate",
    "clear_symbol_cache",
    "clip_negative",
    "compose",
    "ctrw_kernel",
    "ctrw_kernel_poisson_sum",
    "default_grid",
    "nstep_kernel_convolve",
    "nstep_kernel_spectral",
    "ondiagonal_family",
    "ondiagonal_fourier",
    "poisson_cutoff",
    "srw_kernel",
    "subordinate_step_kernel",
    "subordinate_symbol",
    "symmetrize",
]
