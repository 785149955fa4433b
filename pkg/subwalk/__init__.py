"""
subwalk - heat kernels and simulation of subordinate random walks on Z^d.

This package provides functionality for:
- Evaluating and inverting complete Bernstein functions
- Computing discrete subordination weights and sampling increments
- Computing transition kernels on boxes of the lattice
- Checking kernels against two-sided envelopes and Harnack ratios
- Monte Carlo exit, hitting and maximal-displacement estimates
"""

__version__ = "0.1.0"

from .bernstein import PhiSpec, eval_phi, invert_phi, parse_phi, scaling_profile
from .config import load_and_validate_config
from .estimates import EstimateEnvelope, RatioReport, verify_two_sided
from .jobs import ReportRunner
from .kernel import LatticeKernel, nstep_kernel_convolve, nstep_kernel_spectral, srw_kernel
from .montecarlo import SimulationConfig, estimate_exit_time, estimate_hitting
from .subordination import SubordinationWeights, weights_quadrature, weights_series
from .utils import setup_logging

__all__ = [
    "EstimateEnvelope",
    "LatticeKernel",
    "PhiSpec",
    "RatioReport",
    "ReportRunner",
    "SimulationConfig",
    "SubordinationWeights",
    "estimate_exit_time",
    "estimate_hitting",
    "eval_phi",
    "invert_phi",
    "load_and_validate_config",
    "nstep_kernel_convolve",
    "nstep_kernel_spectral",
    "parse_phi",
    "scaling_profile",
    "setup_logging",
    "srw_kernel",
    "verify_two_sided",
    "weights_quadrature",
    "weights_series",
]
