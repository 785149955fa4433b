"""
Bernstein functions for subwalk.

This package evaluates, inverts and validates the catalog of complete
Bernstein functions that drive discrete subordination.
"""

from .catalog import PhiKind
from .functions import (
    boundary_imag,
    eval_levy_density,
    eval_phi,
    eval_phi_complex,
    invert_phi,
    levy_tail,
    log_levy_density,
    log_levy_density_of_log,
)
from .models import AxiomCheck, AxiomReport, PhiSpec, ScalingProfile
from .parsing import parse_phi, read_phi_table
from .profile import scaling_profile, verify_bernstein_axioms

__all__ = [
    "AxiomCheck",
    "AxiomReport",
    "PhiKind",
    "PhiSpec",
    "ScalingProfile",
    "boundary_imag",
    "eval_levy_density",
    "eval_phi",
    "eval_phi_complex",
    "invert_phi",
    "levy_tail",
    "log_levy_density",
    "log_levy_density_of_log",
    "parse_phi",
    "read_phi_table",
    "scaling_profile",
    "verify_bernstein_axioms",
]
