"""
Monte Carlo simulation for subwalk.

This package simulates the subordinate walk and its Poissonized version and
estimates exit times, hitting probabilities and maximal displacements.
"""

from .models import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_CHUNK_STEPS,
    DEFAULT_STEP_CAP,
    CalibrationResult,
    CtrwPath,
    ExitTimeReport,
    GammaTailReport,
    HittingReport,
    ProbabilityEstimate,
    ProbeReport,
    SimulationConfig,
)
from .oracles import srw_exit_time_exact, srw_max_probability_exact
from .probes import (
    calibrate_gamma,
    estimate_exit_time,
    estimate_hitting,
    gamma_tail_check,
    maximal_inequality_probe,
    maximal_stay_probe,
)
from .stats import t_interval, wilson_interval
from .walk import (
    TrialWalk,
    default_sampler,
    run_trials,
    sample_endpoints,
    simulate_ctrw,
    simulate_walk,
    trial_walk,
)

__all__ = [
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_CHUNK_STEPS",
    "DEFAULT_STEP_CAP",
    "CalibrationResult",
    "CtrwPath",
    "ExitTimeReport",
    "GammaTailReport",
    "HittingReport",
    "ProbabilityEstimate",
    "ProbeReport",
    "SimulationConfig",
    "TrialWalk",
    "calibrate_gamma",
    "default_sampler",
    "estimate_exit_time",
    "estimate_hitting",
    "gamma_tail_check",
    "maximal_inequality_probe",
    "maximal_stay_probe",
    "run_trials",
    "sample_endpoints",
    "simulate_ctrw",
    "simulate_walk",
    "srw_exit_time_exact",
    "srw_max_probability_exact",
    "t_interval",
    "trial_walk",
    "wilson_interval",
]
