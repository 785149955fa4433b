"""
Report jobs for subwalk.

This package runs the acceptance criteria and writes the aggregated report.
"""

from .executor import CRITERIA, ReportRunner, simulation_config, spec_from_config
from .models import CriterionResult

__all__ = [
    "CRITERIA",
    "CriterionResult",
    "ReportRunner",
    "simulation_config",
    "spec_from_config",
]
