"""
Exceptions for subwalk.

Every failure family maps to a process exit code so the command-line
interface can distinguish user errors from numerical failures.
"""

from typing import Any, Dict, Optional, Sequence


class SubwalkError(Exception):
    """Base exception for subwalk errors."""

    exit_code = 1


class ConfigurationError(SubwalkError):
    """Exception raised for invalid parameters or configuration files."""

    exit_code = 2


class DomainError(SubwalkError):
    """Exception raised when an argument lies outside an operation's domain."""

    exit_code = 2


class ValidationError(SubwalkError):
    """Exception raised when a computed object violates its invariants."""

    exit_code = 2

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        """
        Initialize validation error.

        Args:
            message: Error message
            context: Offending values (grid pair, index, ...)
        """
        self.context = context or {}
        super().__init__(message)


class CapabilityError(SubwalkError):
    """Exception raised when an operation is not available for the given input."""

    exit_code = 2


class NumericError(SubwalkError):
    """Exception raised when a numerical method cannot meet its accuracy contract."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        worst: Optional[Any] = None,
        suggestion: Optional[str] = None,
    ):
        """
        Initialize numeric error.

        Args:
            message: Error message
            worst: Worst offending item (quadrature panel, grid node, ...)
            suggestion: Parameter change that would likely fix the failure
        """
        self.worst = worst
        self.suggestion = suggestion
        if suggestion:
            message = f"{message} ({suggestion})"
        super().__init__(message)


class CalibrationError(NumericError):
    """Exception raised when no gamma on the search grid satisfies the maximal probe."""

    def __init__(self, worst_r: float, upper: float):
        """
        Initialize calibration error.

        Args:
            worst_r: Radius with the largest probe upper bound at the smallest gamma
            upper: That upper confidence bound
        """
        self.worst_r = worst_r
        self.upper = upper
        super().__init__(
            f"No gamma satisfies the maximal probe; worst radius r={worst_r} "
            f"has upper bound {upper:.4f} > 0.25",
            worst=worst_r,
        )


class CriterionFailure(SubwalkError):
    """Exception raised when acceptance criteria fail."""

    exit_code = 1

    def __init__(self, names: Sequence[str]):
        """
        Initialize criterion failure.

        Args:
            names: Names of the failed criteria
        """
        self.names = list(names)
        super().__init__(f"Failed criteria: {', '.join(self.names)}")
