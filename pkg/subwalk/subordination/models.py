"""
Data models for subordination weights.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..bernstein import PhiSpec
from ..exceptions import ValidationError

# Sum of weights plus tail must equal 1 within this tolerance
MASS_TOLERANCE = 1e-10


class WeightsMethod(str, Enum):
    """How a weight vector was computed."""

    QUADRATURE = "quadrature"
    SERIES = "series"
    CLOSED_FORM = "closed_form"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class SubordinationWeights:
    """
    Step-distribution weights a_1..a_M of a subordinate walk.

    Attributes:
        weights: a_m for m = 1..M (index 0 holds a_1)
        tail_mass: Sum of a_m over m > M
        method: How the weights were computed
        spec: Bernstein function the weights belong to, if any
        converged: Whether tail_mass reached the requested tolerance
        tol: Requested tail tolerance
    """

    weights: np.ndarray
    tail_mass: float
    method: WeightsMethod
    spec: Optional[PhiSpec] = None
    converged: bool = True
    tol: Optional[float] = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        """Freeze the array and check the invariants."""
        weights = np.array(self.weights, dtype=float)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "method", WeightsMethod(self.method))
        if self.validate:
            self.check()

    @classmethod
    def explicit(cls, values, tail_mass: float = 0.0) -> "SubordinationWeights":
        """Weights given directly, e.g. the degenerate law a_1 = 1."""
        return cls(np.asarray(values, dtype=float), tail_mass, WeightsMethod.EXPLICIT)

    @classmethod
    def degenerate(cls) -> "SubordinationWeights":
        """a_1 = 1: subordination by the identity."""
        return cls.explicit([1.0])

    @property
    def M(self) -> int:
        """Number of explicit weights."""
        return int(self.weights.size)

    @property
    def total(self) -> float:
        """Explicit mass plus tail."""
        return float(np.sum(self.weights)) + self.tail_mass

    def a(self, m: int) -> float:
        """a_m, or 0 beyond M."""
        if m < 1:
            raise IndexError(f"weights are indexed from m = 1, got {m}")
        return float(self.weights[m - 1]) if m <= self.M else 0.0

    def cumulative(self) -> np.ndarray:
        """Running sums of a_1..a_m."""
        return np.cumsum(self.weights)

    def check(self):
        """
        Check nonnegativity and conservation of mass.

        Raises:
            ValidationError: If an invariant is violated
        """
        if self.M < 1:
            raise ValidationError("weights must contain at least a_1")
        if np.any(self.weights < 0.0) or self.tail_mass < 0.0:
            index = int(np.argmin(self.weights)) + 1
            raise ValidationError(
                f"negative weight a_{index} = {self.weights[index - 1]}", {"m": index}
            )
        if abs(self.total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(
                f"sum of weights plus tail is {self.total!r}, not 1",
                {"total": self.total, "tail_mass": self.tail_mass},
            )

    def metadata(self) -> Dict[str, Any]:
        """Truncation metadata written next to weight tables."""
        return {
            "M": self.M,
            "tail_mass": self.tail_mass,
            "method": self.method.value,
            "phi": self.spec.literal if self.spec is not None else None,
            "converged": self.converged,
            "tol": self.tol,
        }
