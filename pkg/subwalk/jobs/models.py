"""
Data models for report runs.
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class CriterionResult:
    """
    Outcome of one acceptance criterion.

    Attributes:
        name: Criterion name
        passed: Whether the criterion holds
        detail: One-line summary for the report table
        data: Reports and numbers backing the verdict
    """

    name: str
    passed: bool
    detail: str
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "data": self.data,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CriterionResult":
        """Create CriterionResult from dictionary."""
        return cls(
            name=data["name"],
            passed=bool(data["passed"]),
            detail=data.get("detail", ""),
            data=data.get("data", {}),
        )
