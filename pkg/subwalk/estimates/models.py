"""
Data models for heat-kernel estimates.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..bernstein import PhiSpec, ScalingProfile, eval_phi
from ..exceptions import DomainError, ValidationError
from ..utils import package_versions

# Floors of gamma / phi are taken after adding this guard against roundoff
DEPTH_GUARD = 1e-12

Point = Tuple[int, ...]


@dataclass(frozen=True)
class EstimateEnvelope:
    """Bound functions of a subordinate walk in dimension d."""

    spec: PhiSpec
    d: int

    def __post_init__(self):
        """Validate the dimension."""
        if self.d < 1:
            raise DomainError(f"dimension must be at least 1, got {self.d}")


@dataclass
class RatioReport:
    """
    Extremes of a ratio over a sweep grid.

    Attributes:
        name: What was compared
        grid: Description of the sweep (ranges, d, phi, ...)
        ratio_inf: Smallest ratio on the grid
        ratio_sup: Largest ratio on the grid
        argmin: Grid point of ratio_inf (first in scan order on ties)
        argmax: Grid point of ratio_sup (first in scan order on ties)
        count: Number of grid points that entered the extremes
        defect_filter: Factor applied to error bounds to exclude noise-level points
        methods: Kernel methods used
        seeds: Seeds used, for Monte Carlo sources
        degenerate: Whether the ratio is trivial (zero denominator)
        extra: Further named results of the sweep
        versions: Package versions that produced the report
    """

    name: str
    grid: Dict[str, Any]
    ratio_inf: float
    ratio_sup: float
    argmin: List[Any]
    argmax: List[Any]
    count: int = 0
    defect_filter: Optional[float] = None
    methods: List[str] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    degenerate: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)
    versions: Dict[str, str] = field(default_factory=package_versions)

    def check(self):
        """
        Check 0 < ratio_inf <= ratio_sup < inf.

        Raises:
            ValidationError: If the band is empty or unbounded
        """
        if self.degenerate:
            return
        if not (0.0 < self.ratio_inf <= self.ratio_sup < math.inf):
            raise ValidationError(
                f"{self.name}: ratio band [{self.ratio_inf}, {self.ratio_sup}] is not finite "
                "and positive",
                context={"argmin": self.argmin, "argmax": self.argmax},
            )

    @property
    def spread(self) -> float:
        """ratio_sup / ratio_inf."""
        return self.ratio_sup / self.ratio_inf

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form, without timestamps."""
        return {
            "name": self.name,
            "grid": self.grid,
            "ratio_inf": self.ratio_inf,
            "ratio_sup": self.ratio_sup,
            "argmin": list(self.argmin),
            "argmax": list(self.argmax),
            "count": self.count,
            "defect_filter": self.defect_filter,
            "methods": list(self.methods),
            "seeds": list(self.seeds),
            "degenerate": self.degenerate,
            "extra": self.extra,
            "versions": self.versions,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RatioReport":
        """
        Create RatioReport from dictionary.

        Args:
            data: Dictionary written by to_dict

        Returns:
            RatioReport instance
        """
        return cls(
            name=data["name"],
            grid=data.get("grid", {}),
            ratio_inf=float(data["ratio_inf"]),
            ratio_sup=float(data["ratio_sup"]),
            argmin=list(data.get("argmin", [])),
            argmax=list(data.get("argmax", [])),
            count=int(data.get("count", 0)),
            defect_filter=data.get("defect_filter"),
            methods=list(data.get("methods", [])),
            seeds=list(data.get("seeds", [])),
            degenerate=bool(data.get("degenerate", False)),
            extra=data.get("extra", {}),
            versions=data.get("versions", {}),
        )


def window_depth(spec: PhiSpec, gamma: float, r: float) -> int:
    """Time depth floor(gamma / phi(r^-2)) of a cylinder of radius r; 0 for r <= 0."""
    if r <= 0.0:
        return 0
    return int(math.floor(gamma / float(eval_phi(spec, r**-2.0)) + DEPTH_GUARD))


@dataclass(frozen=True)
class HarnackWindow:
    """
    Geometry of the cylinders Q(k, x, r) = {k, ..., k + depth(r)} x B(x, r).

    Attributes:
        gamma: Time-depth factor in (0, 1)
        B: Spatial shrink factor of the inner cylinder, at least 3
        b: Horizon factor, an integer at least 3
        R: Outer radius
        z: Center of the cylinders
    """

    gamma: float
    B: float
    b: int
    R: float
    z: Point

    def __post_init__(self):
        """Validate the geometry."""
        if not 0.0 < self.gamma < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.B < 3.0 or self.b < 3:
            raise DomainError(f"B and b must be at least 3, got B={self.B}, b={self.b}")
        if self.R <= 0.0:
            raise DomainError(f"R must be positive, got {self.R}")
        object.__setattr__(self, "z", tuple(int(c) for c in self.z))

    @classmethod
    def from_profile(
        cls, profile: ScalingProfile, gamma: float, R: float, z: Sequence[int]
    ) -> "HarnackWindow":
        """
        Window with B = max(3, (2/c_*)^(1/(2 alpha_*))), b = max(3, floor((3/c_*)^(1/alpha_*)) + 1).

        Args:
            profile: Scaling profile of phi
            gamma: Time-depth factor
            R: Outer radius
            z: Center

        Returns:
            Harnack window
        """
        c, alpha = profile.c_lower, profile.alpha_lower
        B = max(3.0, (2.0 / c) ** (1.0 / (2.0 * alpha)))
        b = max(3, int(math.floor((3.0 / c) ** (1.0 / alpha) + DEPTH_GUARD)) + 1)
        return cls(gamma=gamma, B=B, b=b, R=R, z=tuple(z))

    @property
    def inner_radius(self) -> float:
        """R / B."""
        return self.R / self.B

    def start(self, spec: PhiSpec) -> int:
        """First time slice floor(gamma / phi(R^-2)) of the upper cylinder."""
        return window_depth(spec, self.gamma, self.R)

    def depth(self, spec: PhiSpec) -> int:
        """Time depth of the inner cylinders."""
        return window_depth(spec, self.gamma, self.inner_radius)

    def horizon(self, spec: PhiSpec) -> int:
        """floor(gamma / phi((sqrt(b) R)^-2)), the parabolicity horizon."""
        return window_depth(spec, self.gamma, math.sqrt(self.b) * self.R)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable description."""
        return {"gamma": self.gamma, "B": self.B, "b": self.b, "R": self.R, "z": list(self.z)}


@dataclass(frozen=True)
class PruittTerms:
    """
    Components of h(x) = G(x) + K(x) + M(x).

    Attributes:
        x: Radius
        tail: G, mass at |y| > x (mass outside the box included)
        second_moment: K, x^-2 sum over |y| <= x of |y|^2 p(y)
        drift: M, x^-1 |sum over |y| <= x of y p(y)|; zero up to roundoff by symmetry
    """

    x: float
    tail: float
    second_moment: float
    drift: float

    @property
    def h(self) -> float:
        """h(x) = G + K + M."""
        return self.tail + self.second_moment + self.drift
