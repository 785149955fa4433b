"""
Data models for lattice kernels.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ..bernstein import PhiSpec
from ..exceptions import DomainError


class KernelMethod(str, Enum):
    """How a kernel was computed."""

    CONVOLUTION = "convolution"
    SPECTRAL = "spectral"
    POISSONIZED = "poissonized"


Time = Union[int, float]


@dataclass(frozen=True, eq=False)
class LatticeKernel:
    """
    Transition probabilities from the origin on the box [-radius, radius]^d.

    Attributes:
        d: Dimension
        radius: Box half-width L
        time: Step count n or continuous time t
        values: Dense array of shape (2L+1,)*d; index L on every axis is the origin
        mass_defect: 1 - mass inside the box (never negative)
        method: How the kernel was computed
        error_bound: Pointwise numerical error bound against the kernel on Z^d
        truncation_error: Part of error_bound not caused by periodization
        grid: Points per axis of the periodic lattice the kernel was computed on
        torus: Kernel on the periodic lattice in FFT order, if any
        spec: Bernstein function, if any
    """

    d: int
    radius: int
    time: Time
    values: np.ndarray
    method: KernelMethod
    mass_defect: float = field(default=-1.0)
    error_bound: float = 0.0
    truncation_error: float = 0.0
    grid: Optional[int] = None
    torus: Optional[np.ndarray] = field(default=None, repr=False)
    spec: Optional[PhiSpec] = None

    def __post_init__(self):
        """Freeze arrays and derive the mass defect."""
        expected = (2 * self.radius + 1,) * self.d
        if self.values.shape != expected:
            raise DomainError(f"kernel values have shape {self.values.shape}, expected {expected}")
        self.values.setflags(write=False)
        if self.torus is not None:
            self.torus.setflags(write=False)
        if self.mass_defect < 0.0:
            object.__setattr__(self, "mass_defect", max(0.0, 1.0 - float(np.sum(self.values))))

    @property
    def mass(self) -> float:
        """Mass inside the box."""
        return float(np.sum(self.values))

    @property
    def is_periodic(self) -> bool:
        """Whether the kernel carries its periodic lattice."""
        return self.torus is not None

    def _index(self, x: Sequence[int]) -> Tuple[int, ...]:
        if len(x) != self.d:
            raise DomainError(f"point {tuple(x)} does not have dimension {self.d}")
        if any(abs(int(c)) > self.radius for c in x):
            raise DomainError(f"point {tuple(x)} lies outside the box of radius {self.radius}")
        return tuple(int(c) + self.radius for c in x)

    def at(self, x: Sequence[int]) -> float:
        """Kernel value at lattice point x."""
        return float(self.values[self._index(x)])

    def center(self) -> float:
        """Kernel value at the origin."""
        return float(self.values[(self.radius,) * self.d])

    def axis(self) -> np.ndarray:
        """Offsets -L..L along one axis."""
        return np.arange(-self.radius, self.radius + 1)

    def norms(self) -> np.ndarray:
        """Euclidean norm of every box point, shaped like values."""
        grids = np.meshgrid(*([self.axis()] * self.d), indexing="ij")
        return np.sqrt(sum(g.astype(float) ** 2 for g in grids))

    def points(self) -> Iterator[Tuple[Tuple[int, ...], float]]:
        """All (point, value) pairs in lexicographic order."""
        for index in np.ndindex(*self.values.shape):
            yield tuple(i - self.radius for i in index), float(self.values[index])

    def restrict(self, radius: int) -> "LatticeKernel":
        """The same kernel on a smaller box."""
        if radius > self.radius:
            raise DomainError(f"cannot restrict radius {self.radius} to {radius}")
        lo, hi = self.radius - radius, self.radius + radius + 1
        values = np.array(self.values[(slice(lo, hi),) * self.d])
        return replace(self, radius=radius, values=values, mass_defect=-1.0)

    def detached(self) -> "LatticeKernel":
        """The box values alone, without the periodic lattice."""
        return replace(self, torus=None, mass_defect=self.mass_defect)

    def scaled(self, factor: float) -> "LatticeKernel":
        """Kernel values and error bounds multiplied by factor (for homogeneity checks)."""
        torus = None if self.torus is None else self.torus * factor
        return replace(
            self,
            values=self.values * factor,
            torus=torus,
            mass_defect=self.mass_defect,
            error_bound=self.error_bound * factor,
            truncation_error=self.truncation_error * factor,
        )

    def metadata(self) -> Dict[str, Any]:
        """Sidecar description written next to kernel tables."""
        return {
            "d": self.d,
            "radius": self.radius,
            "t" if self.method is KernelMethod.POISSONIZED else "n": self.time,
            "method": self.method.value,
            "mass_defect": self.mass_defect,
            "error_bound": self.error_bound,
            "grid": self.grid,
            "phi": self.spec.literal if self.spec is not None else None,
        }
