"""
Data models for Monte Carlo simulation.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..bernstein import PhiSpec
from ..exceptions import DomainError
from ..subordination import SubordinationWeights

DEFAULT_STEP_CAP = 10_000_000
DEFAULT_CHUNK_STEPS = 256
DEFAULT_BATCH_SIZE = 4096
# Largest admissible fraction of censored trials
MAX_CENSORED_FRACTION = 0.01


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """
    Parameters of a Monte Carlo run.

    Trial i draws from Generator(PCG64(mix_seed(base_seed, i))).

    Attributes:
        d: Dimension
        n_steps: Steps per path
        trials: Number of independent trials
        base_seed: Nonnegative 64-bit base seed
        spec: Bernstein function (identity for the plain walk)
        weights: Weights the increments are drawn from
        t: Time horizon of the Poissonized walk
        chunk_steps: Increments drawn per block
        step_cap: Steps after which a trial is censored
        confidence: Confidence level of reported intervals
        threads: Worker threads
        batch_size: Trials per work unit handed to a thread
    """

    d: int
    n_steps: int
    trials: int
    base_seed: int
    spec: PhiSpec
    weights: SubordinationWeights
    t: Optional[float] = None
    chunk_steps: int = DEFAULT_CHUNK_STEPS
    step_cap: int = DEFAULT_STEP_CAP
    confidence: float = 0.95
    threads: int = 1
    batch_size: int = DEFAULT_BATCH_SIZE

    def __post_init__(self):
        """Validate the configuration."""
        if self.d < 1:
            raise DomainError(f"dimension must be at least 1, got {self.d}")
        if self.trials < 1:
            raise DomainError(f"trials must be at least 1, got {self.trials}")
        if self.n_steps < 0:
            raise DomainError(f"n_steps must be nonnegative, got {self.n_steps}")
        if self.base_seed < 0:
            raise DomainError(f"base_seed must be nonnegative, got {self.base_seed}")
        if self.t is not None and self.t < 0.0:
            raise DomainError(f"time horizon must be nonnegative, got {self.t}")
        if min(self.chunk_steps, self.step_cap, self.threads, self.batch_size) < 1:
            raise DomainError("chunk_steps, step_cap, threads and batch_size must be positive")

    def echo(self) -> Dict[str, Any]:
        """Configuration echo for reports."""
        return {
            "d": self.d,
            "n_steps": self.n_steps,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "phi": self.spec.literal,
            "M": self.weights.M,
            "weights_method": self.weights.method.value,
            "t": self.t,
            "chunk_steps": self.chunk_steps,
            "step_cap": self.step_cap,
            "confidence": self.confidence,
        }


@dataclass(frozen=True, eq=False)
class CtrwPath:
    """Path of the Poissonized walk: event times and positions after each event."""

    times: np.ndarray
    positions: np.ndarray

    @property
    def events(self) -> int:
        """Number of jumps by the horizon."""
        return int(self.times.size) - 1


@dataclass
class ProbabilityEstimate:
    """Binomial estimate with a Wilson interval."""

    successes: int
    trials: int
    lower: float
    upper: float
    confidence: float

    @property
    def p(self) -> float:
        """Empirical probability."""
        return self.successes / self.trials

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "successes": self.successes,
            "trials": self.trials,
            "p": self.p,
            "lower": self.lower,
            "upper": self.upper,
            "confidence": self.confidence,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProbabilityEstimate":
        """Create ProbabilityEstimate from dictionary."""
        return cls(
            successes=int(data["successes"]),
            trials=int(data["trials"]),
            lower=float(data["lower"]),
            upper=float(data["upper"]),
            confidence=float(data["confidence"]),
        )


@dataclass
class ExitTimeReport:
    """
    Mean exit time from B(0, r) against 1 / phi(r^-2).

    Attributes:
        r: Radius
        mean_tau: Mean number of steps to leave the ball
        stderr: Standard error of mean_tau
        lower: Lower end of the t interval
        upper: Upper end of the t interval
        reference: 1 / phi(r^-2)
        ratio: mean_tau / reference
        ctrw_mean: Mean exit time of the Poissonized walk
        ctrw_stderr: Its standard error
        censored: Trials stopped at the step cap
        trials: Trials run
        config: Configuration echo
    """

    r: float
    mean_tau: float
    stderr: float
    lower: float
    upper: float
    reference: float
    ratio: float
    ctrw_mean: float
    ctrw_stderr: float
    censored: int
    trials: int
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def wald_gap(self) -> float:
        """|ctrw_mean - mean_tau| in joint standard errors."""
        joint = (self.stderr**2 + self.ctrw_stderr**2) ** 0.5
        return abs(self.ctrw_mean - self.mean_tau) / joint if joint > 0.0 else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "r": self.r,
            "mean_tau": self.mean_tau,
            "stderr": self.stderr,
            "lower": self.lower,
            "upper": self.upper,
            "reference": self.reference,
            "ratio": self.ratio,
            "ctrw_mean": self.ctrw_mean,
            "ctrw_stderr": self.ctrw_stderr,
            "censored": self.censored,
            "trials": self.trials,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExitTimeReport":
        """Create ExitTimeReport from dictionary."""
        return cls(**{key: data[key] for key in cls.__dataclass_fields__ if key in data})


@dataclass
class HittingReport:
    """Probability of entering B(y, r_n) by step n against n r_n^d j(|x - y|)."""

    x: List[int]
    y: List[int]
    n: int
    radius: float
    estimate: ProbabilityEstimate
    bound: float
    ratio: float
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "x": list(self.x),
            "y": list(self.y),
            "n": self.n,
            "radius": self.radius,
            "estimate": self.estimate.to_dict(),
            "bound": self.bound,
            "ratio": self.ratio,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HittingReport":
        """Create HittingReport from dictionary."""
        return cls(
            x=list(data["x"]),
            y=list(data["y"]),
            n=int(data["n"]),
            radius=float(data["radius"]),
            estimate=ProbabilityEstimate.from_dict(data["estimate"]),
            bound=float(data["bound"]),
            ratio=float(data["ratio"]),
            config=data.get("config", {}),
        )


@dataclass
class ProbeReport:
    """Maximal-inequality probe P(max_{k <= depth} |S_k| >= r/2)."""

    r: float
    gamma: float
    depth: int
    estimate: ProbabilityEstimate

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "r": self.r,
            "gamma": self.gamma,
            "depth": self.depth,
            "estimate": self.estimate.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProbeReport":
        """Create ProbeReport from dictionary."""
        return cls(
            r=float(data["r"]),
            gamma=float(data["gamma"]),
            depth=int(data["depth"]),
            estimate=ProbabilityEstimate.from_dict(data["estimate"]),
        )


@dataclass
class CalibrationResult:
    """Largest gamma on the grid k/64 whose probes stay below 1/4."""

    gamma: float
    r_grid: List[float]
    probes: List[ProbeReport]
    seeds: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "gamma": self.gamma,
            "r_grid": list(self.r_grid),
            "probes": [probe.to_dict() for probe in self.probes],
            "seeds": list(self.seeds),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CalibrationResult":
        """Create CalibrationResult from dictionary."""
        return cls(
            gamma=float(data["gamma"]),
            r_grid=[float(r) for r in data["r_grid"]],
            probes=[ProbeReport.from_dict(p) for p in data["probes"]],
            seeds=list(data.get("seeds", [])),
        )


@dataclass
class GammaTailReport:
    """P(T_n <= t) for sums T_n of n unit exponentials, against the bound t."""

    rows: List[Dict[str, float]]

    @property
    def min_gap(self) -> float:
        """Smallest t - P(T_n <= t) over the rows."""
        return min(row["gap"] for row in self.rows)

    @property
    def passed(self) -> bool:
        """Whether P(T_n <= t) <= t on every row."""
        return self.min_gap >= 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {"rows": self.rows, "min_gap": self.min_gap, "passed": self.passed}
