"""
Data models for Bernstein functions.

PhiSpec is the immutable description of a catalog entry; it validates its
parameters and carries the normalization constant at construction.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ConfigurationError
from .catalog import ANALYTIC_KINDS, CLOSED_FORM_DENSITY, PhiKind, Table, raw_phi

# Dyadic points used by the divided-difference invariant
_DD_GRID = tuple([2.0**-k for k in range(12, 0, -1)] + [1.0, 1.5, 2.0])

# Short literal prefixes accepted on the command line
LITERAL_NAMES = {
    PhiKind.STABLE: "stable",
    PhiKind.STABLE_MIXTURE: "mix",
    PhiKind.STABLE_LOG: "log",
    PhiKind.LOG_COSH: "logcosh",
    PhiKind.USER_TABLE: "table",
}


def _check_unit_interval(name: str, value: float):
    if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
        raise ConfigurationError(f"{name} out of (0,1): {value!r}")


@dataclass(frozen=True)
class PhiSpec:
    """
    A complete Bernstein function from the catalog, normalized so that phi(1) = 1.

    Attributes:
        kind: Catalog kind
        params: Catalog parameters (alpha[, beta])
        table: (lambda, phi) samples for user_table
        drift: Linear drift coefficient; must be 0
        source: Where a user table was read from, for reports
        normalization: Factor c_norm with c_norm * phi(1) = 1
    """

    kind: PhiKind
    params: Tuple[float, ...] = ()
    table: Optional[Table] = None
    drift: float = 0.0
    source: Optional[str] = field(default=None, compare=False)
    normalization: float = field(init=False, compare=False)

    def __post_init__(self):
        """Validate parameters and compute the normalization."""
        if self.drift != 0.0:
            raise ConfigurationError(f"drift must be 0, got {self.drift}")

        kind = PhiKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

        if kind is PhiKind.STABLE or kind is PhiKind.LOG_COSH:
            if len(self.params) != 1:
                raise ConfigurationError(f"{kind.value} takes one parameter (alpha)")
            _check_unit_interval("alpha", self.params[0])
        elif kind is PhiKind.STABLE_MIXTURE:
            if len(self.params) != 2:
                raise ConfigurationError("stable_mixture takes two parameters (alpha, beta)")
            _check_unit_interval("alpha", self.params[0])
            _check_unit_interval("beta", self.params[1])
        elif kind is PhiKind.STABLE_LOG:
            if len(self.params) != 2:
                raise ConfigurationError("stable_log takes two parameters (alpha, beta)")
            alpha, beta = self.params
            _check_unit_interval("alpha", alpha)
            if not 0.0 < beta < 1.0 - alpha:
                raise ConfigurationError(f"beta out of (0, 1 - alpha) = (0, {1 - alpha}): {beta}")
        else:
            object.__setattr__(self, "table", self._checked_table(self.table))

        raw_one = float(raw_phi(kind, self.params, self.table, np.array(1.0)))
        if not raw_one > 0.0 or not math.isfinite(raw_one):
            raise ConfigurationError(f"phi(1) must be positive and finite, got {raw_one}")
        object.__setattr__(self, "normalization", 1.0 / raw_one)
        self._check_divided_differences()

    @staticmethod
    def _checked_table(table: Optional[Table]) -> Table:
        if table is None:
            raise ConfigurationError("user_table requires (lambda, phi) samples")
        lams = np.asarray(table[0], dtype=float)
        values = np.asarray(table[1], dtype=float)
        if lams.ndim != 1 or lams.shape != values.shape or lams.size < 2:
            raise ConfigurationError("user_table needs two equally long columns of samples")
        if np.any(~np.isfinite(lams)) or np.any(~np.isfinite(values)):
            raise ConfigurationError("user_table samples must be finite")
        if lams[0] < 0.0 or np.any(np.diff(lams) <= 0.0):
            raise ConfigurationError("user_table lambdas must be nonnegative and increasing")
        if lams[0] == 0.0:
            if values[0] != 0.0:
                raise ConfigurationError("user_table must vanish at 0 (no killing term)")
        else:
            lams = np.concatenate([[0.0], lams])
            values = np.concatenate([[0.0], values])
        if lams[-1] < 2.0:
            raise ConfigurationError("user_table must cover [0, 2]")
        if np.any(np.diff(values) <= 0.0):
            raise ConfigurationError("user_table values must be strictly increasing")
        return (tuple(lams.tolist()), tuple(values.tolist()))

    def _check_divided_differences(self):
        grid = np.array(_DD_GRID)
        values = self.normalization * raw_phi(self.kind, self.params, self.table, grid)
        slopes = np.diff(values) / np.diff(grid)
        if np.any(slopes <= 0.0):
            raise ConfigurationError(f"{self.literal}: phi is not increasing on the dyadic grid")
        if np.any(slopes[1:] > slopes[:-1] * (1.0 + 1e-9)):
            raise ConfigurationError(f"{self.literal}: phi is not concave on the dyadic grid")

    @classmethod
    def stable(cls, alpha: float) -> "PhiSpec":
        """lam^alpha."""
        return cls(PhiKind.STABLE, (alpha,))

    @classmethod
    def stable_mixture(cls, alpha: float, beta: float) -> "PhiSpec":
        """lam^alpha + lam^beta."""
        return cls(PhiKind.STABLE_MIXTURE, (alpha, beta))

    @classmethod
    def stable_log(cls, alpha: float, beta: float) -> "PhiSpec":
        """lam^alpha * log(1 + lam)^beta."""
        return cls(PhiKind.STABLE_LOG, (alpha, beta))

    @classmethod
    def log_cosh(cls, alpha: float) -> "PhiSpec":
        """(log cosh sqrt(lam))^alpha."""
        return cls(PhiKind.LOG_COSH, (alpha,))

    @classmethod
    def user_table(
        cls, lams: Sequence[float], values: Sequence[float], source: Optional[str] = None
    ) -> "PhiSpec":
        """Monotone cubic interpolation of (lam, phi(lam)) samples."""
        table = (tuple(float(x) for x in lams), tuple(float(v) for v in values))
        return cls(PhiKind.USER_TABLE, (), table, source=source)

    @classmethod
    def identity(cls) -> "PhiSpec":
        """phi(lam) = lam, the trivial subordination with a_1 = 1, given as a table."""
        return cls.user_table((0.0, 1.0, 2.0), (0.0, 1.0, 2.0), source="identity")

    @property
    def alpha(self) -> Optional[float]:
        """First catalog parameter, if any."""
        return self.params[0] if self.params else None

    @property
    def beta(self) -> Optional[float]:
        """Second catalog parameter, if any."""
        return self.params[1] if len(self.params) > 1 else None

    @property
    def has_levy_density(self) -> bool:
        """Whether the Levy density is available in closed form."""
        return self.kind in CLOSED_FORM_DENSITY

    @property
    def is_analytic(self) -> bool:
        """Whether complex evaluation is available."""
        return self.kind in ANALYTIC_KINDS

    @property
    def small_time_index(self) -> float:
        """Exponent a with mu(t) ~ t^(-1-a) as t -> 0, for closed-form densities."""
        return max(self.params) if self.params else 1.0

    @property
    def literal(self) -> str:
        """Command-line literal, e.g. ``stable:0.5``."""
        name = LITERAL_NAMES[self.kind]
        if self.kind is PhiKind.USER_TABLE:
            if self.source == "identity":
                return "identity"
            return f"{name}:{self.source or 'inline'}"
        return f"{name}:{','.join(repr(p) for p in self.params)}"

    def to_dict(self) -> Dict[str, Any]:
        """Serializable description."""
        result: Dict[str, Any] = {"kind": self.kind.value, "literal": self.literal}
        if self.params:
            result["alpha"] = self.params[0]
        if len(self.params) > 1:
            result["beta"] = self.params[1]
        if self.table is not None:
            result["table"] = [list(self.table[0]), list(self.table[1])]
        return result

    def __str__(self) -> str:
        """Return the literal form."""
        return self.literal


@dataclass(frozen=True)
class ScalingProfile:
    """
    Empirical scaling exponents and prefactors of phi on a dyadic grid in (0, 1].

    c_lower * (R/r)^alpha_lower <= phi(R)/phi(r) <= c_upper * (R/r)^alpha_upper
    holds for every grid pair r <= R.
    """

    alpha_lower: float
    alpha_upper: float
    c_lower: float
    c_upper: float
    grid: Tuple[float, ...]
    argmin_pair: Tuple[float, float]
    argmax_pair: Tuple[float, float]

    def to_dict(self) -> Dict[str, Any]:
        """Serializable description."""
        return {
            "alpha_lower": self.alpha_lower,
            "alpha_upper": self.alpha_upper,
            "c_lower": self.c_lower,
            "c_upper": self.c_upper,
            "levels": len(self.grid) - 1,
            "argmin_pair": list(self.argmin_pair),
            "argmax_pair": list(self.argmax_pair),
        }


@dataclass
class AxiomCheck:
    """Outcome of one check of verify_bernstein_axioms."""

    name: str
    passed: bool
    worst: float = 0.0
    detail: str = ""
    skipped: int = 0


@dataclass
class AxiomReport:
    """Validation report of a Bernstein function; failures are entries, never raised."""

    spec: PhiSpec
    tol: float
    checks: List[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> AxiomCheck:
        """Look up a check by name."""
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def failures(self) -> List[str]:
        """Names of failed checks."""
        return [check.name for check in self.checks if not check.passed]
