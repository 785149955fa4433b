"""
Catalog of complete Bernstein functions.

Raw (unnormalized) evaluation of every catalog kind, for real arguments
and, for the analytic kinds, complex arguments with positive real part.
Normalization to phi(1) = 1 happens in PhiSpec.
"""

from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import gammaln

from ..exceptions import CapabilityError

# log cosh(x) switches to its asymptotic form above this argument
LOG_COSH_SWITCH = 20.0

Table = Tuple[Tuple[float, ...], Tuple[float, ...]]


class PhiKind(str, Enum):
    """Catalog kinds."""

    STABLE = "stable"
    STABLE_MIXTURE = "stable_mixture"
    STABLE_LOG = "stable_log"
    LOG_COSH = "log_cosh"
    USER_TABLE = "user_table"


# Kinds whose Levy density is available in closed form
CLOSED_FORM_DENSITY = (PhiKind.STABLE, PhiKind.STABLE_MIXTURE)
# Kinds that extend analytically to Re(lam) > 0
ANALYTIC_KINDS = (PhiKind.STABLE, PhiKind.STABLE_MIXTURE, PhiKind.STABLE_LOG, PhiKind.LOG_COSH)


@lru_cache(maxsize=32)
def table_interpolant(table: Table) -> PchipInterpolator:
    """Monotone cubic interpolant of a user table; NaN outside the sampled range."""
    lams, values = table
    return PchipInterpolator(np.asarray(lams), np.asarray(values), extrapolate=False)


def _log_cosh_sqrt(lam: np.ndarray) -> np.ndarray:
    x = np.sqrt(lam)
    small = np.minimum(x, LOG_COSH_SWITCH)
    near = np.log1p(2.0 * np.sinh(small / 2.0) ** 2)
    far = x - np.log(2.0) + np.log1p(np.exp(-2.0 * x))
    return np.where(x < LOG_COSH_SWITCH, near, far)


def raw_phi(
    kind: PhiKind, params: Sequence[float], table: Optional[Table], lam: np.ndarray
) -> np.ndarray:
    """
    Evaluate the unnormalized function on real arguments.

    Args:
        kind: Catalog kind
        params: Catalog parameters
        table: Sample table for user_table
        lam: Nonnegative arguments

    Returns:
        Array of function values (NaN where a table does not cover lam)
    """
    lam = np.asarray(lam, dtype=float)
    if kind is PhiKind.STABLE:
        return np.power(lam, params[0])
    if kind is PhiKind.STABLE_MIXTURE:
        return np.power(lam, params[0]) + np.power(lam, params[1])
    if kind is PhiKind.STABLE_LOG:
        return np.power(lam, params[0]) * np.power(np.log1p(lam), params[1])
    if kind is PhiKind.LOG_COSH:
        return np.power(_log_cosh_sqrt(lam), params[0])
    assert table is not None
    return np.asarray(table_interpolant(table)(lam), dtype=float)


def raw_phi_complex(kind: PhiKind, params: Sequence[float], lam: np.ndarray) -> np.ndarray:
    """
    Evaluate the unnormalized function on complex arguments with Re(lam) > 0.

    Principal branches are the analytic continuation from the positive axis.

    Raises:
        CapabilityError: For kinds without an analytic continuation
    """
    lam = np.asarray(lam, dtype=complex)
    if kind is PhiKind.STABLE:
        return np.power(lam, params[0])
    if kind is PhiKind.STABLE_MIXTURE:
        return np.power(lam, params[0]) + np.power(lam, params[1])
    if kind is PhiKind.STABLE_LOG:
        return np.power(lam, params[0]) * np.power(np.log1p(lam), params[1])
    if kind is PhiKind.LOG_COSH:
        return np.power(np.log(np.cosh(np.sqrt(lam))), params[0])
    raise CapabilityError(f"{kind.value} has no analytic continuation off the real axis")


def raw_boundary_imag(kind: PhiKind, params: Sequence[float], s: np.ndarray) -> np.ndarray:
    """
    Imaginary part of the unnormalized function on the cut, lam = -s + i0, s > 0.

    This is pi times the Stieltjes density used by the quadrature path for
    kinds without a closed-form Levy density.

    Raises:
        CapabilityError: For kinds whose boundary values are not implemented
    """
    s = np.asarray(s, dtype=float)
    if kind is PhiKind.STABLE:
        return np.power(s, params[0]) * np.sin(np.pi * params[0])
    if kind is PhiKind.STABLE_MIXTURE:
        alpha, beta = params
        return np.power(s, alpha) * np.sin(np.pi * alpha) + np.power(s, beta) * np.sin(
            np.pi * beta
        )
    if kind is PhiKind.STABLE_LOG:
        alpha, beta = params
        head = np.power(s, alpha) * np.exp(1j * np.pi * alpha)
        below = s < 1.0
        # log(1 - s + i0) is a negative real approached from above when s < 1
        mag_below = np.power(np.abs(np.log1p(-np.where(below, s, 0.0))), beta)
        log_above = np.log(np.abs(np.where(below, 2.0, s) - 1.0)) + 1j * np.pi
        tail = np.where(
            below,
            mag_below * np.exp(1j * np.pi * beta),
            np.power(log_above, beta),
        )
        return np.imag(head * tail)
    raise CapabilityError(f"Boundary values of {kind.value} are not available")


def log_raw_levy_density(
    kind: PhiKind, params: Sequence[float], log_t: np.ndarray
) -> np.ndarray:
    """
    Logarithm of the unnormalized Levy density as a function of log t.

    stable(a): a / Gamma(1 - a) * t^(-1 - a); mixtures add densities.

    Raises:
        CapabilityError: For kinds without a closed-form density
    """
    log_t = np.asarray(log_t, dtype=float)

    def stable_term(a: float) -> np.ndarray:
        return np.log(a) - gammaln(1.0 - a) - (1.0 + a) * log_t

    if kind is PhiKind.STABLE:
        return stable_term(params[0])
    if kind is PhiKind.STABLE_MIXTURE:
        return np.logaddexp(stable_term(params[0]), stable_term(params[1]))
    raise CapabilityError(
        f"Levy density of {kind.value} has no closed form; use the series weights path"
    )


def raw_levy_tail(kind: PhiKind, params: Sequence[float], t: float) -> float:
    """
    Unnormalized Levy measure of (t, infinity).

    stable(a): t^(-a) / Gamma(1 - a).

    Raises:
        CapabilityError: For kinds without a closed-form density
    """

    def stable_tail(a: float) -> float:
        return float(np.exp(-a * np.log(t) - gammaln(1.0 - a)))

    if kind is PhiKind.STABLE:
        return stable_tail(params[0])
    if kind is PhiKind.STABLE_MIXTURE:
        return stable_tail(params[0]) + stable_tail(params[1])
    raise CapabilityError(f"Levy tail of {kind.value} has no closed form")
