"""
Evaluation and inversion of normalized Bernstein functions.

All functions accept scalars or numpy arrays and return the same shape;
scalars come back as Python floats.
"""

import logging
import math
from functools import lru_cache
from typing import Union

import numpy as np

from ..exceptions import DomainError
from .catalog import (
    log_raw_levy_density,
    raw_boundary_imag,
    raw_levy_tail,
    raw_phi,
    raw_phi_complex,
)
from .models import PhiSpec

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Bisection budget and target accuracy of the inverse
INVERSE_MAX_STEPS = 60
INVERSE_RTOL = 1e-12


def _as_output(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(value)
    return value


def eval_phi(spec: PhiSpec, lam: ArrayLike) -> ArrayLike:
    """
    Evaluate the normalized function phi(lam) / phi(1).

    Args:
        spec: Bernstein function
        lam: Nonnegative argument(s)

    Returns:
        Normalized value(s)

    Raises:
        DomainError: If lam is negative or outside a user table
    """
    arr = np.asarray(lam, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError(f"phi is defined for lam >= 0, got min {arr.min()}")
    values = spec.normalization * raw_phi(spec.kind, spec.params, spec.table, arr)
    if np.any(np.isnan(values)):
        raise DomainError(f"{spec.literal}: lam={arr.max()} is outside the sampled table range")
    return _as_output(values, lam)


def eval_phi_complex(spec: PhiSpec, lam: np.ndarray) -> np.ndarray:
    """Evaluate the normalized function for complex lam with Re(lam) > 0."""
    return spec.normalization * raw_phi_complex(spec.kind, spec.params, lam)


def boundary_imag(spec: PhiSpec, s: np.ndarray) -> np.ndarray:
    """Im phi(-s + i0) of the normalized function, s > 0."""
    return spec.normalization * raw_boundary_imag(spec.kind, spec.params, s)


def log_levy_density(spec: PhiSpec, t: ArrayLike) -> ArrayLike:
    """
    Logarithm of the Levy density of the normalized function.

    Raises:
        DomainError: If t is not positive
        CapabilityError: For kinds without a closed-form density
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("Levy density is defined for t > 0")
    values = math.log(spec.normalization) + log_raw_levy_density(
        spec.kind, spec.params, np.log(arr)
    )
    return _as_output(values, t)


def eval_levy_density(spec: PhiSpec, t: ArrayLike) -> ArrayLike:
    """
    Density of the Levy measure of the normalized function.

    For stable(alpha) this is alpha / Gamma(1 - alpha) * t^(-1 - alpha).

    Args:
        spec: Bernstein function with a closed-form density
        t: Positive argument(s)

    Returns:
        Density value(s)

    Raises:
        DomainError: If t is not positive
        CapabilityError: For kinds without a closed-form density
    """
    return _as_output(np.exp(log_levy_density(spec, t)), t)


@lru_cache(maxsize=4096)
def _invert(spec: PhiSpec, y: float) -> float:
    if y == 1.0:
        return 1.0

    # Bracket [lo, 2 lo] with phi(lo) <= y < phi(2 lo)
    lo = 0.5
    f_lo = eval_phi(spec, lo)
    while f_lo > y:
        lo *= 0.5
        f_lo = eval_phi(spec, lo)
        if lo == 0.0:
            raise DomainError(f"Cannot bracket phi^-1({y}) for {spec.literal}")
    if f_lo == y:
        return lo
    hi = 2.0 * lo

    steps = 0
    mid = lo
    while steps < INVERSE_MAX_STEPS:
        mid = math.sqrt(lo * hi)
        f_mid = eval_phi(spec, mid)
        if abs(f_mid - y) <= INVERSE_RTOL * y:
            break
        if f_mid < y:
            lo = mid
        else:
            hi = mid
        steps += 1

    logger.debug(f"phi^-1({y}) for {spec.literal} = {mid} after {steps} bisection steps")
    return mid


def invert_phi(spec: PhiSpec, y: float) -> float:
    """
    Invert the normalized function on (0, 1] by geometric bisection.

    Args:
        spec: Bernstein function
        y: Target value in (0, 1]

    Returns:
        lam in (0, 1] with |phi(lam) - y| <= 1e-12 * y

    Raises:
        DomainError: If y is outside (0, 1]
    """
    y = float(y)
    if not 0.0 < y <= 1.0:
        raise DomainError(f"phi^-1 is evaluated on (0, 1], got {y}")
    return _invert(spec, y)


def levy_tail(spec: PhiSpec, t: float) -> float:
    """Levy measure of (t, infinity) for the normalized function."""
    if t <= 0.0:
        raise DomainError("Levy tail is defined for t > 0")
    return spec.normalization * raw_levy_tail(spec.kind, spec.params, t)


def log_levy_density_of_log(spec: PhiSpec, log_t: np.ndarray) -> np.ndarray:
    """log mu(e^u) for the normalized function; finite for any real u."""
    return math.log(spec.normalization) + log_raw_levy_density(spec.kind, spec.params, log_t)
