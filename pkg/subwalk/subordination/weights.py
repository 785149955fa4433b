"""
Step-distribution weights of discrete subordination.

a_m = (1/m!) * integral of t^m e^(-t) mu(dt) is computed two independent ways:

- weights_quadrature integrates the Levy density (or, for complete Bernstein
  functions without a closed-form density, the Stieltjes density on the cut)
  with adaptive Gauss-Kronrod panels.
- weights_series reads the Taylor coefficients of s -> 1 - phi(1 - s) off a
  discrete Cauchy integral.

For stable(alpha) the closed form alpha Gamma(m - alpha) / (Gamma(1 - alpha) m!)
is available as a third check.
"""

import logging
import math
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from scipy.integrate import quad_vec
from scipy.special import gammainc, gammaln

from ..bernstein import (
    PhiKind,
    PhiSpec,
    boundary_imag,
    eval_phi,
    eval_phi_complex,
    levy_tail,
    log_levy_density_of_log,
)
from ..exceptions import CapabilityError, DomainError, NumericError, ValidationError
from .models import SubordinationWeights, WeightsMethod

logger = logging.getLogger(__name__)

# Quadrature
BLOCK_SIZE = 64
INITIAL_TERMS = 64
DEFAULT_MAX_TERMS = 4096
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 4000
# Below this index the lower cutoff follows the t^(m - alpha) decay at 0
POISSON_WINDOW_START = 256
# Upper end of the log variable on the cut
CUT_LOG_LIMIT = 700.0

# Series
SERIES_MAX_TERMS = 64
SERIES_TABLE_MAX_TERMS = 16
SERIES_AGREEMENT = 1e-10
SERIES_TABLE_AGREEMENT = 1e-3
# Contour radii satisfy rho^M = RADIUS_DECAY
RADIUS_DECAY = (1e-3, 1e-4)
ALIASING_TARGET = 1e-16
CHOP_RELATIVE = 1e-13
NEGATIVE_TOLERANCE = 1e-12

# Tail laws
GAMMA_RATIO_SWITCH = 1e5
# Geometric grid of the tabulated tail runs up to this index
TAIL_GRID_LIMIT = float(1 << 40)


def stable_weights_exact(alpha: float, M: int) -> np.ndarray:
    """a_1..a_M of stable(alpha) by log-Gamma."""
    m = np.arange(1, M + 1, dtype=float)
    return np.exp(math.log(alpha) + gammaln(m - alpha) - gammaln(1.0 - alpha) - gammaln(m + 1.0))


def stable_survival(alpha: float, m: np.ndarray) -> np.ndarray:
    """
    Sum of a_k over k > m for stable(alpha), i.e. Gamma(m + 1 - alpha) / (Gamma(1 - alpha) m!).

    Large m use the expansion of the Gamma ratio in 1/(m + 1), where the
    difference of log-Gamma values would cancel.
    """
    x = np.asarray(m, dtype=float) + 1.0
    small = x < GAMMA_RATIO_SWITCH
    xs = np.where(small, x, 1.0)
    xl = np.where(small, GAMMA_RATIO_SWITCH, x)
    log_ratio = np.where(
        small,
        gammaln(xs - alpha) - gammaln(xs),
        -alpha * np.log(xl) + alpha * (alpha + 1.0) / (2.0 * xl),
    )
    return np.exp(log_ratio - gammaln(1.0 - alpha))


def stable_tail_exact(alpha: float, M: int) -> float:
    """Sum of a_m over m > M for stable(alpha)."""
    return float(stable_survival(alpha, np.asarray(M)))


def closed_form_weights(spec: PhiSpec, M: int) -> SubordinationWeights:
    """
    Closed-form weights for stable and stable_mixture specs.

    Raises:
        CapabilityError: For other kinds
    """
    if spec.kind is PhiKind.STABLE:
        alpha = spec.params[0]
        weights = stable_weights_exact(alpha, M)
        tail = stable_tail_exact(alpha, M)
    elif spec.kind is PhiKind.STABLE_MIXTURE:
        weights = np.zeros(M)
        tail = 0.0
        for param in spec.params:
            weights += 0.5 * stable_weights_exact(param, M)
            tail += 0.5 * stable_tail_exact(param, M)
    else:
        raise CapabilityError(f"{spec.literal} has no closed-form weights")
    return SubordinationWeights(weights, tail, WeightsMethod.CLOSED_FORM, spec)


def _integrate(func: Callable, lo: float, hi: float, what: str) -> np.ndarray:
    result, error, info = quad_vec(
        func, lo, hi, epsrel=QUAD_EPSREL, norm="max", limit=QUAD_LIMIT, full_output=True
    )
    if not info.success:
        worst = int(np.argmax(info.errors))
        panel = tuple(float(x) for x in info.intervals[worst])
        logger.error(f"Quadrature for {what} did not converge: {info.message}, panel {panel}")
        raise NumericError(
            f"Quadrature for {what} did not converge after {len(info.intervals)} panels",
            worst=panel,
            suggestion="lower the number of terms or use weights_series",
        )
    return np.atleast_1d(result)


def _levy_window(m0: float, m1: float, index: float) -> Tuple[float, float]:
    """Log-variable window carrying all but ~1e-20 of t^m e^(-t) mu(t) for m in [m0, m1]."""
    if m0 < POISSON_WINDOW_START:
        lo = math.log(1e-20 * (m0 - index)) / (m0 - index)
    else:
        lo = math.log(m0 - 12.0 * math.sqrt(m0))
    hi = math.log(m1 + 12.0 * math.sqrt(m1) + 40.0)
    return lo, hi


def _levy_block(spec: PhiSpec, m: np.ndarray) -> np.ndarray:
    index = spec.small_time_index
    lo, hi = _levy_window(float(m[0]), float(m[-1]), index)

    def log_integrand(u):
        return (m + 1.0) * u - np.exp(u) - gammaln(m + 1.0) + log_levy_density_of_log(spec, u)

    # Each component is scaled to O(1) near its peak at t = m - index
    shift = log_integrand(np.log(np.maximum(m - index, 0.5)))

    integral = _integrate(
        lambda u: np.exp(log_integrand(u) - shift), lo, hi, f"a_{int(m[0])}..a_{int(m[-1])}"
    )
    return integral * np.exp(shift)


def _levy_tail(spec: PhiSpec, M: int) -> float:
    index = spec.small_time_index
    lo, hi = _levy_window(M + 1.0, M + 1.0, index)

    def integrand(u):
        return np.exp(u + log_levy_density_of_log(spec, u)) * gammainc(M + 1.0, np.exp(u))

    body = float(_integrate(integrand, lo, hi, f"tail beyond M={M}")[0])
    # gammainc(M + 1, t) = 1 beyond the window
    return body + levy_tail(spec, math.exp(hi))


def _cut_index(spec: PhiSpec) -> float:
    """Exponent c with Im phi(-s) ~ s^c as s -> 0."""
    return float(sum(spec.params))


def _cut_integral(func: Callable, lo: float, hi: float, what: str) -> np.ndarray:
    # log singularity of the boundary values at s = 1
    return _integrate(func, lo, 0.0, what) + _integrate(func, 0.0, hi, what)


def _stieltjes_block(spec: PhiSpec, m: np.ndarray) -> np.ndarray:
    c = _cut_index(spec)
    alpha = spec.params[0]
    lo = -math.log(float(m[-1])) - 50.0 / (1.0 + c)
    hi = min(CUT_LOG_LIMIT, 60.0 / (float(m[0]) - alpha))

    def integrand(v):
        s = np.exp(v)
        decay = np.exp(v - (m + 1.0) * np.logaddexp(0.0, v))
        return boundary_imag(spec, s) * decay / math.pi

    scale = integrand(math.log(0.5) - np.log(m))
    integral = _cut_integral(
        lambda v: integrand(v) / scale, lo, hi, f"a_{int(m[0])}..a_{int(m[-1])}"
    )
    return integral * scale


def _stieltjes_tail(spec: PhiSpec, M: int) -> float:
    c = _cut_index(spec)
    alpha = spec.params[0]
    lo = math.log(1e-22 * c) / c - math.log(M)
    hi = min(CUT_LOG_LIMIT, 60.0 / (M + 1.0 - alpha))

    def integrand(v):
        decay = np.exp(-(M + 1.0) * np.logaddexp(0.0, v))
        return boundary_imag(spec, np.exp(v)) * decay / math.pi

    return float(_cut_integral(integrand, lo, hi, f"tail beyond M={M}")[0])


def weights_quadrature(
    spec: PhiSpec, tol: float = 1e-10, max_terms: int = DEFAULT_MAX_TERMS
) -> SubordinationWeights:
    """
    Compute a_m by quadrature, choosing M so the exact tail is at most tol.

    M doubles from 64 until the tail (computed by an independent integral)
    falls below tol or M reaches max_terms; in the latter case the weights are
    returned with converged=False.

    Args:
        spec: Bernstein function
        tol: Requested tail mass in (0, 1e-3]
        max_terms: Largest admissible M

    Returns:
        Subordination weights

    Raises:
        DomainError: If tol or max_terms is out of range
        CapabilityError: If spec has neither a Levy density nor boundary values
        NumericError: If a quadrature does not converge
    """
    if not 0.0 < tol <= 1e-3:
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol}")
    if max_terms < 1:
        raise DomainError(f"max_terms must be positive, got {max_terms}")

    if spec.has_levy_density:
        block_fn, tail_fn = _levy_block, _levy_tail
    elif spec.kind is PhiKind.STABLE_LOG:
        block_fn, tail_fn = _stieltjes_block, _stieltjes_tail
    else:
        raise CapabilityError(
            f"{spec.literal} has neither a closed-form Levy density nor boundary values; "
            "use weights_series"
        )

    M = min(INITIAL_TERMS, max_terms)
    tail = tail_fn(spec, M)
    while tail > tol and M < max_terms:
        M = min(2 * M, max_terms)
        tail = tail_fn(spec, M)
        logger.debug(f"{spec.literal}: tail beyond M={M} is {tail:.3e}")

    blocks = []
    for start in range(1, M + 1, BLOCK_SIZE):
        m = np.arange(start, min(start + BLOCK_SIZE, M + 1), dtype=float)
        blocks.append(block_fn(spec, m))
    weights = np.maximum(np.concatenate(blocks), 0.0)

    converged = tail <= tol
    if not converged:
        logger.warning(
            f"{spec.literal}: tail mass {tail:.3e} exceeds tol {tol:.1e} at max_terms={M}; "
            "the tail is carried in the result"
        )
    result = SubordinationWeights(
        weights, tail, WeightsMethod.QUADRATURE, spec, converged, tol, validate=False
    )
    try:
        result.check()
    except ValidationError as e:
        raise NumericError(f"{spec.literal}: quadrature weights fail the mass check: {e}")

    logger.info(f"Computed {M} quadrature weights for {spec.literal}, tail {tail:.3e}")
    return result


def _contour_coefficients(spec: PhiSpec, M: int, decay: float) -> np.ndarray:
    rho = decay ** (1.0 / M)
    needed = max(16.0, 4.0 * M, math.log(ALIASING_TARGET) / math.log(rho))
    K = 1 << int(math.ceil(math.log2(needed)))
    s = rho * np.exp(2j * np.pi * np.arange(K) / K)
    values = 1.0 - eval_phi_complex(spec, 1.0 - s)
    coefficients = np.fft.fft(values) / K
    return np.real(coefficients[1 : M + 1]) / rho ** np.arange(1, M + 1)


def _chebyshev_coefficients(spec: PhiSpec, M: int, degree: int) -> np.ndarray:
    count = 4 * degree
    nodes = 0.25 * (1.0 - np.cos(np.pi * (np.arange(count) + 0.5) / count))
    values = 1.0 - np.asarray(eval_phi(spec, 1.0 - nodes))
    fit = Chebyshev.fit(nodes, values, degree, domain=[0.0, 0.5])
    chopped = np.where(
        np.abs(fit.coef) < CHOP_RELATIVE * np.max(np.abs(fit.coef)), 0.0, fit.coef
    )
    monomial = Chebyshev(chopped, domain=[0.0, 0.5]).convert(kind=Polynomial).coef
    padded = np.zeros(M + 1)
    padded[: min(M + 1, monomial.size)] = monomial[: M + 1]
    return padded[1:]


def weights_series(spec: PhiSpec, M: int) -> SubordinationWeights:
    """
    Recover a_1..a_M as Taylor coefficients of 1 - phi(1 - s) at s = 0.

    Analytic kinds use the discrete Cauchy integral on |s| = rho at two radii;
    user tables use Chebyshev fits of two degrees on s in [0, 0.5].

    Args:
        spec: Bernstein function
        M: Number of coefficients

    Returns:
        Subordination weights with tail = max(0, 1 - sum)

    Raises:
        DomainError: If M < 1
        CapabilityError: If M is beyond the conditioning limit of the method
        NumericError: If the two estimates disagree or a coefficient is negative
    """
    if M < 1:
        raise DomainError(f"M must be at least 1, got {M}")

    if spec.kind is PhiKind.USER_TABLE:
        if M > SERIES_TABLE_MAX_TERMS:
            raise CapabilityError(
                f"series weights of a user table are limited to M <= {SERIES_TABLE_MAX_TERMS}"
            )
        first = _chebyshev_coefficients(spec, M, M + 4)
        second = _chebyshev_coefficients(spec, M, M + 6)
        agreement = SERIES_TABLE_AGREEMENT
    else:
        if M > SERIES_MAX_TERMS:
            raise CapabilityError(
                f"series weights are ill-conditioned beyond M={SERIES_MAX_TERMS}; "
                "use weights_quadrature"
            )
        first = _contour_coefficients(spec, M, RADIUS_DECAY[0])
        second = _contour_coefficients(spec, M, RADIUS_DECAY[1])
        agreement = SERIES_AGREEMENT

    gap = np.abs(first - second)
    worst = int(np.argmax(gap))
    if gap[worst] > agreement:
        logger.error(f"{spec.literal}: series estimates disagree by {gap[worst]:.3e}")
        raise NumericError(
            f"series coefficient a_{worst + 1} is unstable (estimates differ by {gap[worst]:.3e})",
            worst=worst + 1,
            suggestion="use weights_quadrature",
        )

    if np.any(first < -NEGATIVE_TOLERANCE):
        index = int(np.argmin(first))
        raise NumericError(
            f"series coefficient a_{index + 1} = {first[index]:.3e} is negative", worst=index + 1
        )
    weights = np.maximum(first, 0.0)
    tail = max(0.0, 1.0 - float(np.sum(weights)))

    logger.debug(f"Computed {M} series weights for {spec.literal}, tail {tail:.3e}")
    return SubordinationWeights(weights, tail, WeightsMethod.SERIES, spec, converged=True)


def _tabulated_survival(
    tail_fn: Callable[[PhiSpec, int], float], spec: PhiSpec, M: int
) -> Callable[[np.ndarray], np.ndarray]:
    # Power-law tails are close to linear in log-log coordinates
    grid = [float(M)]
    while grid[-1] * 2.0 <= TAIL_GRID_LIMIT:
        grid.append(grid[-1] * 2.0)
    log_m = np.log(grid)
    log_s = np.log([tail_fn(spec, int(m)) for m in grid])
    if np.any(np.diff(log_s) >= 0.0):
        raise NumericError(f"{spec.literal}: tabulated tail is not decreasing")
    slope = (log_s[-1] - log_s[-2]) / (log_m[-1] - log_m[-2])
    logger.debug(f"{spec.literal}: tail tabulated on {len(grid)} points, final slope {slope:.4f}")

    def survival(m: np.ndarray) -> np.ndarray:
        x = np.log(np.asarray(m, dtype=float))
        inside = np.interp(x, log_m, log_s)
        beyond = log_s[-1] + slope * (x - log_m[-1])
        return np.exp(np.where(x > log_m[-1], beyond, inside))

    return survival


def tail_survival(spec: PhiSpec, M: int) -> Callable[[np.ndarray], np.ndarray]:
    """
    Survival function m -> sum of a_k over k > m, valid for m >= M.

    Stable laws and their mixtures are exact. stable_log tabulates the cut
    integral on a doubling grid and extends it by its final power law.

    Raises:
        CapabilityError: If the kind has no tail beyond the computed weights
    """
    if M < 1:
        raise DomainError(f"M must be at least 1, got {M}")
    if spec.kind is PhiKind.STABLE:
        alpha = spec.params[0]
        return lambda m: stable_survival(alpha, m)
    if spec.kind is PhiKind.STABLE_MIXTURE:
        alpha, beta = spec.params
        return lambda m: 0.5 * (stable_survival(alpha, m) + stable_survival(beta, m))
    if spec.kind is PhiKind.STABLE_LOG:
        return _tabulated_survival(_stieltjes_tail, spec, M)
    raise CapabilityError(f"{spec.literal} has no tail law beyond the computed weights")
