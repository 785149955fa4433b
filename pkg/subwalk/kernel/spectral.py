"""
Spectral kernels on the periodic lattice.

Kernels are computed on the discrete torus (Z/NZ)^d by inverting the
symbol on the N-point frequency grid. The result is exactly the
periodization of the kernel on Z^d; the periodization error inside the box
|x|_inf <= N/4 is estimated from the kernel's own far field.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import zeta
from scipy.stats import poisson

from ..bernstein import PhiSpec, eval_phi, invert_phi, scaling_profile
from ..exceptions import DomainError, NumericError, ValidationError
from ..utils.cache import LRUCache
from .models import KernelMethod, LatticeKernel, Time
from .symmetry import clip_negative, symmetrize

logger = logging.getLogger(__name__)

MAX_DIMENSION = 3
DEFAULT_MAX_ERROR = 1e-6
DEFAULT_MAX_GRID = {1: 1 << 20, 2: 4096, 3: 128}
# Decay exponent assumed when no scaling profile is available
FALLBACK_DECAY_INDEX = 0.1
# Symbol moduli may exceed 1 by roundoff only
SYMBOL_SLACK = 1e-14
POISSON_TAIL = 1e-12

# On-diagonal quadrature
FOURIER_LEVELS_BELOW = 20
FOURIER_POINTS = (16, 24)
FOURIER_AGREEMENT = 1e-8

_grid_cache: LRUCache[np.ndarray] = LRUCache(capacity=8)


def check_dimension(d: int):
    """Exact kernels are limited to d <= 3."""
    if not 1 <= d <= MAX_DIMENSION:
        raise DomainError(f"exact kernels need 1 <= d <= {MAX_DIMENSION}, got d={d}")


def check_grid(grid: int, radius: Optional[int] = None) -> int:
    """Validate a grid size: a power of two, at least 4 * radius."""
    if grid < 4 or grid & (grid - 1):
        raise DomainError(f"grid_points_per_axis must be a power of two >= 4, got {grid}")
    if radius is not None and grid < 4 * radius:
        raise DomainError(f"grid_points_per_axis={grid} must be at least 4 * radius = {4 * radius}")
    return grid


def default_grid(radius: int) -> int:
    """Smallest admissible grid for a box of the given radius."""
    return max(4, 1 << int(math.ceil(math.log2(max(4 * radius, 1)))))


def laplacian_symbol(d: int, grid: int) -> np.ndarray:
    """
    lam(theta) = 1 - Psi(theta) = (2/d) * sum_m sin^2(theta_m / 2) on the half grid.

    The last axis holds the N/2 + 1 nonnegative frequencies of a real FFT.
    """
    key = ("laplacian", d, grid)
    cached = _grid_cache.get(key)
    if cached is not None:
        return cached

    full = np.sin(np.pi * np.fft.fftfreq(grid)) ** 2
    half = np.sin(np.pi * np.fft.rfftfreq(grid)) ** 2
    axes = [full] * (d - 1) + [half]
    lam = np.zeros([a.size for a in axes])
    for axis, values in enumerate(axes):
        shape = [1] * d
        shape[axis] = values.size
        lam = lam + values.reshape(shape)
    lam *= 2.0 / d
    lam.setflags(write=False)
    _grid_cache.put(key, lam)
    return lam


def subordinate_symbol(spec: PhiSpec, d: int, grid: int) -> np.ndarray:
    """
    1 - phi(1 - Psi(theta)) on the half grid.

    Raises:
        NumericError: If the modulus exceeds 1 at a node
    """
    key = ("subordinate", spec, d, grid)
    cached = _grid_cache.get(key)
    if cached is not None:
        return cached

    sigma = 1.0 - np.asarray(eval_phi(spec, laplacian_symbol(d, grid)))
    worst = float(np.max(np.abs(sigma)))
    if worst > 1.0 + SYMBOL_SLACK:
        node = tuple(int(i) for i in np.unravel_index(int(np.argmax(np.abs(sigma))), sigma.shape))
        raise NumericError(f"{spec.literal}: symbol modulus {worst} > 1 at node {node}", worst=node)
    sigma.setflags(write=False)
    _grid_cache.put(key, sigma)
    return sigma


def clear_symbol_cache():
    """Drop cached symbol grids."""
    _grid_cache.clear()


def invert_symbol(symbol: np.ndarray, d: int, grid: int) -> np.ndarray:
    """Kernel on the torus, in FFT order, from a real even symbol on the half grid."""
    return np.fft.irfftn(symbol, s=(grid,) * d, axes=tuple(range(d)))


@lru_cache(maxsize=64)
def decay_index(spec: Optional[PhiSpec]) -> float:
    """Lower scaling exponent used for the periodization estimate."""
    if spec is None:
        return FALLBACK_DECAY_INDEX
    try:
        return min(scaling_profile(spec).alpha_lower, 1.0)
    except ValidationError:
        return FALLBACK_DECAY_INDEX


def alias_constant(d: int, index: float) -> float:
    """
    Bound on sum over k != 0 of (3 |k|_inf)^-(d + 2 index).

    Uses #{k : |k|_inf = j} <= 2d 3^(d-1) j^(d-1).
    """
    return 2.0 * d * 3.0 ** (d - 1) * 3.0 ** (-(d + 2.0 * index)) * float(zeta(1.0 + 2.0 * index))


def _wrapped_distance(grid: int) -> np.ndarray:
    offsets = np.arange(grid)
    return np.minimum(offsets, grid - offsets)


def alias_estimate(torus: np.ndarray, index: float) -> float:
    """
    Periodization error inside |x|_inf <= N/4 from the torus kernel's far field.

    Images of the box lie at sup-distance >= 3|k| N / 4 while the far zone
    starts at N / 4, so each image is bounded by the far-zone maximum times
    (3|k|)^-(d + 2 index).
    """
    d = torus.ndim
    grid = torus.shape[0]
    far = np.zeros(torus.shape, dtype=bool)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = grid
        far |= (_wrapped_distance(grid) >= grid // 4).reshape(shape)
    far_max = float(np.max(np.abs(torus[far])))
    return alias_constant(d, index) * far_max


def box_from_torus(torus: np.ndarray, radius: int) -> np.ndarray:
    """Centered box of half-width radius cut out of an FFT-ordered torus array."""
    grid = torus.shape[0]
    index = np.arange(-radius, radius + 1) % grid
    return np.array(torus[np.ix_(*([index] * torus.ndim))])


def torus_kernel(
    torus: np.ndarray,
    d: int,
    grid: int,
    radius: int,
    time: Time,
    method: KernelMethod,
    spec: Optional[PhiSpec],
    truncation_error: float = 0.0,
    what: str = "kernel",
) -> LatticeKernel:
    """Symmetrize, clip and box a torus array into a LatticeKernel."""
    torus = clip_negative(symmetrize(torus, periodic=True), what)
    aliasing = alias_estimate(torus, decay_index(spec))
    return LatticeKernel(
        d=d,
        radius=radius,
        time=time,
        values=box_from_torus(torus, radius),
        method=method,
        error_bound=aliasing + truncation_error,
        truncation_error=truncation_error,
        grid=grid,
        torus=torus,
        spec=spec,
    )


def _resolve(d: int, grid: Optional[int], radius: Optional[int]) -> Tuple[int, int]:
    check_dimension(d)
    if grid is None:
        if radius is None:
            raise DomainError("either grid_points_per_axis or radius is required")
        grid = default_grid(radius)
    check_grid(grid, radius)
    if radius is None:
        radius = grid // 4
    return grid, radius


def _warn_if_inexact(kernel: LatticeKernel, max_error: float, what: str):
    if kernel.error_bound > max_error:
        logger.warning(
            f"{what}: error bound {kernel.error_bound:.3e} exceeds {max_error:.1e} "
            f"on a grid of {kernel.grid} points per axis"
        )


def nstep_kernel_spectral(
    spec: PhiSpec,
    d: int,
    n: int,
    grid_points_per_axis: Optional[int] = None,
    radius: Optional[int] = None,
    max_error: float = DEFAULT_MAX_ERROR,
) -> LatticeKernel:
    """
    n-step kernel by inverting (1 - phi(1 - Psi))^n on the torus.

    Args:
        spec: Bernstein function
        d: Dimension (1..3)
        n: Number of steps (0 gives the point mass)
        grid_points_per_axis: Torus size N, a power of two >= 4 * radius
        radius: Box half-width (default N / 4)
        max_error: Error bound above which a warning is logged

    Returns:
        Spectral kernel

    Raises:
        DomainError: On invalid dimension, grid or step count
        NumericError: If the symbol modulus exceeds 1 or masses are negative
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    grid, radius = _resolve(d, grid_points_per_axis, radius)
    symbol = subordinate_symbol(spec, d, grid) ** n
    kernel = torus_kernel(
        invert_symbol(symbol, d, grid),
        d,
        grid,
        radius,
        n,
        KernelMethod.SPECTRAL,
        spec,
        what=f"spectral kernel n={n}",
    )
    logger.debug(
        f"Spectral kernel {spec.literal} d={d} n={n} N={grid}: bound {kernel.error_bound:.2e}"
    )
    _warn_if_inexact(kernel, max_error, f"spectral kernel n={n}")
    return kernel


def ctrw_kernel(
    spec: PhiSpec,
    d: int,
    t: float,
    grid_points_per_axis: Optional[int] = None,
    radius: Optional[int] = None,
    max_error: float = DEFAULT_MAX_ERROR,
) -> LatticeKernel:
    """
    Kernel q(t, 0, .) of the Poissonized walk from the symbol exp(-t phi(1 - Psi)).

    Raises:
        DomainError: If t is not positive or the grid is invalid
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    grid, radius = _resolve(d, grid_points_per_axis, radius)
    symbol = np.exp(-t * np.asarray(eval_phi(spec, laplacian_symbol(d, grid))))
    kernel = torus_kernel(
        invert_symbol(symbol, d, grid),
        d,
        grid,
        radius,
        float(t),
        KernelMethod.POISSONIZED,
        spec,
        what=f"ctrw kernel t={t}",
    )
    _warn_if_inexact(kernel, max_error, f"ctrw kernel t={t}")
    return kernel


def poisson_cutoff(t: float) -> int:
    """Smallest K with P(Poisson(t) > K) <= 1e-12."""
    return int(poisson.isf(POISSON_TAIL, t)) + 1


def ctrw_kernel_poisson_sum(
    spec: PhiSpec,
    d: int,
    t: float,
    grid_points_per_axis: Optional[int] = None,
    radius: Optional[int] = None,
) -> LatticeKernel:
    """
    q(t, 0, .) as the truncated sum e^-t sum_k t^k / k! p(k, 0, .), summed in Fourier space.

    The dropped Poisson tail is added to the error bound.
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    grid, radius = _resolve(d, grid_points_per_axis, radius)
    cutoff = poisson_cutoff(t)
    pmf = poisson.pmf(np.arange(cutoff + 1), t)
    sigma = subordinate_symbol(spec, d, grid)

    # Horner in sigma
    symbol = np.full(sigma.shape, pmf[cutoff])
    for k in range(cutoff - 1, -1, -1):
        symbol = symbol * sigma + pmf[k]
    dropped = float(poisson.sf(cutoff, t))

    logger.debug(f"Poisson sum for t={t}: K={cutoff}, dropped mass {dropped:.2e}")
    return torus_kernel(
        invert_symbol(symbol, d, grid),
        d,
        grid,
        radius,
        float(t),
        KernelMethod.POISSONIZED,
        spec,
        truncation_error=dropped,
        what=f"poisson-sum kernel t={t}",
    )


def _graded_breakpoints(scale: float) -> np.ndarray:
    points = [0.0] + [scale * 2.0**-k for k in range(FOURIER_LEVELS_BELOW, 0, -1)]
    edge = scale
    while edge < np.pi:
        points.append(edge)
        edge *= 2.0
    points.append(np.pi)
    return np.array(points)


def _panel_rule(breakpoints: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    lo, hi = breakpoints[:-1, None], breakpoints[1:, None]
    half = 0.5 * (hi - lo)
    return (lo + half * (nodes + 1.0)).ravel(), (half * weights).ravel()


def _tensor_integral(
    integrand: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray, weights: np.ndarray, d: int
) -> float:
    """Integral of a function of (2/d) sum sin^2(theta_m / 2) over [0, pi]^d."""
    s2 = np.sin(0.5 * nodes) ** 2
    if d == 1:
        return float(np.dot(weights, integrand(2.0 * s2)))
    if d == 2:
        lam = s2[:, None] + s2[None, :]
        return float(weights @ integrand(lam) @ weights)
    total = 0.0
    inner = s2[:, None] + s2[None, :]
    for w, s in zip(weights, s2):
        values = integrand((2.0 / 3.0) * (inner + s))
        total += w * float(weights @ values @ weights)
    return total


def ondiagonal_fourier(spec: PhiSpec, d: int, n: int) -> float:
    """
    p(n, 0, 0) = pi^-d * integral over [0, pi]^d of (1 - phi(1 - Psi))^n, without periodization.

    Tensor Gauss-Legendre panels are graded geometrically toward theta = 0
    around the natural scale sqrt(2d phi^-1(1/n)); two panel orders must agree.

    Raises:
        DomainError: On invalid dimension or n < 1
        NumericError: If the two quadrature orders disagree
    """
    check_dimension(d)
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")

    scale = min(math.sqrt(2.0 * d * invert_phi(spec, 1.0 / n)), np.pi / 2.0)
    breakpoints = _graded_breakpoints(scale)

    def integrand(lam: np.ndarray) -> np.ndarray:
        return (1.0 - np.asarray(eval_phi(spec, lam))) ** n

    estimates = []
    for order in FOURIER_POINTS:
        nodes, weights = _panel_rule(breakpoints, order)
        estimates.append(_tensor_integral(integrand, nodes, weights, d) / np.pi**d)
    coarse, fine = estimates
    if abs(fine - coarse) > FOURIER_AGREEMENT * abs(fine):
        raise NumericError(
            f"on-diagonal quadrature for n={n} unresolved: {coarse!r} vs {fine!r}",
            worst=n,
        )
    return fine


def ondiagonal_family(spec: PhiSpec, d: int, n_values) -> Dict[int, float]:
    """ondiagonal_fourier over several step counts."""
    return {int(n): ondiagonal_fourier(spec, d, int(n)) for n in n_values}
