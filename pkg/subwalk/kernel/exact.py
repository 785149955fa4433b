"""
Convolution kernels.

The simple random walk kernel is exact on Z^d. The subordinate one-step
kernel is the weighted sum of SRW kernels, evaluated in Fourier space on
the periodic lattice, and n-step kernels are built from a step by
repeated squaring.
"""

import logging
from typing import Optional

import numpy as np
from scipy.signal import convolve, fftconvolve

from ..exceptions import DomainError, NumericError
from ..subordination import SubordinationWeights
from .models import KernelMethod, LatticeKernel
from .spectral import (
    DEFAULT_MAX_ERROR,
    DEFAULT_MAX_GRID,
    check_dimension,
    check_grid,
    default_grid,
    invert_symbol,
    laplacian_symbol,
    torus_kernel,
)
from .symmetry import clip_negative, symmetrize

logger = logging.getLogger(__name__)


def _nearest_neighbour_step(d: int) -> np.ndarray:
    step = np.zeros((3,) * d)
    for axis in range(d):
        for side in (0, 2):
            index = [1] * d
            index[axis] = side
            step[tuple(index)] = 1.0 / (2 * d)
    return step


def _offsets(d: int, radius: int):
    axis = np.arange(-radius, radius + 1)
    return np.meshgrid(*([axis] * d), indexing="ij")


def srw_kernel(d: int, m: int, radius: int) -> LatticeKernel:
    """
    Exact m-step kernel of the nearest-neighbour walk.

    Args:
        d: Dimension (1..3)
        m: Number of steps
        radius: Box half-width, at least m

    Returns:
        Kernel with zero mass defect

    Raises:
        DomainError: If radius < m or m < 0
    """
    check_dimension(d)
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    if radius < m:
        raise DomainError(f"radius {radius} does not contain the support of {m} steps")

    result = np.ones((1,) * d)
    power = _nearest_neighbour_step(d)
    remaining = m
    while remaining:
        if remaining & 1:
            result = convolve(result, power)
        remaining >>= 1
        if remaining:
            power = convolve(power, power)

    # FFT convolution leaves roundoff where the walk cannot be
    offsets = _offsets(d, m)
    l1 = sum(np.abs(o) for o in offsets)
    reachable = (l1 <= m) & (l1 % 2 == m % 2)
    result = np.where(reachable, result, 0.0)
    result = clip_negative(symmetrize(result), f"srw kernel m={m}")

    values = np.zeros((2 * radius + 1,) * d)
    inner = (slice(radius - m, radius + m + 1),) * d
    values[inner] = result
    return LatticeKernel(
        d=d,
        radius=radius,
        time=m,
        values=values,
        method=KernelMethod.CONVOLUTION,
        mass_defect=0.0,
    )


def _return_probability(d: int, grid: int, n: int) -> float:
    """p(n, 0, 0) of the walk on the periodic lattice, which dominates the one on Z^d."""
    psi = 1.0 - laplacian_symbol(d, grid)
    return float(invert_symbol(psi**n, d, grid)[(0,) * d])


def _step_on_grid(d: int, w: SubordinationWeights, radius: int, grid: int) -> LatticeKernel:
    psi = 1.0 - laplacian_symbol(d, grid)

    # Horner: sum_m a_m Psi^m = Psi (a_1 + Psi (a_2 + ...))
    weights = w.weights
    symbol = np.full(psi.shape, weights[-1])
    for a in weights[-2::-1]:
        symbol = symbol * psi + a
    symbol = symbol * psi

    # Terms m > M contribute at most tail * sup_{m > M} p(m, 0, .)
    even = 2 * ((w.M + 1) // 2)
    tail_term = w.tail_mass * _return_probability(d, grid, even) if w.tail_mass > 0 else 0.0
    return torus_kernel(
        invert_symbol(symbol, d, grid),
        d,
        grid,
        radius,
        1,
        KernelMethod.CONVOLUTION,
        w.spec,
        truncation_error=tail_term,
        what="subordinate step kernel",
    )


def subordinate_step_kernel(
    d: int,
    w: SubordinationWeights,
    radius: int,
    grid: Optional[int] = None,
    max_error: float = DEFAULT_MAX_ERROR,
    max_grid: Optional[int] = None,
) -> LatticeKernel:
    """
    One-step kernel sum_{m <= M} a_m p(m, 0, .) of the subordinate walk.

    The grid is doubled until the periodization estimate drops below
    max_error or max_grid is reached.

    Args:
        d: Dimension (1..3)
        w: Subordination weights
        radius: Box half-width
        grid: Initial points per axis (default: smallest admissible)
        max_error: Largest admissible pointwise error bound
        max_grid: Largest grid tried

    Returns:
        Step kernel; mass_defect includes the weight tail

    Raises:
        DomainError: On invalid arguments
        NumericError: If the error bound cannot be brought below max_error
    """
    check_dimension(d)
    if radius < 1:
        raise DomainError(f"radius must be at least 1, got {radius}")
    w.check()
    grid = check_grid(grid if grid is not None else default_grid(radius), radius)
    max_grid = max(grid, max_grid if max_grid is not None else DEFAULT_MAX_GRID[d])

    while True:
        kernel = _step_on_grid(d, w, radius, grid)
        logger.debug(
            f"Step kernel d={d} M={w.M} N={grid}: bound {kernel.error_bound:.2e} "
            f"(weight tail part {kernel.truncation_error:.2e})"
        )
        if kernel.error_bound <= max_error:
            return kernel
        if kernel.truncation_error > max_error:
            message = (
                f"weight tail {w.tail_mass:.3e} leaves a pointwise error of "
                f"{kernel.truncation_error:.3e} > {max_error:.1e}"
            )
            logger.error(message)
            raise NumericError(message, worst=kernel.truncation_error, suggestion="larger M")
        if 2 * grid > max_grid:
            message = (
                f"step kernel error bound {kernel.error_bound:.3e} > {max_error:.1e} "
                f"at the largest grid {grid}"
            )
            logger.error(message)
            raise NumericError(
                message, worst=kernel.error_bound, suggestion="larger grid_points_per_axis"
            )
        grid *= 2


def _compose_torus(a: LatticeKernel, b: LatticeKernel) -> np.ndarray:
    axes = tuple(range(a.d))
    shape = (a.grid,) * a.d
    product = np.fft.rfftn(a.torus, axes=axes) * np.fft.rfftn(b.torus, axes=axes)
    return np.fft.irfftn(product, s=shape, axes=axes)


def compose(a: LatticeKernel, b: LatticeKernel) -> LatticeKernel:
    """
    Convolution a * b of two kernels.

    Kernels on the same periodic lattice convolve circularly; otherwise the
    boxes convolve linearly and mass that left either box is charged to the
    error bound.

    Raises:
        DomainError: If the dimensions differ
    """
    if a.d != b.d:
        raise DomainError(f"cannot compose kernels of dimension {a.d} and {b.d}")
    time = a.time + b.time
    what = f"composed kernel t={time}"

    if a.is_periodic and b.is_periodic and a.grid == b.grid:
        return torus_kernel(
            _compose_torus(a, b),
            a.d,
            a.grid,
            min(a.radius, b.radius),
            time,
            KernelMethod.CONVOLUTION,
            a.spec,
            truncation_error=a.truncation_error + b.truncation_error,
            what=what,
        )

    radius = min(a.radius, b.radius)
    a_box, b_box = a.restrict(radius), b.restrict(radius)
    values = fftconvolve(a_box.values, b_box.values, mode="same")
    values = clip_negative(symmetrize(values), what)
    error = (
        a.error_bound
        + b.error_bound
        + a_box.mass_defect * float(np.max(b_box.values))
        + b_box.mass_defect * float(np.max(a_box.values))
    )
    return LatticeKernel(
        d=a.d,
        radius=radius,
        time=time,
        values=values,
        method=KernelMethod.CONVOLUTION,
        error_bound=error,
        spec=a.spec,
    )


def nstep_kernel_convolve(
    step: LatticeKernel, n: int, max_error: float = DEFAULT_MAX_ERROR
) -> LatticeKernel:
    """
    n-fold convolution power of a step kernel by repeated squaring.

    Args:
        step: One-step kernel
        n: Number of steps, at least 1
        max_error: Largest admissible pointwise error bound

    Returns:
        n-step kernel

    Raises:
        DomainError: If n < 1
        NumericError: If the accumulated error bound exceeds max_error
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if n == 1:
        return step

    result: Optional[LatticeKernel] = None
    power = step
    remaining = n
    while remaining:
        if remaining & 1:
            result = power if result is None else compose(result, power)
        remaining >>= 1
        if remaining:
            power = compose(power, power)

    assert result is not None
    if result.error_bound > max_error:
        message = f"{n}-step kernel error bound {result.error_bound:.3e} > {max_error:.1e}"
        logger.error(message)
        raise NumericError(
            message, worst=result.error_bound, suggestion="larger radius or grid_points_per_axis"
        )
    logger.debug(f"Convolved {n} steps: bound {result.error_bound:.2e}")
    return result
