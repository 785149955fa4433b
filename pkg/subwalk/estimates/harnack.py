"""
Empirical parabolic Harnack ratios.

For a space-time function q on {0, 1, ...} x Z^d the ratio compares the
maximum of q over the upper cylinder Q(floor(gamma/phi(R^-2)), z, R/B) to
the minimum of q(0, .) over B(z, R/B). The canonical q is the backward
heat kernel q(k, y) = p(n0 - k, y, x0), which is parabolic up to time n0.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..bernstein import PhiSpec
from ..exceptions import DomainError
from ..kernel import DEFAULT_MAX_GRID, LatticeKernel, nstep_kernel_spectral
from .envelope import ball_points, hitting_radius
from .models import EstimateEnvelope, HarnackWindow, RatioReport

# Kernel boxes reach this many typical displacements r_n0 beyond the window
SPREAD_FACTOR = 8

logger = logging.getLogger(__name__)

KernelSource = Callable[[int], LatticeKernel]
SpaceTimeFunction = Callable[[int, np.ndarray], np.ndarray]


def default_n0(spec: PhiSpec, window: HarnackWindow) -> int:
    """The parabolicity horizon, raised so every kernel index n0 - k is at least 1."""
    last = window.start(spec) + window.depth(spec)
    return max(window.horizon(spec), last + 1)


def spectral_source(spec: PhiSpec, d: int, radius: int) -> KernelSource:
    """Kernel source computing p(n, 0, .) spectrally on a box of the given radius."""
    cache: Dict[int, LatticeKernel] = {}

    def source(n: int) -> LatticeKernel:
        if n not in cache:
            cache[n] = nstep_kernel_spectral(spec, d, n, radius=radius)
        return cache[n]

    return source


def _kernel_function(
    source: KernelSource, n0: int, x0: Sequence[int]
) -> Tuple[SpaceTimeFunction, List[LatticeKernel]]:
    used: List[LatticeKernel] = []
    origin = np.asarray(x0, dtype=np.int64)

    def q(k: int, points: np.ndarray) -> np.ndarray:
        kernel = source(n0 - k)
        used.append(kernel)
        offsets = origin - points
        if np.any(np.abs(offsets) > kernel.radius):
            raise DomainError(
                f"kernel box of radius {kernel.radius} does not cover the offsets x0 - y"
            )
        index = tuple((offsets + kernel.radius).T)
        return np.asarray(kernel.values[index])

    return q, used


def harnack_ratio(
    spec: PhiSpec,
    d: int,
    n0: Optional[int],
    x0: Sequence[int],
    window: HarnackWindow,
    kernel_source: Optional[KernelSource] = None,
    q: Optional[SpaceTimeFunction] = None,
) -> RatioReport:
    """
    Empirical Harnack constant max_Q q / min_{B(z, R/B)} q(0, .).

    Args:
        spec: Bernstein function
        d: Dimension
        n0: Time of the backward kernel (default: the parabolicity horizon)
        x0: Pole of the backward kernel
        window: Cylinder geometry
        kernel_source: Maps n to p(n, 0, .) (default: spectral kernels)
        q: Space-time function used in place of the backward kernel

    Returns:
        Report with ratio_inf = ratio_sup = the ratio; degenerate when the minimum vanishes

    Raises:
        DomainError: If the window is empty, n0 is too small, or kernels do not cover it
    """
    if len(x0) != d or len(window.z) != d:
        raise DomainError(f"x0 and z must have dimension {d}")
    start = window.start(spec)
    depth = window.depth(spec)
    points = ball_points(window.z, window.inner_radius)
    if points.shape[0] == 0:
        raise DomainError(f"ball of radius {window.inner_radius} contains no lattice point")
    if n0 is None:
        n0 = default_n0(spec, window)
    if n0 - (start + depth) < 1:
        raise DomainError(f"n0={n0} leaves kernel indices below 1 in the window")

    used: List[LatticeKernel] = []
    if q is None:
        if kernel_source is None:
            spread = int(np.max(np.abs(points - np.asarray(x0))))
            reach = int(SPREAD_FACTOR * hitting_radius(EstimateEnvelope(spec, d), n0))
            radius = max(1, spread, min(reach, DEFAULT_MAX_GRID[d] // 4))
            kernel_source = spectral_source(spec, d, radius)
        q, used = _kernel_function(kernel_source, n0, x0)

    # Lexicographic scan over (k, y); ties keep the first
    best, best_at = -np.inf, None
    for k in range(start, start + depth + 1):
        values = q(k, points)
        i = int(np.argmax(values))
        if values[i] > best:
            best, best_at = float(values[i]), [k, [int(c) for c in points[i]]]

    bottom = q(0, points)
    j = int(np.argmin(bottom))
    lowest = float(bottom[j])
    tolerance = max((kernel.error_bound for kernel in used), default=0.0)

    grid = {
        "phi": spec.literal,
        "d": d,
        "n0": n0,
        "x0": [int(c) for c in x0],
        "window": window.to_dict(),
        "start": start,
        "depth": depth,
        "points": int(points.shape[0]),
    }
    argmin = [0, [int(c) for c in points[j]]]
    if lowest <= tolerance:
        logger.info(f"Harnack window R={window.R}: minimum {lowest:.3e} vanishes; degenerate")
        return RatioReport(
            name="harnack",
            grid=grid,
            ratio_inf=1.0,
            ratio_sup=1.0,
            argmin=argmin,
            argmax=best_at,
            count=int(points.shape[0]) * (depth + 2),
            degenerate=True,
            extra={"max": best, "min": lowest},
        )

    ratio = best / lowest
    logger.info(f"Harnack window R={window.R}: ratio {ratio:.4g}")
    return RatioReport(
        name="harnack",
        grid=grid,
        ratio_inf=ratio,
        ratio_sup=ratio,
        argmin=argmin,
        argmax=best_at,
        count=int(points.shape[0]) * (depth + 2),
        methods=sorted({kernel.method.value for kernel in used}),
        extra={"max": best, "min": lowest},
    )
