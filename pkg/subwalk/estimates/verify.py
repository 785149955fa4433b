"""
Sweeps of exact kernels against the envelope.
"""

import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..exceptions import DomainError
from ..kernel import LatticeKernel
from .envelope import diagonal, envelope_grid, j_profile
from .models import EstimateEnvelope, RatioReport

logger = logging.getLogger(__name__)

# Points with kernel mass below this multiple of the error bound are excluded
DEFECT_FILTER = 10.0


def _check_family(kernels: Sequence[LatticeKernel], env: EstimateEnvelope):
    if not kernels:
        raise DomainError("an empty kernel family cannot be verified")
    for kernel in kernels:
        if kernel.d != env.d:
            raise DomainError(f"kernel of dimension {kernel.d} does not match d={env.d}")
        if kernel.spec is not None and kernel.spec != env.spec:
            raise DomainError(
                f"kernel for {kernel.spec.literal} does not match {env.spec.literal}"
            )


class _Extremes:
    """Running argmin / argmax in scan order; ties keep the first point."""

    def __init__(self):
        self.inf = np.inf
        self.sup = -np.inf
        self.argmin: List[Any] = []
        self.argmax: List[Any] = []
        self.count = 0

    def update(self, label: Any, kernel: LatticeKernel, ratios: np.ndarray, mask: np.ndarray):
        if not np.any(mask):
            return
        self.count += int(np.count_nonzero(mask))
        low = np.where(mask, ratios, np.inf)
        high = np.where(mask, ratios, -np.inf)
        i_min = int(np.argmin(low))
        i_max = int(np.argmax(high))
        if low.flat[i_min] < self.inf:
            self.inf = float(low.flat[i_min])
            self.argmin = [label, _point(kernel, i_min)]
        if high.flat[i_max] > self.sup:
            self.sup = float(high.flat[i_max])
            self.argmax = [label, _point(kernel, i_max)]


def _point(kernel: LatticeKernel, flat_index: int) -> List[int]:
    index = np.unravel_index(flat_index, kernel.values.shape)
    return [int(i) - kernel.radius for i in index]


def verify_two_sided(
    kernels: Sequence[LatticeKernel],
    env: EstimateEnvelope,
    xmax: Optional[int] = None,
    name: str = "two_sided",
) -> RatioReport:
    """
    Band of p(n, 0, x) / envelope(n, x) over a family of kernels.

    Grid points where the kernel is not above DEFECT_FILTER times its error
    bound are skipped. Rows are scanned by increasing time, then x in
    lexicographic order.

    Args:
        kernels: Kernels sharing d and phi with env, times >= 1
        env: Envelope
        xmax: Largest |x|_inf included (default: the whole box)
        name: Report name

    Returns:
        Ratio report; extra["diagonal_domination"] holds sup_x p(n, x) / diag(n)

    Raises:
        DomainError: If the family is empty, mismatched, or nothing survives the filter
    """
    _check_family(kernels, env)
    extremes = _Extremes()
    domination = 0.0
    methods = sorted({k.method.value for k in kernels})

    for kernel in sorted(kernels, key=lambda k: k.time):
        radius = kernel.radius if xmax is None else min(kernel.radius, xmax)
        kernel = kernel.restrict(radius) if radius < kernel.radius else kernel
        values = kernel.values
        ratios = values / envelope_grid(env, kernel.time, kernel.norms())
        mask = values > DEFECT_FILTER * kernel.error_bound
        extremes.update(kernel.time, kernel, ratios, mask)
        domination = max(domination, float(np.max(values)) / diagonal(env, kernel.time))

    if extremes.count == 0:
        raise DomainError(f"{name}: no grid point lies above the numerical error bounds")

    times = [k.time for k in kernels]
    report = RatioReport(
        name=name,
        grid={
            "phi": env.spec.literal,
            "d": env.d,
            "times": [min(times), max(times)],
            "kernels": len(kernels),
            "xmax": xmax,
        },
        ratio_inf=extremes.inf,
        ratio_sup=extremes.sup,
        argmin=extremes.argmin,
        argmax=extremes.argmax,
        count=extremes.count,
        defect_filter=DEFECT_FILTER,
        methods=methods,
        extra={"diagonal_domination": domination},
    )
    logger.info(
        f"{name}: band [{report.ratio_inf:.4g}, {report.ratio_sup:.4g}] over "
        f"{report.count} points"
    )
    return report


def one_step_comparability(
    step: LatticeKernel, env: EstimateEnvelope, rmax: Optional[float] = None
) -> RatioReport:
    """
    Band of p(1, 0, x) / j(|x|) for 0 < |x| <= rmax.

    Raises:
        DomainError: If no point survives the error filter
    """
    _check_family([step], env)
    norms = step.norms()
    limit = float(step.radius) if rmax is None else float(rmax)
    mask = (norms > 0.0) & (norms <= limit) & (step.values > DEFECT_FILTER * step.error_bound)
    if not np.any(mask):
        raise DomainError("one-step comparison has no admissible points")
    ratios = np.ones(step.values.shape)
    ratios[mask] = step.values[mask] / j_profile(env, norms[mask])
    extremes = _Extremes()
    extremes.update(1, step, ratios, mask)
    return RatioReport(
        name="one_step",
        grid={"phi": env.spec.literal, "d": env.d, "rmax": limit, "radius": step.radius},
        ratio_inf=extremes.inf,
        ratio_sup=extremes.sup,
        argmin=extremes.argmin,
        argmax=extremes.argmax,
        count=extremes.count,
        defect_filter=DEFECT_FILTER,
        methods=[step.method.value],
        extra={"return_probability": step.center()},
    )


def diagonal_band(
    env: EstimateEnvelope, values: Mapping[float, float], name: str = "on_diagonal"
) -> RatioReport:
    """
    Band of p(n, 0, 0) / (phi^-1(1/n))^(d/2) over given on-diagonal values.

    Args:
        env: Envelope
        values: Mapping of time n >= 1 to p(n, 0, 0)
        name: Report name

    Returns:
        Ratio report over the times
    """
    if not values:
        raise DomainError(f"{name}: no on-diagonal values")
    times = sorted(values)
    ratios = np.array([values[n] / diagonal(env, n) for n in times])
    i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
    per_time: Dict[str, float] = {str(n): float(r) for n, r in zip(times, ratios)}
    return RatioReport(
        name=name,
        grid={"phi": env.spec.literal, "d": env.d, "times": [times[0], times[-1]]},
        ratio_inf=float(ratios[i_min]),
        ratio_sup=float(ratios[i_max]),
        argmin=[times[i_min]],
        argmax=[times[i_max]],
        count=len(times),
        extra={"ratios": per_time},
    )
