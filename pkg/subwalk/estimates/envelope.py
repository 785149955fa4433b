"""
Bound functions of the two-sided heat-kernel estimate.

The envelope of p(n, 0, x) is min{(phi^-1(1/n))^(d/2), n j(|x|)} with
j(r) = r^-d phi(r^-2). Norms are Euclidean and balls are open.
"""

import logging
import math
from typing import Iterable, List, Sequence, Union

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gamma as gamma_function

from ..bernstein import eval_phi, invert_phi
from ..exceptions import DomainError
from ..kernel import LatticeKernel
from .models import EstimateEnvelope, PruittTerms, RatioReport

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def j_profile(env: EstimateEnvelope, r: ArrayLike) -> ArrayLike:
    """
    j(r) = r^-d phi(r^-2).

    Raises:
        DomainError: If r is not positive
    """
    values = np.asarray(r, dtype=float)
    if np.any(values <= 0.0):
        raise DomainError("j is defined for r > 0 only")
    result = values ** (-env.d) * np.asarray(eval_phi(env.spec, values**-2.0))
    return float(result) if np.ndim(r) == 0 else result


def diagonal(env: EstimateEnvelope, n: float) -> float:
    """(phi^-1(1/n))^(d/2) for n >= 1."""
    if n < 1:
        raise DomainError(f"the envelope needs n >= 1, got {n}")
    return invert_phi(env.spec, 1.0 / n) ** (0.5 * env.d)


def hitting_radius(env: EstimateEnvelope, n: float) -> float:
    """r_n = (phi^-1(1/n))^(-1/2), the typical displacement after n steps."""
    if n < 1:
        raise DomainError(f"the hitting radius needs n >= 1, got {n}")
    return invert_phi(env.spec, 1.0 / n) ** -0.5


def _norm(x: Union[float, Sequence[int]]) -> float:
    if isinstance(x, (int, float, np.integer, np.floating)):
        return abs(float(x))
    return math.sqrt(sum(float(c) ** 2 for c in x))


def envelope(env: EstimateEnvelope, n: float, x: Union[float, Sequence[int]]) -> float:
    """
    min{(phi^-1(1/n))^(d/2), n j(|x|)}, the diagonal value at x = 0.

    Args:
        env: Envelope
        n: Time, n >= 1 (real times cover the Poissonized walk)
        x: Lattice point or its norm

    Returns:
        Envelope value
    """
    diag = diagonal(env, n)
    r = _norm(x)
    if r == 0.0:
        return diag
    return min(diag, n * float(j_profile(env, r)))


def envelope_grid(env: EstimateEnvelope, n: float, norms: np.ndarray) -> np.ndarray:
    """Envelope at every entry of an array of norms."""
    diag = diagonal(env, n)
    result = np.full(norms.shape, diag)
    nonzero = norms > 0.0
    result[nonzero] = np.minimum(diag, n * j_profile(env, norms[nonzero]))
    return result


def crossover_radius(env: EstimateEnvelope, n: float) -> float:
    """
    Radius where the two branches of the envelope meet.

    Below it the diagonal branch is the smaller one.
    """
    diag = diagonal(env, n)

    def gap(r: float) -> float:
        return math.log(n * float(j_profile(env, r))) - math.log(diag)

    scale = hitting_radius(env, n)
    lo, hi = 0.5 * scale, 2.0 * scale
    while gap(lo) < 0.0:
        lo *= 0.5
    while gap(hi) > 0.0:
        hi *= 2.0
    root = brentq(gap, lo, hi, xtol=1e-12 * scale, rtol=1e-12)
    logger.debug(f"Crossover radius for n={n}: {root:.6g} (r_n = {scale:.6g})")
    return float(root)


def ball_points(center: Sequence[int], r: float) -> np.ndarray:
    """
    Lattice points of the open ball B(center, r), in lexicographic order of offsets.

    Returns:
        Integer array of shape (count, d)
    """
    d = len(center)
    if r <= 0.0:
        return np.zeros((0, d), dtype=np.int64)
    reach = int(math.ceil(r))
    axis = np.arange(-reach, reach + 1)
    offsets = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    inside = np.sum(offsets.astype(float) ** 2, axis=1) < r * r
    return offsets[inside] + np.asarray(center, dtype=np.int64)


def ball_volume(d: int, r: float) -> int:
    """Number of lattice points in B(0, r)."""
    return int(ball_points((0,) * d, r).shape[0])


def pruitt_components(step: LatticeKernel, x: float) -> PruittTerms:
    """
    G, K and M of Pruitt's function h for a one-step kernel.

    Mass outside the box lies at |y| > radius and is charged to G.

    Raises:
        DomainError: If x is not positive or the box cannot resolve |y| > x
    """
    if x <= 0.0:
        raise DomainError(f"x must be positive, got {x}")
    if x >= step.radius:
        raise DomainError(
            f"box of radius {step.radius} cannot resolve |y| > {x}; use a larger radius"
        )
    norms = step.norms()
    values = step.values
    near = norms <= x

    tail = float(np.sum(values[~near])) + step.mass_defect
    second_moment = float(np.sum(norms[near] ** 2 * values[near])) / x**2

    offsets = np.meshgrid(*([step.axis()] * step.d), indexing="ij")
    first = [float(np.sum(o[near] * values[near])) for o in offsets]
    drift = math.sqrt(sum(c * c for c in first)) / x
    return PruittTerms(x=float(x), tail=tail, second_moment=second_moment, drift=drift)


def pruitt_h(step: LatticeKernel, x: float) -> float:
    """Pruitt's h(x) = P(|S_1| > x) + x^-2 E[|S_1|^2; |S_1| <= x] (+ drift term)."""
    return pruitt_components(step, x).h


def pruitt_report(
    env: EstimateEnvelope, step: LatticeKernel, x_grid: Iterable[float]
) -> RatioReport:
    """Band of h(x) / phi(x^-2) over a grid of radii."""
    rows: List[float] = []
    xs = [float(x) for x in x_grid]
    drifts = []
    for x in xs:
        terms = pruitt_components(step, x)
        rows.append(terms.h / float(eval_phi(env.spec, x**-2.0)))
        drifts.append(terms.drift)
    if not rows:
        raise DomainError("pruitt_report needs a nonempty grid")
    ratios = np.array(rows)
    i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
    return RatioReport(
        name="pruitt",
        grid={"phi": env.spec.literal, "d": env.d, "x": xs, "radius": step.radius},
        ratio_inf=float(ratios[i_min]),
        ratio_sup=float(ratios[i_max]),
        argmin=[xs[i_min]],
        argmax=[xs[i_max]],
        count=len(xs),
        methods=[step.method.value],
        extra={"max_drift": max(drifts), "ratios": ratios.tolist()},
    )


def surface_area(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2.0 * math.pi ** (0.5 * d) / float(gamma_function(0.5 * d))


def continuum_tail(env: EstimateEnvelope, rho: float) -> float:
    """Integral of j(|y|) over |y| >= rho in R^d: (omega_d / 2) int_0^(rho^-2) phi(u) / u du."""

    def integrand(v: float) -> float:
        return float(eval_phi(env.spec, math.exp(v)))

    value, _ = quad(integrand, -np.inf, -2.0 * math.log(rho), limit=200)
    return 0.5 * surface_area(env.d) * value


def tail_sum(env: EstimateEnvelope, radius: int, r: float) -> float:
    """
    Sum of j(|y|) over lattice points y != 0 with |y| >= r.

    Points inside the largest Euclidean ball of the box [-radius, radius]^d are
    summed exactly; the rest is the continuum remainder.
    """
    if r <= 0.0:
        raise DomainError(f"r must be positive, got {r}")
    rho = radius + 1.0
    if r >= rho:
        raise DomainError(f"r={r} exceeds the box resolution {rho}")
    axis = np.arange(-radius, radius + 1, dtype=float)
    grids = np.meshgrid(*([axis] * env.d), indexing="ij")
    norms = np.sqrt(sum(g**2 for g in grids))
    selected = norms[(norms >= r) & (norms > 0.0) & (norms < rho)]
    return float(np.sum(j_profile(env, selected))) + continuum_tail(env, rho)


def tail_sum_check(
    env: EstimateEnvelope, step: LatticeKernel, r_grid: Iterable[float]
) -> RatioReport:
    """
    Band of sum_{|y| >= r} j(|y|) / phi(r^-2) over r_grid.

    The step kernel fixes the box the lattice sum runs over.
    """
    rs = [float(r) for r in r_grid]
    if not rs:
        raise DomainError("tail_sum_check needs a nonempty grid")
    sums = [tail_sum(env, step.radius, r) for r in rs]
    ratios = np.array([s / float(eval_phi(env.spec, r**-2.0)) for s, r in zip(sums, rs)])
    i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
    logger.info(f"Tail-sum ratio over {len(rs)} radii: sup {ratios[i_max]:.4g}")
    return RatioReport(
        name="tail_sum",
        grid={"phi": env.spec.literal, "d": env.d, "r": rs, "radius": step.radius},
        ratio_inf=float(ratios[i_min]),
        ratio_sup=float(ratios[i_max]),
        argmin=[rs[i_min]],
        argmax=[rs[i_max]],
        count=len(rs),
        methods=["lattice_sum", "continuum_remainder"],
        extra={"sums": sums},
    )
