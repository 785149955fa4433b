"""
Scaling profile and axiom checks for Bernstein functions.
"""

import logging
from typing import List

import numpy as np
from scipy.special import comb

from ..exceptions import DomainError, ValidationError
from .catalog import PhiKind
from .functions import eval_phi, invert_phi
from .models import AxiomCheck, AxiomReport, PhiSpec, ScalingProfile

logger = logging.getLogger(__name__)

# Multipliers and time grid of the subadditivity check
SUBADDITIVITY_FACTORS = (1.0, 1.5, 2.0, 4.0, 8.0, 16.0)
SUBADDITIVITY_POWERS = range(-16, 5)
# Log grid of the finite-difference check, with step h = lam / 4
DIFFERENCE_POWERS = range(-16, 4)
DIFFERENCE_ORDERS = (1, 2, 3, 4)
EXTENDED_SCALING_L = (2.0, 4.0, 8.0)
# Absolute slack for checks that go through the inverse
INVERSE_SLACK = 1e-10
PROFILE_LEVELS = 10


def _dyadic_grid(levels: int) -> np.ndarray:
    return np.array([2.0**-k for k in range(levels, -1, -1)])


def scaling_profile(spec: PhiSpec, num_dyadic_levels: int = PROFILE_LEVELS) -> ScalingProfile:
    """
    Fit the scaling exponents of phi on the dyadic points 2^-k, k = 0..levels.

    alpha_lower and alpha_upper are the extremal log-log slopes over all grid
    pairs r < R; the prefactors are the extremal values of
    (phi(R)/phi(r)) / (R/r)^alpha over all pairs r <= R.

    Args:
        spec: Bernstein function
        num_dyadic_levels: Number of dyadic levels below 1

    Returns:
        Scaling profile

    Raises:
        DomainError: If fewer than 4 levels are requested
        ValidationError: If the exponents leave (0, 1)
    """
    if num_dyadic_levels < 4:
        raise DomainError(f"scaling_profile needs at least 4 levels, got {num_dyadic_levels}")

    grid = _dyadic_grid(num_dyadic_levels)
    log_grid = np.log(grid)
    log_phi = np.log(eval_phi(spec, grid))

    # i indexes r, j indexes R, i < j
    i, j = np.triu_indices(grid.size, k=1)
    slopes = (log_phi[j] - log_phi[i]) / (log_grid[j] - log_grid[i])
    k_min = int(np.argmin(slopes))
    k_max = int(np.argmax(slopes))
    alpha_lower = float(slopes[k_min])
    alpha_upper = float(slopes[k_max])
    argmin_pair = (float(grid[i[k_min]]), float(grid[j[k_min]]))
    argmax_pair = (float(grid[i[k_max]]), float(grid[j[k_max]]))

    if alpha_lower <= 0.0:
        raise ValidationError(
            f"{spec.literal}: fitted alpha_lower={alpha_lower} <= 0 at (r, R)={argmin_pair}",
            {"pair": argmin_pair, "alpha_lower": alpha_lower},
        )
    if alpha_upper >= 1.0:
        raise ValidationError(
            f"{spec.literal}: fitted alpha_upper={alpha_upper} >= 1 at (r, R)={argmax_pair}",
            {"pair": argmax_pair, "alpha_upper": alpha_upper},
        )

    # r = R is a grid pair, so both prefactors straddle 1
    log_ratio = log_phi[j] - log_phi[i]
    log_span = log_grid[j] - log_grid[i]
    c_lower = float(min(1.0, np.exp(np.min(log_ratio - alpha_lower * log_span))))
    c_upper = float(max(1.0, np.exp(np.max(log_ratio - alpha_upper * log_span))))

    logger.debug(
        f"Scaling profile of {spec.literal}: alpha in [{alpha_lower:.6f}, {alpha_upper:.6f}], "
        f"c in [{c_lower:.6f}, {c_upper:.6f}]"
    )
    return ScalingProfile(
        alpha_lower=alpha_lower,
        alpha_upper=alpha_upper,
        c_lower=c_lower,
        c_upper=c_upper,
        grid=tuple(grid.tolist()),
        argmin_pair=argmin_pair,
        argmax_pair=argmax_pair,
    )


def _table_limit(spec: PhiSpec) -> float:
    if spec.kind is PhiKind.USER_TABLE and spec.table is not None:
        return spec.table[0][-1]
    return np.inf


def _check_subadditivity(spec: PhiSpec, tol: float) -> AxiomCheck:
    limit = _table_limit(spec)
    worst = -np.inf
    skipped = 0
    for factor in SUBADDITIVITY_FACTORS:
        for power in SUBADDITIVITY_POWERS:
            t = 2.0**power
            if factor * t > limit or t > limit:
                skipped += 1
                continue
            bound = factor * eval_phi(spec, t)
            worst = max(worst, (eval_phi(spec, factor * t) - bound) / bound)
    return AxiomCheck(
        name="subadditivity",
        passed=bool(worst <= tol),
        worst=float(worst),
        detail="max over grid of (phi(lam t) - lam phi(t)) / (lam phi(t))",
        skipped=skipped,
    )


def _check_differences(spec: PhiSpec, tol: float) -> AxiomCheck:
    limit = _table_limit(spec)
    worst = np.inf
    skipped = 0
    for power in DIFFERENCE_POWERS:
        lam = 2.0**power
        h = 0.25 * lam
        if lam + max(DIFFERENCE_ORDERS) * h > limit:
            skipped += 1
            continue
        nodes = lam + h * np.arange(max(DIFFERENCE_ORDERS) + 1)
        values = np.asarray(eval_phi(spec, nodes))
        for order in DIFFERENCE_ORDERS:
            coefficients = np.array(
                [(-1.0) ** (order - k) * comb(order, k) for k in range(order + 1)]
            )
            difference = float(np.dot(coefficients, values[: order + 1]))
            scale = float(np.dot(np.abs(coefficients), values[: order + 1]))
            signed = (-1.0) ** (order + 1) * difference / scale
            worst = min(worst, signed)
    return AxiomCheck(
        name="finite_differences",
        passed=bool(worst >= -tol),
        worst=float(worst),
        detail="min over grid of (-1)^(k+1) Delta_h^k phi, relative to its roundoff scale",
        skipped=skipped,
    )


def _check_extended_scaling(spec: PhiSpec, profile: ScalingProfile, tol: float) -> AxiomCheck:
    limit = _table_limit(spec)
    small = np.array(profile.grid)
    worst = -np.inf
    skipped = 0
    for big_l in EXTENDED_SCALING_L:
        if big_l > limit:
            skipped += 1
            continue
        above = np.array([2.0**k for k in range(1, int(np.log2(big_l)) + 1)])
        radii = np.concatenate([small, above])
        phi_l = eval_phi(spec, big_l)
        for r in small:
            big_r = radii[radii >= r]
            ratio = np.asarray(eval_phi(spec, big_r)) / eval_phi(spec, r)
            spread = big_r / r
            lower = profile.c_lower * (spread / big_l) ** profile.alpha_lower
            upper = phi_l * profile.c_upper * spread**profile.alpha_upper
            worst = max(worst, float(np.max((lower - ratio) / ratio)))
            worst = max(worst, float(np.max((ratio - upper) / upper)))
    return AxiomCheck(
        name="extended_scaling",
        passed=bool(worst <= tol),
        worst=float(worst),
        detail="relative violation of the scaling bounds for 0 < r <= 1, r <= R <= L",
        skipped=skipped,
    )


def _check_inverse_scaling(spec: PhiSpec, profile: ScalingProfile, tol: float) -> AxiomCheck:
    ys = np.array([eval_phi(spec, r) for r in profile.grid])
    inverse = np.array([invert_phi(spec, min(y, 1.0)) for y in ys])
    i, j = np.triu_indices(ys.size, k=1)
    ratio = inverse[j] / inverse[i]
    spread = ys[j] / ys[i]
    lower = (1.0 / profile.c_upper) ** (1.0 / profile.alpha_upper) * spread ** (
        1.0 / profile.alpha_upper
    )
    upper = (1.0 / profile.c_lower) ** (1.0 / profile.alpha_lower) * spread ** (
        1.0 / profile.alpha_lower
    )
    worst = max(float(np.max((lower - ratio) / ratio)), float(np.max((ratio - upper) / upper)))
    return AxiomCheck(
        name="inverse_scaling",
        passed=bool(worst <= tol + INVERSE_SLACK),
        worst=worst,
        detail="relative violation of the inverse scaling bounds on phi(grid)",
    )


def _check_normalization(spec: PhiSpec) -> AxiomCheck:
    grid = np.linspace(0.0, min(2.0, _table_limit(spec)), 257)
    values = np.asarray(eval_phi(spec, grid))
    error = abs(float(eval_phi(spec, 1.0)) - 1.0)
    monotone = bool(np.all(np.diff(values) >= 0.0)) and values[0] == 0.0
    return AxiomCheck(
        name="normalization",
        passed=error <= 1e-12 and monotone,
        worst=error,
        detail="|phi(1) - 1|, phi(0) = 0 and monotonicity on [0, 2]",
    )


def verify_bernstein_axioms(spec: PhiSpec, tol: float = 1e-9) -> AxiomReport:
    """
    Check the structural properties of a Bernstein function numerically.

    Failures are recorded as report entries and never raised.

    Args:
        spec: Bernstein function
        tol: Relative tolerance of each check

    Returns:
        Axiom report with one entry per check

    Raises:
        DomainError: If tol is not positive
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")

    report = AxiomReport(spec=spec, tol=tol)
    report.checks.append(_check_subadditivity(spec, tol))
    report.checks.append(_check_differences(spec, tol))

    try:
        profile = scaling_profile(spec)
    except ValidationError as e:
        report.checks.append(AxiomCheck(name="scaling_profile", passed=False, detail=str(e)))
    else:
        report.checks.append(_check_extended_scaling(spec, profile, tol))
        report.checks.append(_check_inverse_scaling(spec, profile, tol))
    report.checks.append(_check_normalization(spec))

    failed: List[str] = report.failures()
    if failed:
        logger.warning(f"{spec.literal}: axiom checks failed: {', '.join(failed)}")
    else:
        logger.info(f"{spec.literal}: all {len(report.checks)} axiom checks passed")
    return report


