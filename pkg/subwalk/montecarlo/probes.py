"""
Monte Carlo estimates of exit, hitting and maximal-displacement probabilities.

Every estimate runs cfg.trials independent trials; trial i uses the seed
mix_seed(base_seed, i) whatever the number of worker threads, so reports
are reproducible bit for bit.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammainc

from ..bernstein import eval_phi
from ..estimates import EstimateEnvelope, hitting_radius, j_profile, window_depth
from ..exceptions import CalibrationError, DomainError, NumericError
from ..subordination import IncrementSampler, mix_seed
from .models import (
    MAX_CENSORED_FRACTION,
    CalibrationResult,
    ExitTimeReport,
    GammaTailReport,
    HittingReport,
    ProbabilityEstimate,
    ProbeReport,
    SimulationConfig,
)
from .stats import t_interval, wilson_interval
from .walk import (
    NEVER,
    beyond_closed_ball,
    default_sampler,
    inside_ball,
    outside_ball,
    run_trials,
    trial_walk,
)

logger = logging.getLogger(__name__)

# Calibration searches gamma on {k / GAMMA_STEPS : k = 1..GAMMA_STEPS - 1}
GAMMA_STEPS = 64
# Largest admissible upper confidence bound of the maximal probe
PROBE_LEVEL = 0.25


def _estimate(successes: int, trials: int, confidence: float) -> ProbabilityEstimate:
    lower, upper = wilson_interval(successes, trials, confidence)
    return ProbabilityEstimate(successes, trials, lower, upper, confidence)


def estimate_exit_time(
    cfg: SimulationConfig, r: float, sampler: Optional[IncrementSampler] = None
) -> ExitTimeReport:
    """
    Mean number of steps until |S_k| >= r, and the matching Poissonized exit time.

    The Poissonized exit time of a trial is a Gamma(tau, 1) draw from the
    trial's generator once tau is known.

    Args:
        cfg: Simulation configuration
        r: Radius, at least 1
        sampler: Increment sampler (default: built from cfg.weights)

    Returns:
        Exit-time report

    Raises:
        DomainError: If r < 1
        NumericError: If more than 1% of the trials hit the step cap
    """
    if r < 1.0:
        raise DomainError(f"exit radius must be at least 1, got {r}")
    sampler = sampler or default_sampler(cfg)
    leave = outside_ball((0,) * cfg.d, r)

    def trial(index: int) -> Tuple[int, float]:
        walk = trial_walk(cfg, sampler, index)
        tau = walk.first_time(leave, cfg.step_cap)
        if tau == NEVER:
            return NEVER, math.nan
        return tau, float(walk.rng.gamma(tau))

    results = run_trials(cfg, trial, f"Exit times r={r}")
    taus = np.array([tau for tau, _ in results if tau != NEVER], dtype=float)
    clocks = np.array([clock for tau, clock in results if tau != NEVER])
    censored = cfg.trials - taus.size
    if censored > MAX_CENSORED_FRACTION * cfg.trials:
        message = f"{censored} of {cfg.trials} exit trials reached the step cap {cfg.step_cap}"
        logger.error(message)
        raise NumericError(message, worst=censored, suggestion="raise montecarlo.step_cap")
    if censored:
        logger.warning(f"{censored} exit trials censored at {cfg.step_cap} steps")

    mean, stderr, lower, upper = t_interval(taus, cfg.confidence)
    ctrw_mean, ctrw_stderr, _, _ = t_interval(clocks, cfg.confidence)
    reference = 1.0 / float(eval_phi(cfg.spec, r**-2.0))
    report = ExitTimeReport(
        r=float(r),
        mean_tau=mean,
        stderr=stderr,
        lower=lower,
        upper=upper,
        reference=reference,
        ratio=mean / reference,
        ctrw_mean=ctrw_mean,
        ctrw_stderr=ctrw_stderr,
        censored=int(censored),
        trials=cfg.trials,
        config=cfg.echo(),
    )
    logger.info(f"Exit time r={r}: mean {mean:.4g} +- {stderr:.2g}, ratio {report.ratio:.4g}")
    return report


def estimate_hitting(
    cfg: SimulationConfig,
    x: Sequence[int],
    y: Sequence[int],
    n: int,
    sampler: Optional[IncrementSampler] = None,
) -> HittingReport:
    """
    Probability that the walk from x enters B(y, r_n) within n steps.

    Args:
        cfg: Simulation configuration
        x: Start
        y: Center of the target ball
        n: Step horizon; n = 0 asks whether x = y
        sampler: Increment sampler (default: built from cfg.weights)

    Returns:
        Hitting report with the bound n r_n^d j(|x - y|)
    """
    if len(x) != cfg.d or len(y) != cfg.d:
        raise DomainError(f"x and y must have dimension {cfg.d}")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if n == 0:
        # The walk has not moved: it starts in the ball exactly when x = y
        hits = cfg.trials if tuple(x) == tuple(y) else 0
        return HittingReport(
            x=[int(c) for c in x],
            y=[int(c) for c in y],
            n=0,
            radius=0.0,
            estimate=_estimate(hits, cfg.trials, cfg.confidence),
            bound=math.inf if hits else 0.0,
            ratio=0.0,
            config=cfg.echo(),
        )
    env = EstimateEnvelope(cfg.spec, cfg.d)
    radius = hitting_radius(env, n)
    distance = math.dist(x, y)
    if distance <= radius:
        logger.warning(f"|x - y| = {distance:.3g} does not exceed r_n = {radius:.3g}")
    sampler = sampler or default_sampler(cfg)
    enter = inside_ball(y, radius)

    def trial(index: int) -> bool:
        return trial_walk(cfg, sampler, index, start=x).first_time(enter, n) != NEVER

    hits = int(sum(run_trials(cfg, trial, f"Hitting n={n}")))
    estimate = _estimate(hits, cfg.trials, cfg.confidence)
    bound = n * radius**cfg.d * float(j_profile(env, distance)) if distance > 0 else math.inf
    return HittingReport(
        x=[int(c) for c in x],
        y=[int(c) for c in y],
        n=n,
        radius=radius,
        estimate=estimate,
        bound=bound,
        ratio=estimate.p / bound,
        config=cfg.echo(),
    )


def _passage_times(
    cfg: SimulationConfig, sampler: IncrementSampler, threshold: float, horizon: int
) -> np.ndarray:
    """Per trial, the first k <= horizon with |S_k| >= threshold, or NEVER."""
    leave = outside_ball((0,) * cfg.d, threshold)

    def trial(index: int) -> int:
        return trial_walk(cfg, sampler, index).first_time(leave, horizon)

    return np.array(run_trials(cfg, trial, f"Passage |S| >= {threshold}"), dtype=np.int64)


def _count_within(times: np.ndarray, depth: int) -> int:
    return int(np.count_nonzero((times != NEVER) & (times <= depth)))


def maximal_inequality_probe(
    cfg: SimulationConfig,
    r: float,
    gamma: float,
    sampler: Optional[IncrementSampler] = None,
) -> ProbeReport:
    """
    P(max_{k <= floor(gamma / phi(r^-2))} |S_k| >= r/2).

    A window of depth 0 never reaches r/2 > 0, so no trial is simulated.
    """
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    depth = window_depth(cfg.spec, gamma, r)
    if depth == 0 or r <= 0.0:
        return ProbeReport(float(r), gamma, 0, _estimate(0, cfg.trials, cfg.confidence))
    times = _passage_times(cfg, sampler or default_sampler(cfg), 0.5 * r, depth)
    estimate = _estimate(_count_within(times, depth), cfg.trials, cfg.confidence)
    return ProbeReport(float(r), gamma, depth, estimate)


def calibrate_gamma(
    cfg: SimulationConfig, r_grid: Iterable[float], sampler: Optional[IncrementSampler] = None
) -> CalibrationResult:
    """
    Largest gamma = k/64 whose maximal probes have upper confidence bound <= 1/4 on every r.

    Passage times are simulated once per radius at the deepest window; under
    common seeds the event grows with gamma, so the bisection over k is exact.

    Raises:
        DomainError: If r_grid is empty
        CalibrationError: If even gamma = 1/64 fails
    """
    radii = [float(r) for r in r_grid]
    if not radii:
        raise DomainError("calibrate_gamma needs a nonempty radius grid")
    sampler = sampler or default_sampler(cfg)
    deepest = (GAMMA_STEPS - 1) / GAMMA_STEPS
    passages = {}
    for r in radii:
        horizon = window_depth(cfg.spec, deepest, r)
        passages[r] = _passage_times(cfg, sampler, 0.5 * r, horizon) if horizon else None

    def probes(k: int) -> List[ProbeReport]:
        gamma = k / GAMMA_STEPS
        reports = []
        for r in radii:
            depth = window_depth(cfg.spec, gamma, r)
            times = passages[r]
            successes = 0 if times is None or depth == 0 else _count_within(times, depth)
            estimate = _estimate(successes, cfg.trials, cfg.confidence)
            reports.append(ProbeReport(r, gamma, depth, estimate))
        return reports

    def admissible(k: int) -> bool:
        return all(p.estimate.upper <= PROBE_LEVEL for p in probes(k))

    if not admissible(1):
        worst = max(probes(1), key=lambda p: p.estimate.upper)
        raise CalibrationError(worst.r, worst.estimate.upper)

    lo, hi = 1, GAMMA_STEPS - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if admissible(mid):
            lo = mid
        else:
            hi = mid - 1
    gamma = lo / GAMMA_STEPS
    logger.info(f"Calibrated gamma = {gamma} over radii {radii}")
    return CalibrationResult(
        gamma=gamma,
        r_grid=radii,
        probes=probes(lo),
        seeds=[mix_seed(cfg.base_seed, 0), mix_seed(cfg.base_seed, cfg.trials - 1)],
    )


def maximal_stay_probe(
    cfg: SimulationConfig,
    a: float,
    n: int,
    h: Optional[float] = None,
    sampler: Optional[IncrementSampler] = None,
) -> Tuple[ProbabilityEstimate, Optional[float]]:
    """
    P(max_{k <= n} |S_k| <= a), with n h(a) when h(a) is given.

    Pruitt's bound makes the product of the two at most a constant.
    """
    if a < 0.0 or n < 0:
        raise DomainError(f"need a >= 0 and n >= 0, got a={a}, n={n}")
    sampler = sampler or default_sampler(cfg)
    leave = beyond_closed_ball((0,) * cfg.d, a)

    def trial(index: int) -> bool:
        return trial_walk(cfg, sampler, index).first_time(leave, n) == NEVER

    stays = int(sum(run_trials(cfg, trial, f"Stay within {a}")))
    return _estimate(stays, cfg.trials, cfg.confidence), (None if h is None else n * h)


def gamma_tail_check(n_values: Iterable[int], t_values: Iterable[float]) -> GammaTailReport:
    """
    P(T_n <= t) from the regularized incomplete gamma function against the bound t.

    T_n is a sum of n unit exponentials, so P(T_n <= t) <= P(T_1 <= t) <= t.
    """
    rows = []
    for n in n_values:
        if n < 1:
            raise DomainError(f"n must be at least 1, got {n}")
        for t in t_values:
            probability = float(gammainc(n, t))
            rows.append(
                {"n": int(n), "t": float(t), "probability": probability, "gap": t - probability}
            )
    if not rows:
        raise DomainError("gamma_tail_check needs nonempty grids")
    return GammaTailReport(rows=rows)
