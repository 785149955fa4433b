"""
Path simulation of the subordinate walk.

One subordinate step draws R from the increment sampler and moves the
nearest-neighbour walk R times; the R direction choices are drawn jointly
as Multinomial(R, 1/2d) over the 2d unit moves. Increments are drawn in
blocks of chunk_steps, so a path prefix does not depend on how far the
path is continued.
"""

import concurrent.futures
import logging
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from ..exceptions import DomainError
from ..subordination import IncrementSampler, build_sampler, mix_seed
from ..utils import ProgressLogger
from .models import CtrwPath, SimulationConfig

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Sentinel for "no passage within the horizon"
NEVER = -1


class TrialWalk:
    """Lazily extended path of one trial."""

    def __init__(
        self,
        sampler: IncrementSampler,
        d: int,
        chunk_steps: int,
        start: Optional[Sequence[int]] = None,
    ):
        """
        Initialize trial walk.

        Args:
            sampler: Increment sampler owning this trial's generator
            d: Dimension
            chunk_steps: Steps drawn per block
            start: Starting point (default: origin)
        """
        self.sampler = sampler
        self.rng = sampler.rng
        self.d = d
        self.chunk_steps = chunk_steps
        self.directions = np.full(2 * d, 1.0 / (2 * d))
        self.start = np.zeros(d, dtype=np.int64) if start is None else np.asarray(start, np.int64)
        self.position = self.start.copy()
        self.steps = 0

    def chunk(self) -> np.ndarray:
        """Positions after each of the next chunk_steps steps, shape (chunk_steps, d)."""
        jumps = self.sampler.draw(self.chunk_steps)
        counts = self.rng.multinomial(jumps, self.directions)
        moves = counts[:, 0::2] - counts[:, 1::2]
        positions = self.position + np.cumsum(moves, axis=0)
        self.position = positions[-1]
        self.steps += self.chunk_steps
        return positions

    def path(self, n_steps: int) -> np.ndarray:
        """Positions S_0..S_n, shape (n_steps + 1, d)."""
        blocks = [self.start[None, :]]
        while self.steps < n_steps:
            blocks.append(self.chunk())
        return np.concatenate(blocks)[: n_steps + 1]

    def first_time(self, hit: Callable[[np.ndarray], np.ndarray], horizon: int) -> int:
        """
        First k <= horizon with hit(S_k), or NEVER.

        Args:
            hit: Maps an (m, d) array of positions to a boolean mask
            horizon: Last step examined
        """
        if hit(self.start[None, :])[0]:
            return 0
        while self.steps < horizon:
            offset = self.steps
            mask = hit(self.chunk())
            if np.any(mask):
                k = offset + int(np.argmax(mask)) + 1
                return k if k <= horizon else NEVER
        return NEVER


def outside_ball(center: Sequence[int], r: float) -> Callable[[np.ndarray], np.ndarray]:
    """Mask of positions with |y - center| >= r."""
    origin = np.asarray(center, dtype=float)

    def hit(positions: np.ndarray) -> np.ndarray:
        return np.sum((positions - origin) ** 2, axis=1) >= r * r

    return hit


def beyond_closed_ball(center: Sequence[int], a: float) -> Callable[[np.ndarray], np.ndarray]:
    """Mask of positions with |y - center| > a."""
    origin = np.asarray(center, dtype=float)

    def hit(positions: np.ndarray) -> np.ndarray:
        return np.sum((positions - origin) ** 2, axis=1) > a * a

    return hit


def inside_ball(center: Sequence[int], r: float) -> Callable[[np.ndarray], np.ndarray]:
    """Mask of positions with |y - center| < r."""
    outside = outside_ball(center, r)

    def hit(positions: np.ndarray) -> np.ndarray:
        return ~outside(positions)

    return hit


def trial_walk(
    cfg: SimulationConfig,
    sampler: IncrementSampler,
    index: int,
    start: Optional[Sequence[int]] = None,
) -> TrialWalk:
    """Walk of trial ``index``, seeded with mix_seed(base_seed, index)."""
    return TrialWalk(sampler.spawn(mix_seed(cfg.base_seed, index)), cfg.d, cfg.chunk_steps, start)


def _check_sampler(cfg: SimulationConfig, sampler: IncrementSampler):
    spec = sampler.weights.spec
    if spec is not None and spec != cfg.spec:
        raise DomainError(f"sampler for {spec.literal} does not match {cfg.spec.literal}")


def default_sampler(cfg: SimulationConfig) -> IncrementSampler:
    """Sampler over cfg.weights seeded with the base seed."""
    return build_sampler(cfg.weights, cfg.base_seed)


def simulate_walk(cfg: SimulationConfig, sampler: IncrementSampler) -> np.ndarray:
    """
    One path S_0..S_n of the subordinate walk from the origin.

    Returns:
        Integer array of shape (n_steps + 1, d)
    """
    _check_sampler(cfg, sampler)
    return TrialWalk(sampler, cfg.d, cfg.chunk_steps).path(cfg.n_steps)


def simulate_ctrw(cfg: SimulationConfig, sampler: IncrementSampler) -> CtrwPath:
    """
    One path of the Poissonized walk up to the horizon cfg.t.

    Holding times are unit exponentials drawn first, in blocks; the embedded
    chain is the subordinate walk.

    Raises:
        DomainError: If no horizon is set
    """
    _check_sampler(cfg, sampler)
    if cfg.t is None:
        raise DomainError("simulate_ctrw needs a time horizon t")

    times = [np.zeros(1)]
    elapsed = 0.0
    while elapsed <= cfg.t:
        block = elapsed + np.cumsum(sampler.rng.exponential(1.0, size=cfg.chunk_steps))
        times.append(block)
        elapsed = float(block[-1])
    all_times = np.concatenate(times)
    events = int(np.searchsorted(all_times, cfg.t, side="right")) - 1

    positions = TrialWalk(sampler, cfg.d, cfg.chunk_steps).path(events)
    return CtrwPath(times=all_times[: events + 1], positions=positions)


def sample_endpoints(
    cfg: SimulationConfig, sampler: IncrementSampler, n: int, size: int
) -> np.ndarray:
    """
    Endpoints S_n of ``size`` independent walks from one sampler stream.

    Returns:
        Integer array of shape (size, d)
    """
    _check_sampler(cfg, sampler)
    if n < 0 or size < 1:
        raise DomainError(f"need n >= 0 and size >= 1, got n={n}, size={size}")
    directions = np.full(2 * cfg.d, 1.0 / (2 * cfg.d))
    position = np.zeros((size, cfg.d), dtype=np.int64)
    for _ in range(n):
        counts = sampler.rng.multinomial(sampler.draw(size), directions)
        position += counts[:, 0::2] - counts[:, 1::2]
    return position


def run_trials(
    cfg: SimulationConfig,
    trial: Callable[[int], T],
    description: str = "Simulating",
) -> List[T]:
    """
    Run trial(i) for i in range(cfg.trials) on cfg.threads workers.

    Trials are handed out in blocks of cfg.batch_size. Results come back in
    trial order whatever the schedule.
    """
    progress = ProgressLogger(logger, cfg.trials, description, unit="trials")
    starts = list(range(0, cfg.trials, cfg.batch_size))
    blocks = list(zip(starts, starts[1:] + [cfg.trials]))

    def run_block(lo: int, hi: int) -> List[T]:
        return [trial(i) for i in range(lo, hi)]

    if cfg.threads == 1 or len(blocks) == 1:
        results: List[T] = []
        for lo, hi in blocks:
            results.extend(run_block(lo, hi))
            progress.update(hi - lo)
        return results

    ordered: List[List[T]] = [[] for _ in blocks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        future_to_block = {
            executor.submit(run_block, lo, hi): index for index, (lo, hi) in enumerate(blocks)
        }
        for future in concurrent.futures.as_completed(future_to_block):
            index = future_to_block[future]
            ordered[index] = future.result()
            progress.update(len(ordered[index]))
    return [result for block in ordered for result in block]
