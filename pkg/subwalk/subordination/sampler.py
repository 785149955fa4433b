"""
Seeded sampling of subordinator increments.

Increments R are drawn with Vose's alias method over a_1..a_M plus one atom
for the tail mass; draws that land on the atom invert the tail survival
function. The table is immutable and shared; each IncrementSampler owns its
own numpy Generator, so parallel workers spawn one sampler per trial from a
seed derived with mix_seed.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from numpy.random import PCG64, Generator

from ..exceptions import CapabilityError, DomainError, NumericError
from .models import SubordinationWeights
from .weights import tail_survival

logger = logging.getLogger(__name__)

# Tail mass a sampler may leave out without an explicit tail atom
NEGLIGIBLE_TAIL = 1e-10
# Draws beyond this increment are clamped; the walk counts stay within int64
MAX_INCREMENT = 1 << 62

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix_seed(base_seed: int, index: int) -> int:
    """
    Derive the seed of trial ``index`` from ``base_seed`` (splitmix64 finalizer).

    The mapping is part of the reproducibility contract and must not change:
    z = base + (index + 1) * 0x9E3779B97F4A7C15 mod 2^64, followed by the
    splitmix64 xor-shift-multiply rounds.

    Args:
        base_seed: Nonnegative 64-bit base seed
        index: Nonnegative trial index

    Returns:
        64-bit seed
    """
    if base_seed < 0 or index < 0:
        raise DomainError(f"seeds and trial indices must be nonnegative: {base_seed}, {index}")
    z = (base_seed + (index + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True, eq=False)
class AliasTable:
    """Vose alias table over outcomes 0..K-1."""

    prob: np.ndarray
    alias: np.ndarray

    @classmethod
    def build(cls, probabilities: np.ndarray) -> "AliasTable":
        """
        Build the table for a probability vector summing to 1.

        Args:
            probabilities: Nonnegative probabilities

        Returns:
            Alias table
        """
        probabilities = np.asarray(probabilities, dtype=float)
        size = probabilities.size
        prob = np.zeros(size)
        alias = np.zeros(size, dtype=np.int64)

        scaled = size * probabilities
        smaller: List[int] = []
        larger: List[int] = []
        for index, value in enumerate(scaled):
            if value < 1.0:
                smaller.append(index)
            else:
                larger.append(index)

        # Pair each underfull column with an overfull donor
        while smaller and larger:
            small = smaller.pop()
            large = larger.pop()
            prob[small] = scaled[small]
            alias[small] = large
            scaled[large] = scaled[large] - (1.0 - scaled[small])
            if scaled[large] < 1.0:
                smaller.append(large)
            else:
                larger.append(large)

        # Leftovers are full up to roundoff
        for index in smaller + larger:
            prob[index] = 1.0
            alias[index] = index

        prob.setflags(write=False)
        alias.setflags(write=False)
        return cls(prob=prob, alias=alias)

    @property
    def size(self) -> int:
        """Number of outcomes."""
        return int(self.prob.size)

    def draw(self, rng: Generator, size: int) -> np.ndarray:
        """Draw ``size`` outcomes; consumes one integer then one uniform block."""
        columns = rng.integers(0, self.size, size=size)
        coins = rng.random(size)
        return np.where(coins < self.prob[columns], columns, self.alias[columns])


class TailSampler:
    """Draws of R conditioned on R > M by inverting the survival function."""

    def __init__(self, survival: Callable[[np.ndarray], np.ndarray], M: int):
        """
        Initialize tail sampler.

        Args:
            survival: m -> P(R > m), decreasing and valid for m >= M
            M: Last explicit increment
        """
        self.survival = survival
        self.M = M
        self.mass = float(survival(np.asarray(M)))

    def invert(self, targets: np.ndarray) -> np.ndarray:
        """Smallest m > M with P(R > m) < target, clamped to MAX_INCREMENT."""
        lo = np.full(targets.shape, self.M, dtype=np.int64)
        hi = np.full(targets.shape, min(2 * self.M, MAX_INCREMENT), dtype=np.int64)
        # Double until the survival drops below the target; lo keeps P(R > lo) >= target
        while True:
            above = self.survival(hi) >= targets
            growing = above & (hi < MAX_INCREMENT)
            lo = np.where(above, hi, lo)
            if not np.any(growing):
                break
            hi = np.where(growing, 2 * np.minimum(hi, MAX_INCREMENT // 2), hi)
        capped = self.survival(hi) >= targets
        while np.any(hi - lo > 1):
            mid = lo + (hi - lo) // 2
            above = self.survival(mid) >= targets
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return np.where(capped, MAX_INCREMENT, hi)

    def draw(self, rng: Generator, size: int) -> np.ndarray:
        """Draw ``size`` increments beyond M; consumes one uniform block."""
        return self.invert(rng.random(size) * self.mass)


class IncrementSampler:
    """
    Stream of increments R with law a_m.

    The alias table covers 1..M plus one atom carrying the tail mass; a draw
    that lands on the atom is resolved by the tail sampler.
    """

    def __init__(
        self,
        table: AliasTable,
        weights: SubordinationWeights,
        seed: int,
        tail: Optional[TailSampler] = None,
    ):
        """
        Initialize sampler.

        Args:
            table: Alias table over a_1..a_M and, with a tail sampler, the tail atom
            weights: Weights the table was built from
            seed: 64-bit seed of this stream
            tail: Sampler of R beyond M
        """
        self.table = table
        self.weights = weights
        self.seed = seed
        self.tail = tail
        self.rng = Generator(PCG64(seed))

    def draw(self, size: int) -> np.ndarray:
        """Draw ``size`` increments."""
        outcomes = self.table.draw(self.rng, size)
        jumps = outcomes + 1
        if self.tail is not None:
            beyond = outcomes == self.weights.M
            count = int(np.count_nonzero(beyond))
            if count:
                jumps[beyond] = self.tail.draw(self.rng, count)
        return jumps

    def draw_one(self) -> int:
        """Draw a single increment."""
        return int(self.draw(1)[0])

    def spawn(self, seed: int) -> "IncrementSampler":
        """A fresh sampler over the same table and tail with its own seed."""
        return IncrementSampler(self.table, self.weights, seed, self.tail)


def build_sampler(
    w: SubordinationWeights,
    seed: int,
    table: Optional[AliasTable] = None,
    tail: Optional[TailSampler] = None,
) -> IncrementSampler:
    """
    Build a seeded increment sampler for the full law, tail included.

    Args:
        w: Subordination weights
        seed: Nonnegative 64-bit seed
        table: Prebuilt alias table for w, if available
        tail: Prebuilt tail sampler for w, if available

    Returns:
        Increment sampler

    Raises:
        DomainError: If the seed is negative
        NumericError: If the weights carry tail mass that cannot be sampled
    """
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")
    explicit = np.clip(w.weights, 0.0, None)
    tail_mass = max(0.0, 1.0 - float(np.sum(explicit)))

    if tail_mass <= NEGLIGIBLE_TAIL:
        if table is None:
            table = AliasTable.build(explicit / np.sum(explicit))
        logger.debug(f"Built sampler over M={w.M} increments without a tail")
        return IncrementSampler(table, w, seed)

    if tail is None:
        if w.spec is None:
            raise NumericError(
                f"weights carry tail mass {tail_mass:.3e} but no Bernstein function to sample it",
                worst=tail_mass,
                suggestion="give weights that sum to 1",
            )
        try:
            survival = tail_survival(w.spec, w.M)
        except CapabilityError as e:
            raise NumericError(
                f"tail mass {tail_mass:.3e} beyond M={w.M} cannot be sampled: {e}",
                worst=tail_mass,
                suggestion="increase the number of weights",
            )
        tail = TailSampler(survival, w.M)
    if table is None:
        table = AliasTable.build(np.append(explicit, tail_mass) / (np.sum(explicit) + tail_mass))
    logger.debug(f"Built sampler over M={w.M} increments plus a tail atom of mass {tail_mass:.3e}")
    return IncrementSampler(table, w, seed, tail)
