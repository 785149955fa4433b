"""
Symmetrization and clipping of kernel arrays.

The nearest-neighbour walk is invariant under sign flips and permutations
of the coordinates; kernels are projected onto that symmetry group so the
invariance holds bit for bit.
"""

import itertools
import logging

import numpy as np

from ..exceptions import NumericError

logger = logging.getLogger(__name__)

# Roundoff below this is clipped to zero; anything more negative is an error
NEGATIVE_TOLERANCE = 1e-13


def _flip(values: np.ndarray, axis: int, periodic: bool) -> np.ndarray:
    flipped = np.flip(values, axis=axis)
    if periodic:
        # FFT order: index i holds offset i mod N, so x -> -x is reverse then shift by one
        flipped = np.roll(flipped, 1, axis=axis)
    return flipped


def symmetrize(values: np.ndarray, periodic: bool = False) -> np.ndarray:
    """
    Average an array over coordinate sign flips and permutations.

    Args:
        values: Centered box array (odd side) or periodic array in FFT order
        periodic: Whether values is in FFT order

    Returns:
        Symmetrized copy
    """
    result = np.array(values, dtype=float)
    for axis in range(result.ndim):
        # a + b == b + a exactly, so each flip average is bit-symmetric
        result = 0.5 * (result + _flip(result, axis, periodic))

    if result.ndim == 2:
        result = 0.5 * (result + result.T)
    elif result.ndim > 2:
        stack = np.stack(
            [np.transpose(result, perm) for perm in itertools.permutations(range(result.ndim))]
        )
        # Summing in sorted order makes the mean independent of the permutation
        result = np.sort(stack, axis=0).sum(axis=0) / stack.shape[0]
    return result


def clip_negative(values: np.ndarray, what: str) -> np.ndarray:
    """
    Clip roundoff-negative masses to zero.

    Raises:
        NumericError: If a value is below -1e-13
    """
    lowest = float(np.min(values))
    if lowest < -NEGATIVE_TOLERANCE:
        index = tuple(int(i) for i in np.unravel_index(int(np.argmin(values)), values.shape))
        logger.error(f"{what}: negative mass {lowest:.3e} at index {index}")
        raise NumericError(f"{what}: negative mass {lowest:.3e} beyond roundoff", worst=index)
    return np.maximum(values, 0.0)
