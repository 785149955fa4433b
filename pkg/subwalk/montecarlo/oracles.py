"""
Exact dynamic-programming oracles for the one-dimensional simple random walk.

States are the lattice points of the open interval (-r, r); the walk is
killed when it leaves.
"""

import math

import numpy as np
from scipy.linalg import solve_banded

from ..exceptions import DomainError


def _interior(r: float) -> int:
    """Largest m with m < r."""
    return int(math.ceil(r)) - 1


def srw_exit_time_exact(r: float) -> float:
    """
    E[min{k : |S_k| >= r}] for the simple random walk on Z from 0.

    Solves E(x) = 1 + (E(x-1) + E(x+1)) / 2 on |x| < r with E = 0 outside;
    for integer r the answer is r^2.
    """
    if r <= 0.0:
        raise DomainError(f"r must be positive, got {r}")
    m = _interior(r)
    size = 2 * m + 1
    bands = np.zeros((3, size))
    bands[0, 1:] = -0.5
    bands[1, :] = 1.0
    bands[2, :-1] = -0.5
    expected = solve_banded((1, 1), bands, np.ones(size))
    return float(expected[m])


def srw_max_probability_exact(r: float, depth: int) -> float:
    """
    P(max_{k <= depth} |S_k| >= r/2) for the simple random walk on Z from 0.
    """
    if depth < 0:
        raise DomainError(f"depth must be nonnegative, got {depth}")
    threshold = 0.5 * r
    if threshold <= 0.0:
        return 1.0
    m = _interior(threshold)
    mass = np.zeros(2 * m + 1)
    mass[m] = 1.0
    for _ in range(depth):
        moved = np.zeros_like(mass)
        moved[1:] += 0.5 * mass[:-1]
        moved[:-1] += 0.5 * mass[1:]
        mass = moved
    return float(max(0.0, 1.0 - mass.sum()))
