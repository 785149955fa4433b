"""
Fixtures for Monte Carlo tests.

The identity Bernstein function with the degenerate weights a_1 = 1 is the
simple random walk, which has exact answers to compare against.
"""

import pytest

from subwalk.bernstein import PhiSpec
from subwalk.montecarlo import SimulationConfig
from subwalk.subordination import SubordinationWeights


@pytest.fixture
def plain_config():
    """Simple random walk in one dimension, 2000 trials."""
    return SimulationConfig(
        d=1,
        n_steps=64,
        trials=2000,
        base_seed=20240607,
        spec=PhiSpec.identity(),
        weights=SubordinationWeights.degenerate(),
    )


@pytest.fixture
def stable_config(stable_half, stable_half_weights):
    """stable(1/2) walk in two dimensions, 200 trials."""
    return SimulationConfig(
        d=2,
        n_steps=32,
        trials=200,
        base_seed=99,
        spec=stable_half,
        weights=stable_half_weights,
    )
