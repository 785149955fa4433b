"""Tests for path simulation and the trial runner."""

import concurrent.futures
from dataclasses import replace

import numpy as np
import pytest

from subwalk.exceptions import DomainError
from subwalk.kernel import nstep_kernel_spectral
from subwalk.montecarlo import (
    default_sampler,
    run_trials,
    sample_endpoints,
    simulate_ctrw,
    simulate_walk,
    trial_walk,
)
from subwalk.subordination import build_sampler, mix_seed


def test_plain_walk_moves_one_site_per_step(plain_config):
    """With a_1 = 1 every step is a single nearest-neighbour move."""
    path = simulate_walk(plain_config, default_sampler(plain_config))
    assert path.shape == (65, 1)
    assert path[0].tolist() == [0]
    assert np.all(np.abs(np.diff(path, axis=0)).sum(axis=1) == 1)


def test_subordinate_path_shape(stable_config):
    """Paths start at the origin and have n + 1 integer positions."""
    path = simulate_walk(stable_config, default_sampler(stable_config))
    assert path.shape == (33, 2)
    assert path.dtype == np.int64
    assert path[0].tolist() == [0, 0]


def test_paths_are_reproducible(stable_config):
    """The same seed gives the same path."""
    first = simulate_walk(stable_config, build_sampler(stable_config.weights, 7))
    second = simulate_walk(stable_config, build_sampler(stable_config.weights, 7))
    other = simulate_walk(stable_config, build_sampler(stable_config.weights, 8))
    assert np.array_equal(first, second)
    assert not np.array_equal(first, other)


def test_prefix_does_not_depend_on_length(stable_config):
    """Increments are drawn in fixed blocks, so longer paths extend shorter ones."""
    weights = stable_config.weights
    short = simulate_walk(replace(stable_config, n_steps=10), build_sampler(weights, 3))
    long = simulate_walk(replace(stable_config, n_steps=300), build_sampler(weights, 3))
    assert np.array_equal(short, long[:11])


def test_sampler_must_match_phi(plain_config, stable_half_weights):
    """A sampler built for another phi is refused."""
    with pytest.raises(DomainError):
        simulate_walk(plain_config, build_sampler(stable_half_weights, 1))


def test_ctrw_path(stable_config):
    """Event times start at 0 and stay within the horizon."""
    cfg = replace(stable_config, t=50.0)
    path = simulate_ctrw(cfg, default_sampler(cfg))
    assert path.times[0] == 0.0
    assert np.all(np.diff(path.times) > 0.0)
    assert path.times[-1] <= 50.0
    assert path.positions.shape == (path.events + 1, 2)
    assert 20 < path.events < 100


def test_ctrw_needs_a_horizon(stable_config):
    """simulate_ctrw without t is a domain error."""
    with pytest.raises(DomainError):
        simulate_ctrw(stable_config, default_sampler(stable_config))


def test_endpoints_of_plain_walk(plain_config):
    """After two plain steps the walk sits at -2, 0 or 2."""
    sampler = default_sampler(plain_config)
    ends = sample_endpoints(plain_config, sampler, 2, 4000)
    assert ends.shape == (4000, 1)
    assert set(np.unique(ends).tolist()) == {-2, 0, 2}
    assert np.mean(ends == 0) == pytest.approx(0.5, abs=0.05)
    with pytest.raises(DomainError):
        sample_endpoints(plain_config, sampler, 2, 0)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 4, 16])
def test_endpoints_follow_the_exact_kernel(stable_config, stable_half, n):
    """
    Test that simulated endpoints of the stable(1/2) walk match the spectral kernel site by site.

    Args:
        n: Number of steps
    """
    cfg = replace(stable_config, d=1)
    size = 200_000
    ends = sample_endpoints(cfg, build_sampler(cfg.weights, 11 + n), n, size)[:, 0]
    kernel = nstep_kernel_spectral(stable_half, 1, n, grid_points_per_axis=1 << 16, radius=64)

    inside = np.abs(ends) <= 64
    counts = np.bincount(ends[inside] + 64, minlength=129)
    expected = size * kernel.values
    kept = expected >= 20.0
    z = (counts[kept] - expected[kept]) / np.sqrt(expected[kept] * (1.0 - kernel.values[kept]))
    assert np.max(np.abs(z)) < 5.5

    outside = size * kernel.mass_defect
    assert abs(np.count_nonzero(~inside) - outside) < 5.5 * np.sqrt(outside)


def test_trial_walk_uses_mixed_seed(plain_config):
    """Trial i draws from the stream seeded with mix_seed(base_seed, i)."""
    walk = trial_walk(plain_config, default_sampler(plain_config), 5)
    assert walk.sampler.seed == mix_seed(plain_config.base_seed, 5)


@pytest.mark.parametrize("threads", [1, 3, 8])
def test_run_trials_keeps_trial_order(plain_config, threads):
    """
    Test that results come back in trial order for any worker count.

    Args:
        threads: Number of worker threads
    """
    cfg = replace(plain_config, trials=50, threads=threads)
    assert run_trials(cfg, lambda i: i * i) == [i * i for i in range(50)]


def test_run_trials_hands_out_batches(plain_config, mocker):
    """Each work unit holds at most batch_size trials."""
    submit = mocker.spy(concurrent.futures.ThreadPoolExecutor, "submit")
    cfg = replace(plain_config, trials=50, threads=3, batch_size=7)
    assert run_trials(cfg, lambda i: -i) == [-i for i in range(50)]
    assert submit.call_count == 8
    assert tuple(submit.call_args_list[-1].args[-2:]) == (49, 50)


def test_batch_size_must_be_positive(plain_config):
    """A zero batch size is a domain error."""
    with pytest.raises(DomainError, match="batch_size"):
        replace(plain_config, batch_size=0)
