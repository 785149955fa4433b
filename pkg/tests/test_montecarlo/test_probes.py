"""
Tests for Monte Carlo probes.

Plain-walk probes are compared with the exact dynamic-programming oracles;
tolerances are several standard errors wide.
"""

import math
from dataclasses import replace

import pytest

from subwalk.exceptions import CalibrationError, DomainError, NumericError
from subwalk.montecarlo import (
    calibrate_gamma,
    estimate_exit_time,
    estimate_hitting,
    gamma_tail_check,
    maximal_inequality_probe,
    maximal_stay_probe,
    srw_exit_time_exact,
    srw_max_probability_exact,
)


def test_plain_exit_time_matches_oracle(plain_config):
    """E tau(r) = r^2 for the simple random walk and 1 / phi(r^-2) = r^2 for identity phi."""
    report = estimate_exit_time(plain_config, 5.0)
    assert report.reference == pytest.approx(25.0)
    assert abs(report.mean_tau - srw_exit_time_exact(5.0)) <= 5.0 * report.stderr
    assert report.ratio == pytest.approx(1.0, abs=0.1)
    assert report.lower < report.mean_tau < report.upper
    assert report.censored == 0
    assert report.config["phi"] == "identity"


def test_poissonized_exit_time(plain_config):
    """The Poissonized exit time has the same mean."""
    report = estimate_exit_time(plain_config, 5.0)
    assert report.wald_gap < 5.0
    assert report.ctrw_mean == pytest.approx(report.mean_tau, rel=0.1)


def test_exit_time_is_thread_independent(plain_config):
    """Trial seeds do not depend on the schedule."""
    single = estimate_exit_time(replace(plain_config, trials=200), 4.0)
    threaded = estimate_exit_time(replace(plain_config, trials=200, threads=4), 4.0)
    assert single.mean_tau == threaded.mean_tau
    assert single.ctrw_mean == threaded.ctrw_mean


def test_exit_time_censoring(plain_config):
    """More than one percent of trials at the step cap is a numeric error."""
    with pytest.raises(NumericError, match="step_cap"):
        estimate_exit_time(replace(plain_config, trials=100, step_cap=2), 5.0)


def test_exit_time_needs_unit_radius(plain_config):
    """r < 1 is rejected."""
    with pytest.raises(DomainError):
        estimate_exit_time(plain_config, 0.5)


def test_stable_exit_time_is_comparable(stable_config):
    """For stable(1/2) the ratio to 1 / phi(r^-2) = r is of order one."""
    report = estimate_exit_time(stable_config, 8.0)
    assert report.reference == pytest.approx(8.0)
    assert 0.1 < report.ratio < 10.0


def test_unreachable_ball_is_never_hit(plain_config):
    """Four plain steps cannot reach B(10, 2)."""
    report = estimate_hitting(replace(plain_config, trials=300), (0,), (10,), 4)
    assert report.radius == pytest.approx(2.0)
    assert report.estimate.successes == 0
    assert report.estimate.upper == pytest.approx(1.0 - 0.05 ** (1.0 / 300))
    assert report.ratio == 0.0
    assert report.bound == pytest.approx(4 * 2.0 * 1e-3)


def test_reachable_ball(plain_config):
    """B(3, 2) = {2, 3, 4} is reached within four steps with moderate probability."""
    report = estimate_hitting(replace(plain_config, trials=500), (0,), (3,), 4)
    # By reflection P(max S_k >= 2) = P(S_4 >= 2) + P(S_4 >= 3) = 3/8
    assert report.estimate.p == pytest.approx(0.375, abs=0.08)
    assert report.estimate.lower <= report.estimate.p <= report.estimate.upper


def test_hitting_domain(plain_config):
    """Points must have dimension d and n >= 0."""
    with pytest.raises(DomainError):
        estimate_hitting(plain_config, (0, 0), (3,), 4)
    with pytest.raises(DomainError):
        estimate_hitting(plain_config, (0,), (3,), -1)


def test_hitting_at_time_zero(stable_config):
    """Before the first step the ball is hit exactly when the walk starts at its center."""
    cfg = replace(stable_config, trials=200)
    at_center = estimate_hitting(cfg, (5,), (5,), 0)
    assert at_center.estimate.p == 1.0
    assert at_center.estimate.successes == 200
    assert at_center.estimate.upper == pytest.approx(1.0)
    assert at_center.radius == 0.0 and at_center.n == 0

    elsewhere = estimate_hitting(cfg, (0,), (5,), 0)
    assert elsewhere.estimate.p == 0.0
    assert elsewhere.estimate.lower == 0.0
    assert elsewhere.bound == 0.0 and elsewhere.ratio == 0.0


def test_probe_of_empty_window(plain_config):
    """A window of depth 0 is answered without simulation."""
    report = maximal_inequality_probe(plain_config, 1.0, 0.5)
    assert report.depth == 0
    assert report.estimate.successes == 0


def test_probe_matches_oracle(plain_config):
    """P(max_{k <= 32} |S_k| >= 4) against the exact recursion."""
    report = maximal_inequality_probe(plain_config, 8.0, 0.5)
    assert report.depth == 32
    exact = srw_max_probability_exact(8.0, 32)
    sigma = math.sqrt(exact * (1.0 - exact) / plain_config.trials)
    assert abs(report.estimate.p - exact) <= 5.0 * sigma


def test_probe_gamma_domain(plain_config):
    """gamma must lie in (0, 1)."""
    with pytest.raises(DomainError):
        maximal_inequality_probe(plain_config, 8.0, 1.0)


def test_calibration(plain_config):
    """The calibrated gamma is the largest grid value whose probes stay below 1/4."""
    cfg = replace(plain_config, trials=500)
    result = calibrate_gamma(cfg, [4.0, 8.0])
    assert (result.gamma * 64).is_integer()
    assert all(probe.estimate.upper <= 0.25 for probe in result.probes)
    # Calibration reuses the probe's trial seeds
    for probe in result.probes:
        direct = maximal_inequality_probe(cfg, probe.r, result.gamma)
        assert direct.estimate.successes == probe.estimate.successes
    if result.gamma < 63 / 64:
        finer = [maximal_inequality_probe(cfg, r, result.gamma + 1 / 64) for r in (4.0, 8.0)]
        assert max(probe.estimate.upper for probe in finer) > 0.25


def test_calibration_failure(plain_config):
    """A single trial cannot certify 1/4, even with no success."""
    with pytest.raises(CalibrationError) as exc_info:
        calibrate_gamma(replace(plain_config, trials=1), [8.0])
    assert exc_info.value.worst_r == 8.0
    assert exc_info.value.upper == pytest.approx(0.95)
    with pytest.raises(DomainError):
        calibrate_gamma(plain_config, [])


def test_stay_probe(plain_config):
    """The walk never stays at the origin for one step and always for zero."""
    cfg = replace(plain_config, trials=100)
    moved, product = maximal_stay_probe(cfg, 0.0, 1, h=0.5)
    assert moved.successes == 0
    assert product == 0.5
    stayed, none = maximal_stay_probe(cfg, 0.0, 0)
    assert stayed.successes == 100
    assert none is None


def test_gamma_tail_check():
    """P(T_n <= t) <= t on every row."""
    report = gamma_tail_check([1, 2, 5], [0.1, 0.5, 1.0])
    assert report.passed
    assert len(report.rows) == 9
    first = report.rows[2]
    assert (first["n"], first["t"]) == (1, 1.0)
    assert first["probability"] == pytest.approx(1.0 - math.exp(-1.0))
    assert report.min_gap == pytest.approx(0.1 - (1.0 - math.exp(-0.1)))
    with pytest.raises(DomainError):
        gamma_tail_check([0], [0.5])
    with pytest.raises(DomainError):
        gamma_tail_check([1], [])
