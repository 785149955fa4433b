"""Tests for evaluation and inversion of normalized Bernstein functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subwalk.bernstein import (
    PhiSpec,
    eval_levy_density,
    eval_phi,
    eval_phi_complex,
    invert_phi,
    levy_tail,
)
from subwalk.exceptions import CapabilityError, DomainError


def test_stable_is_a_power_law(stable_half):
    """phi(lam) = lam^(1/2) is already normalized."""
    assert eval_phi(stable_half, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_phi(stable_half, 0.25) == pytest.approx(0.5, rel=1e-14)
    assert eval_phi(stable_half, 0.0) == 0.0


def test_mixture_is_normalized(mixture):
    """lam^0.3 + lam^0.7 is halved so that phi(1) = 1."""
    lam = 0.1
    expected = 0.5 * (lam**0.3 + lam**0.7)
    assert eval_phi(mixture, lam) == pytest.approx(expected, rel=1e-14)
    assert eval_phi(mixture, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_array_input_keeps_shape(stable_half):
    """Arrays come back as arrays, scalars as floats."""
    values = eval_phi(stable_half, np.array([[0.25, 1.0], [4.0, 0.0]]))
    assert isinstance(values, np.ndarray)
    assert values.shape == (2, 2)
    assert isinstance(eval_phi(stable_half, 0.5), float)


def test_negative_argument_is_rejected(stable_half):
    """phi is defined on [0, inf) only."""
    with pytest.raises(DomainError):
        eval_phi(stable_half, -0.1)


def test_table_outside_range_is_rejected():
    """A user table does not extrapolate."""
    with pytest.raises(DomainError, match="outside the sampled table range"):
        eval_phi(PhiSpec.identity(), 3.0)


def test_complex_evaluation_matches_real_axis(mixture):
    """The analytic continuation agrees with real evaluation on the positive axis."""
    lam = np.array([0.1, 0.5, 1.5])
    complex_values = eval_phi_complex(mixture, lam.astype(complex))
    assert np.allclose(complex_values.real, eval_phi(mixture, lam), rtol=1e-14)
    assert np.allclose(complex_values.imag, 0.0, atol=1e-15)


def test_complex_evaluation_of_table_is_unavailable():
    """User tables have no continuation off the real axis."""
    with pytest.raises(CapabilityError):
        eval_phi_complex(PhiSpec.identity(), np.array([0.5 + 0.1j]))


def test_levy_density_of_stable_half(stable_half):
    """mu(t) = alpha / Gamma(1 - alpha) t^(-1 - alpha)."""
    t = 2.0
    expected = 0.5 / math.gamma(0.5) * t**-1.5
    assert eval_levy_density(stable_half, t) == pytest.approx(expected, rel=1e-13)
    assert levy_tail(stable_half, t) == pytest.approx(t**-0.5 / math.gamma(0.5), rel=1e-13)


def test_levy_density_needs_positive_time(stable_half):
    """t = 0 is outside the support."""
    with pytest.raises(DomainError):
        eval_levy_density(stable_half, 0.0)


def test_levy_density_of_log_kinds_is_unavailable():
    """Only stable kinds carry a closed-form density."""
    with pytest.raises(CapabilityError):
        eval_levy_density(PhiSpec.stable_log(0.5, 0.2), 1.0)


def test_invert_stable_half(stable_half):
    """phi^-1(y) = y^2 for alpha = 1/2."""
    assert invert_phi(stable_half, 0.5) == pytest.approx(0.25, rel=1e-10)
    assert invert_phi(stable_half, 1.0) == 1.0


@pytest.mark.parametrize("y", [0.0, -0.5, 1.5])
def test_invert_outside_unit_interval(stable_half, y):
    """
    Test inversion outside (0, 1].

    Args:
        stable_half: stable(1/2)
        y: Target value outside the domain
    """
    with pytest.raises(DomainError):
        invert_phi(stable_half, y)


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(min_value=0.1, max_value=0.9),
    y=st.floats(min_value=1e-4, max_value=1.0),
)
def test_inverse_round_trip(alpha, y):
    """phi(phi^-1(y)) = y to 1e-12 relative accuracy."""
    spec = PhiSpec.stable(alpha)
    lam = invert_phi(spec, y)
    assert 0.0 < lam <= 1.0
    assert eval_phi(spec, lam) == pytest.approx(y, rel=1e-11)


@settings(max_examples=25, deadline=None)
@given(
    alpha=st.floats(min_value=0.1, max_value=0.45),
    beta=st.floats(min_value=0.55, max_value=0.9),
    lam=st.floats(min_value=1e-6, max_value=4.0),
    factor=st.floats(min_value=1.0, max_value=32.0),
)
def test_mixture_is_subadditive(alpha, beta, lam, factor):
    """phi(c lam) <= c phi(lam) for c >= 1."""
    spec = PhiSpec.stable_mixture(alpha, beta)
    assert eval_phi(spec, factor * lam) <= factor * eval_phi(spec, lam) * (1.0 + 1e-12)
