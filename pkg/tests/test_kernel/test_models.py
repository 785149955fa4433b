"""Tests for LatticeKernel and the symmetry projection."""

import itertools

import numpy as np
import pytest

from subwalk.exceptions import DomainError, NumericError
from subwalk.kernel import KernelMethod, LatticeKernel, clip_negative, srw_kernel, symmetrize


def _kernel(values, **kwargs):
    radius = (values.shape[0] - 1) // 2
    return LatticeKernel(
        d=values.ndim, radius=radius, time=1, values=values, method=KernelMethod.SPECTRAL, **kwargs
    )


def test_shape_must_match_box():
    """values must have shape (2L + 1,)^d."""
    with pytest.raises(DomainError):
        LatticeKernel(d=1, radius=2, time=1, values=np.zeros(4), method=KernelMethod.SPECTRAL)


def test_mass_defect_is_derived():
    """Without an explicit defect the kernel charges 1 - mass."""
    kernel = _kernel(np.array([0.1, 0.5, 0.1]))
    assert kernel.mass_defect == pytest.approx(0.3)
    assert kernel.mass == pytest.approx(0.7)


def test_values_are_frozen():
    """Kernels are immutable."""
    kernel = _kernel(np.array([0.25, 0.5, 0.25]))
    with pytest.raises(ValueError):
        kernel.values[0] = 1.0


def test_point_lookup():
    """at() indexes by lattice point; the box is centered."""
    kernel = srw_kernel(2, 2, 3)
    assert kernel.at((0, 0)) == pytest.approx(kernel.center())
    assert kernel.at((2, 0)) == pytest.approx(1.0 / 16.0)
    with pytest.raises(DomainError):
        kernel.at((4, 0))
    with pytest.raises(DomainError):
        kernel.at((1,))


def test_restrict_recomputes_the_defect():
    """Cutting the box moves mass into the defect."""
    kernel = srw_kernel(1, 4, 6)
    small = kernel.restrict(2)
    assert small.radius == 2
    assert small.values.shape == (5,)
    assert small.mass_defect == pytest.approx(2.0 / 16.0)
    with pytest.raises(DomainError):
        small.restrict(3)


def test_detached_drops_the_torus(stable_half_step):
    """The periodic lattice is not carried by detached kernels."""
    detached = stable_half_step.detached()
    assert not detached.is_periodic
    assert detached.mass_defect == stable_half_step.mass_defect
    assert np.array_equal(detached.values, stable_half_step.values)


def test_scaled_scales_bounds(stable_half_step):
    """Homogeneity checks scale values and error bounds together."""
    doubled = stable_half_step.scaled(2.0)
    assert doubled.center() == pytest.approx(2.0 * stable_half_step.center())
    assert doubled.error_bound == pytest.approx(2.0 * stable_half_step.error_bound)


def test_metadata_names_the_time(stable_half_step):
    """Discrete kernels record n, Poissonized ones t."""
    meta = stable_half_step.metadata()
    assert meta["n"] == 1
    assert meta["phi"] == "stable:0.5"
    assert meta["grid"] == 1 << 16

    poissonized = LatticeKernel(
        d=1, radius=1, time=2.5, values=np.full(3, 0.2), method=KernelMethod.POISSONIZED
    )
    assert poissonized.metadata()["t"] == 2.5
    assert "n" not in poissonized.metadata()


def test_points_are_lexicographic():
    """points() walks the box in lexicographic order."""
    points = [point for point, _ in srw_kernel(2, 1, 1).points()]
    assert points == list(itertools.product([-1, 0, 1], repeat=2))


def test_symmetrize_three_dimensions():
    """The projection is invariant under every sign flip and permutation."""
    rng = np.random.default_rng(0)
    result = symmetrize(rng.random((5, 5, 5)))
    for perm in itertools.permutations(range(3)):
        assert np.array_equal(result, np.transpose(result, perm))
    for axis in range(3):
        assert np.array_equal(result, np.flip(result, axis=axis))


def test_symmetrize_periodic_order():
    """In FFT order x -> -x maps index i to -i mod N."""
    rng = np.random.default_rng(1)
    result = symmetrize(rng.random(8), periodic=True)
    for i in range(8):
        assert result[i] == result[-i % 8]


def test_clip_negative():
    """Roundoff is clipped; real negative mass is an error."""
    assert np.array_equal(clip_negative(np.array([-1e-15, 0.5]), "test"), [0.0, 0.5])
    with pytest.raises(NumericError) as exc_info:
        clip_negative(np.array([0.5, -1e-6]), "test")
    assert exc_info.value.worst == (1,)
