"""
Pytest configuration and shared fixtures.

This module contains shared fixtures and configuration for the test suite.
"""

import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Generator

import pytest
import yaml

from subwalk.bernstein import PhiSpec
from subwalk.config import DEFAULT_CONFIG_PATH, load_yaml_config, merge_configs
from subwalk.kernel import LatticeKernel, nstep_kernel_spectral
from subwalk.subordination import SubordinationWeights, closed_form_weights


@pytest.fixture(scope="session")
def stable_half() -> PhiSpec:
    """The stable(1/2) Bernstein function."""
    return PhiSpec.stable(0.5)


@pytest.fixture(scope="session")
def mixture() -> PhiSpec:
    """The mixture lam^0.3 + lam^0.7."""
    return PhiSpec.stable_mixture(0.3, 0.7)


@pytest.fixture(scope="session")
def stable_half_weights(stable_half: PhiSpec) -> SubordinationWeights:
    """Closed-form stable(1/2) weights with a sampler-sized tail."""
    return closed_form_weights(stable_half, 4096)


@pytest.fixture(scope="session")
def stable_half_step(stable_half: PhiSpec) -> LatticeKernel:
    """Spectral one-step kernel of stable(1/2) on a box of radius 64."""
    return nstep_kernel_spectral(stable_half, 1, 1, grid_points_per_axis=1 << 16, radius=64)


@pytest.fixture
def sample_config() -> Dict[str, Any]:
    """
    Return a sample configuration dictionary for testing.

    Returns:
        Dict[str, Any]: A sample configuration dictionary
    """
    return {
        "phi": "stable:0.5",
        "d": 1,
        "n": 8,
        "radius": 32,
        "tol": 1.0e-6,
        "max_terms": 1024,
        "trials": 500,
        "seed": 12345,
        "threads": 1,
        "gamma": 0.5,
        "kernel": {"max_error": 1.0e-6},
        "montecarlo": {"step_cap": 100000, "chunk_steps": 64},
        "report": {"output_dir": "report", "trials": 500},
        "logging": {"level": "WARNING", "console": {"enabled": False}},
    }


@pytest.fixture
def full_config(sample_config: Dict[str, Any]) -> Dict[str, Any]:
    """Sample configuration on top of the packaged defaults."""
    return merge_configs(load_yaml_config(DEFAULT_CONFIG_PATH), sample_config)


@pytest.fixture
def config_file(sample_config: Dict[str, Any]) -> Generator[str, None, None]:
    """
    Create a temporary config file with the sample configuration.

    Args:
        sample_config: The sample configuration dictionary

    Yields:
        str: Path to the temporary config file
    """
    with tempfile.NamedTemporaryFile(suffix=".yaml", delete=False, mode="wb") as temp_file:
        yaml_content = yaml.dump(sample_config)
        temp_file.write(yaml_content.encode("utf-8"))
        temp_file_path = temp_file.name

    yield temp_file_path

    # Clean up
    if os.path.exists(temp_file_path):
        os.unlink(temp_file_path)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """
    Create a temporary directory for testing.

    Yields:
        Path: Path to the temporary directory
    """
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)
