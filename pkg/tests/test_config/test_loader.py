"""
Tests for the configuration loader.

This module contains tests for the configuration loading and validation functionality.
"""

from pathlib import Path
from typing import Any, Dict

import pytest
import yaml

from subwalk.bernstein import PhiSpec, parse_phi
from subwalk.config.loader import (
    DEFAULT_CONFIG_PATH,
    load_and_validate_config,
    load_config,
    load_yaml_config,
    merge_configs,
    nest_dotted_keys,
    validate_config,
)
from subwalk.exceptions import ConfigurationError


def test_load_config_with_valid_file(config_file: str, sample_config: Dict[str, Any]):
    """
    Test loading a valid configuration file.

    Args:
        config_file: Path to a temporary config file
        sample_config: The expected configuration dictionary
    """
    # Load the config
    config = load_and_validate_config(config_file)

    # Verify the config was loaded correctly
    assert config["phi"] == sample_config["phi"]
    assert config["seed"] == sample_config["seed"]
    assert config["montecarlo"]["step_cap"] == sample_config["montecarlo"]["step_cap"]


def test_load_config_with_thread_variable(config_file: str, monkeypatch):
    """
    Test that SUBWALK_THREADS overrides the configured thread count.

    Args:
        config_file: Path to a temporary config file
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.setenv("SUBWALK_THREADS", "6")

    config = load_and_validate_config(config_file)

    assert config["threads"] == 6


def test_invalid_thread_variable(config_file: str, monkeypatch):
    """
    Test that a non-integer SUBWALK_THREADS is a configuration error.

    Args:
        config_file: Path to a temporary config file
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.setenv("SUBWALK_THREADS", "many")

    with pytest.raises(ConfigurationError):
        load_and_validate_config(config_file)


def test_config_variable_selects_file(config_file: str, monkeypatch):
    """
    Test that SUBWALK_CONFIG is used when no path is given.

    Args:
        config_file: Path to a temporary config file
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.setenv("SUBWALK_CONFIG", config_file)

    assert load_config()["trials"] == 500


def test_packaged_default_is_last_resort(temp_dir: Path, monkeypatch):
    """
    Test that the packaged defaults are loaded when nothing else exists.

    Args:
        temp_dir: Path to a temporary directory
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.delenv("SUBWALK_CONFIG", raising=False)
    monkeypatch.chdir(temp_dir)
    monkeypatch.setattr("subwalk.config.loader.USER_CONFIG_PATHS", [])

    assert load_config() == load_yaml_config(DEFAULT_CONFIG_PATH)


def test_load_config_with_nonexistent_file():
    """Test loading a configuration with a nonexistent file."""
    with pytest.raises(FileNotFoundError):
        load_and_validate_config("nonexistent_config.yaml")


def test_load_config_with_invalid_yaml(temp_dir: Path):
    """
    Test loading a configuration with invalid YAML.

    Args:
        temp_dir: Path to a temporary directory
    """
    invalid_yaml_file = temp_dir / "invalid.yaml"
    invalid_yaml_file.write_text("invalid: yaml: content:")

    with pytest.raises(yaml.YAMLError):
        load_and_validate_config(str(invalid_yaml_file))


def test_non_mapping_yaml_is_empty(temp_dir: Path):
    """
    Test that a YAML list is read as an empty configuration.

    Args:
        temp_dir: Path to a temporary directory
    """
    list_file = temp_dir / "list.yaml"
    list_file.write_text("- 1\n- 2\n")

    assert load_yaml_config(str(list_file)) == {}


def test_load_config_with_default_values(temp_dir: Path):
    """
    Test loading a configuration with default values.

    Args:
        temp_dir: Path to a temporary directory
    """
    minimal_config_file = temp_dir / "minimal.yaml"
    minimal_config_file.write_text(
        """
    phi: "mix:0.3,0.7"
    d: 2
    kernel:
      max_error: 1.0e-8
    """
    )

    config = load_and_validate_config(str(minimal_config_file))

    # Overrides are applied and the rest comes from the packaged defaults
    assert config["phi"] == "mix:0.3,0.7"
    assert config["d"] == 2
    assert config["kernel"]["max_error"] == 1.0e-8
    assert config["kernel"]["max_grid"][2] == 4096
    assert "confidence" in config["montecarlo"]


def test_phi_mapping_is_accepted(temp_dir: Path):
    """
    Test that phi may be given as a mapping with a kind.

    Args:
        temp_dir: Path to a temporary directory
    """
    mapping_file = temp_dir / "mapping.yaml"
    mapping_file.write_text("phi:\n  kind: stable\n  alpha: 0.25\n")

    config = load_and_validate_config(str(mapping_file))

    assert config["phi"] == {"kind": "stable", "alpha": 0.25}


def test_flat_phi_keys_are_nested(temp_dir: Path):
    """
    Test that flat phi.kind / phi.alpha keys build the phi mapping.

    Args:
        temp_dir: Path to a temporary directory
    """
    flat_file = temp_dir / "flat.yaml"
    flat_file.write_text(
        "phi.kind: mix\nphi.alpha: 0.3\nphi.beta: 0.7\nmontecarlo.batch_size: 128\n"
    )

    config = load_and_validate_config(str(flat_file))

    assert config["phi"] == {"kind": "mix", "alpha": 0.3, "beta": 0.7}
    assert parse_phi(config["phi"]) == PhiSpec.stable_mixture(0.3, 0.7)
    assert config["montecarlo"]["batch_size"] == 128
    assert config["montecarlo"]["confidence"] == 0.95


def test_flat_key_conflicting_with_literal(temp_dir: Path):
    """
    Test that a phi literal next to flat phi keys is rejected.

    Args:
        temp_dir: Path to a temporary directory
    """
    mixed_file = temp_dir / "mixed.yaml"
    mixed_file.write_text("phi: stable:0.5\nphi.alpha: 0.3\n")

    with pytest.raises(ConfigurationError, match="phi.alpha"):
        load_config(str(mixed_file))


def test_nest_dotted_keys_merges_with_sections():
    """Test that flat keys join an existing section without touching the input."""
    flat = {"montecarlo": {"step_cap": 10}, "montecarlo.chunk_steps": 8, "d": 2}
    nested = nest_dotted_keys(flat)
    assert nested == {"montecarlo": {"step_cap": 10, "chunk_steps": 8}, "d": 2}
    assert flat["montecarlo"] == {"step_cap": 10}


@pytest.mark.parametrize(
    "override",
    [
        {"phi": 0.5},
        {"phi": {"alpha": 0.5}},
        {"phi": {"kind": "stable", "alpah": 0.5}},
        {"d": 0},
        {"tol": 1.0e-2},
        {"tol": 0},
        {"max_terms": 32},
        {"trials": 0},
        {"threads": 0},
        {"seed": -1},
        {"seed": 2**64},
        {"gamma": 1.0},
        {"kernel": {"max_error": 0}},
        {"montecarlo": {"confidence": 1.5}},
        {"montecarlo": {"step_cap": 0}},
        {"montecarlo": {"batch_size": "big"}},
    ],
)
def test_invalid_values(override: Dict[str, Any]):
    """
    Test that out-of-range values fail validation.

    Args:
        override: Configuration change making it invalid
    """
    config = merge_configs(load_yaml_config(DEFAULT_CONFIG_PATH), override)

    assert not validate_config(config)


def test_invalid_file_raises(temp_dir: Path):
    """
    Test that an invalid configuration file raises ConfigurationError.

    Args:
        temp_dir: Path to a temporary directory
    """
    bad_file = temp_dir / "bad.yaml"
    bad_file.write_text("gamma: 2.0\n")

    with pytest.raises(ConfigurationError, match="Invalid configuration"):
        load_and_validate_config(str(bad_file))


def test_merge_configs_is_deep_and_pure():
    """Test that nested sections merge key by key without mutating inputs."""
    base = {"montecarlo": {"step_cap": 10, "confidence": 0.95}, "d": 1}
    override = {"montecarlo": {"step_cap": 20}, "d": 2}

    merged = merge_configs(base, override)

    assert merged == {"montecarlo": {"step_cap": 20, "confidence": 0.95}, "d": 2}
    assert base["montecarlo"]["step_cap"] == 10
