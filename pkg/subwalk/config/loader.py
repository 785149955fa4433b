"""
Configuration loader for subwalk.

This module handles loading configuration from various sources:
1. Explicit path passed on the command line
2. Environment variable: SUBWALK_CONFIG
3. User configuration files
4. Packaged default configuration
"""

import copy
import logging
import os
from typing import Any, Dict, List, Optional

import yaml

from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "default.yaml")
USER_CONFIG_PATHS = [
    "./subwalk.yaml",
    "./subwalk.yml",
    os.path.expanduser("~/.config/subwalk/config.yaml"),
]


PHI_MAPPING_KEYS = ("kind", "alpha", "beta", "table")


def nest_dotted_keys(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Turn flat ``section.key`` entries into nested sections.

    ``phi.kind: mix`` next to ``phi.alpha: 0.3`` reads as
    ``phi: {kind: mix, alpha: 0.3}``.

    Raises:
        ConfigurationError: If a dotted key collides with a plain value
    """
    result: Dict[str, Any] = {}
    dotted = []
    for key, value in config.items():
        if isinstance(key, str) and "." in key:
            dotted.append((key, value))
        else:
            result[key] = copy.deepcopy(value)

    for key, value in dotted:
        *heads, leaf = key.split(".")
        node = result
        for head in heads:
            child = node.setdefault(head, {})
            if not isinstance(child, dict):
                raise ConfigurationError(f"'{key}' conflicts with '{head}: {child!r}'")
            node = child
        node[leaf] = value
    return result


def load_yaml_config(path: str) -> Dict[str, Any]:
    """
    Load a YAML configuration file; flat ``section.key`` entries are nested.

    Args:
        path: Path to the YAML file

    Returns:
        Dict containing the configuration

    Raises:
        FileNotFoundError: If the file doesn't exist
        yaml.YAMLError: If the file is not valid YAML
        ConfigurationError: If a flat key collides with a plain value
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
        logger.debug(f"Loaded configuration from {path}")
        if config is None:
            return {}
        if not isinstance(config, dict):
            logger.warning(
                f"Configuration from {path} is not a dictionary, converting to empty dict"
            )
            return {}
        return nest_dotted_keys(config)
    except FileNotFoundError:
        logger.error(f"Configuration file not found: {path}")
        raise
    except yaml.YAMLError as e:
        logger.error(f"Error parsing YAML configuration: {e}")
        raise


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from various sources.

    Priority order:
    1. Specified config_path parameter
    2. Environment variable: SUBWALK_CONFIG
    3. User configuration files
    4. Packaged default configuration

    Args:
        config_path: Optional path to configuration file

    Returns:
        Dict containing the configuration

    Raises:
        FileNotFoundError: If the specified file doesn't exist
    """
    if config_path:
        if os.path.exists(config_path):
            return load_yaml_config(config_path)
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    env_config_path = os.environ.get("SUBWALK_CONFIG")
    if env_config_path and os.path.exists(env_config_path):
        return load_yaml_config(env_config_path)

    for path in USER_CONFIG_PATHS:
        if os.path.exists(path):
            return load_yaml_config(path)

    return load_yaml_config(DEFAULT_CONFIG_PATH)


def merge_configs(base_config: Dict[str, Any], override_config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Recursively merge two configurations.

    Args:
        base_config: Base configuration
        override_config: Configuration to override base

    Returns:
        Merged configuration
    """
    result = copy.deepcopy(base_config)

    for key, value in override_config.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = copy.deepcopy(value)

    return result


def _config_problems(config: Dict[str, Any]) -> List[str]:
    problems = []

    phi = config.get("phi")
    if not isinstance(phi, (str, dict)):
        problems.append("'phi' must be a literal such as 'stable:0.5' or a mapping with 'kind'")
    elif isinstance(phi, dict) and "kind" not in phi:
        problems.append("Missing 'kind' in phi mapping")
    if isinstance(phi, dict):
        unknown = sorted(str(key) for key in phi if key not in PHI_MAPPING_KEYS)
        if unknown:
            problems.append(f"Unknown phi keys: {', '.join(unknown)}")

    d = config.get("d")
    if not isinstance(d, int) or d < 1:
        problems.append(f"'d' must be a positive integer, got {d!r}")

    tol = config.get("tol")
    if not isinstance(tol, (int, float)) or not 0 < tol <= 1e-3:
        problems.append(f"'tol' must lie in (0, 1e-3], got {tol!r}")

    max_terms = config.get("max_terms")
    if not isinstance(max_terms, int) or max_terms < 64:
        problems.append(f"'max_terms' must be an integer >= 64, got {max_terms!r}")

    for key in ("trials", "threads"):
        value = config.get(key)
        if not isinstance(value, int) or value < 1:
            problems.append(f"'{key}' must be a positive integer, got {value!r}")

    seed = config.get("seed")
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        problems.append(f"'seed' must be a 64-bit unsigned integer, got {seed!r}")

    gamma = config.get("gamma")
    if not isinstance(gamma, (int, float)) or not 0 < gamma < 1:
        problems.append(f"'gamma' must lie in (0, 1), got {gamma!r}")

    max_error = config.get("kernel", {}).get("max_error")
    if not isinstance(max_error, (int, float)) or max_error <= 0:
        problems.append(f"'kernel.max_error' must be positive, got {max_error!r}")

    montecarlo = config.get("montecarlo", {})
    confidence = montecarlo.get("confidence")
    if not isinstance(confidence, (int, float)) or not 0 < confidence < 1:
        problems.append(f"'montecarlo.confidence' must lie in (0, 1), got {confidence!r}")
    for key in ("step_cap", "chunk_steps", "batch_size"):
        value = montecarlo.get(key)
        if not isinstance(value, int) or value < 1:
            problems.append(f"'montecarlo.{key}' must be a positive integer, got {value!r}")

    return problems


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate configuration structure and value ranges.

    Args:
        config: Configuration to validate

    Returns:
        True if configuration is valid, False otherwise
    """
    problems = _config_problems(config)
    for problem in problems:
        logger.error(problem)
    return not problems


def load_and_validate_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration, fill packaged defaults and validate.

    Args:
        config_path: Optional path to configuration file

    Returns:
        Validated configuration

    Raises:
        ConfigurationError: If configuration is invalid
    """
    default_config = load_yaml_config(DEFAULT_CONFIG_PATH)
    config = merge_configs(default_config, load_config(config_path))

    env_threads = os.environ.get("SUBWALK_THREADS")
    if env_threads:
        try:
            config["threads"] = int(env_threads)
        except ValueError:
            raise ConfigurationError(f"SUBWALK_THREADS must be an integer, got {env_threads!r}")

    if not validate_config(config):
        raise ConfigurationError("Invalid configuration")

    return config
