"""Configuration for subwalk."""

from .loader import (
    DEFAULT_CONFIG_PATH,
    load_and_validate_config,
    load_config,
    load_yaml_config,
    merge_configs,
    nest_dotted_keys,
    validate_config,
)

__all__ = [
    "DEFAULT_CONFIG_PATH",
    "load_and_validate_config",
    "load_config",
    "load_yaml_config",
    "merge_configs",
    "nest_dotted_keys",
    "validate_config",
]
