"""Utility helpers for subwalk."""

from .cache import LRUCache
from .hash import compute_file_hash, hash_bytes
from .logging import ProgressLogger, setup_logging
from .versions import package_versions

__all__ = [
    "LRUCache",
    "ProgressLogger",
    "compute_file_hash",
    "hash_bytes",
    "package_versions",
    "setup_logging",
]
