"""
File hashing utilities for subwalk.

Output files are fingerprinted for run manifests; BLAKE3 is preferred and
SHA-256 is used when the extension module is missing.
"""

import hashlib
import logging
import os
from typing import Callable, Dict, Optional

logger = logging.getLogger(__name__)


def sha256_hash(data: bytes) -> str:
    """Compute SHA-256 hash of data."""
    return hashlib.sha256(data).hexdigest()


def blake3_hash(data: bytes) -> str:
    """Compute BLAKE3 hash of data."""
    try:
        import blake3

        return str(blake3.blake3(data).hexdigest())
    except ImportError:
        logger.warning("blake3 module not installed, falling back to SHA-256")
        return sha256_hash(data)


HASH_FUNCTIONS: Dict[str, Callable[[bytes], str]] = {
    "sha256": sha256_hash,
    "blake3": blake3_hash,
}


def hash_bytes(data: bytes, algorithm: str = "blake3") -> str:
    """
    Hash an in-memory payload.

    Args:
        data: Bytes to hash
        algorithm: ``blake3`` or ``sha256``

    Returns:
        Lowercase hexadecimal digest
    """
    hash_func = HASH_FUNCTIONS.get(algorithm.lower())
    if hash_func is None:
        raise ValueError(f"Unknown hash algorithm: {algorithm}")
    return hash_func(data)


def compute_file_hash(
    file_path: str, algorithm: str = "blake3", chunk_size: int = 1 << 16
) -> Optional[str]:
    """
    Compute hash of a file.

    Args:
        file_path: Path to the file
        algorithm: Hash algorithm to use
        chunk_size: Chunk size for reading file

    Returns:
        Hexadecimal hash string or None if file not found
    """
    if algorithm.lower() not in HASH_FUNCTIONS:
        logger.error(f"Unknown hash algorithm: {algorithm}")
        return None

    if not os.path.isfile(file_path):
        logger.error(f"File not found: {file_path}")
        return None

    hasher = None
    if algorithm.lower() == "blake3":
        try:
            import blake3

            hasher = blake3.blake3()
        except ImportError:
            logger.warning("blake3 module not installed, falling back to SHA-256")
    if hasher is None:
        hasher = hashlib.sha256()

    with open(file_path, "rb") as f:
        while True:
            data = f.read(chunk_size)
            if not data:
                break
            hasher.update(data)
    return str(hasher.hexdigest())
