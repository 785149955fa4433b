"""Tests for hashing utilities."""

import hashlib

import pytest

from subwalk.utils import compute_file_hash, hash_bytes


def test_sha256_of_bytes():
    """sha256 matches hashlib."""
    assert hash_bytes(b"subwalk", "sha256") == hashlib.sha256(b"subwalk").hexdigest()


def test_blake3_of_bytes():
    """blake3 digests are 64 hex characters and deterministic."""
    digest = hash_bytes(b"subwalk")
    assert len(digest) == 64
    assert digest == hash_bytes(b"subwalk", "BLAKE3")
    assert digest != hash_bytes(b"subwalk!")


def test_unknown_algorithm():
    """Unknown algorithms are an error for bytes and None for files."""
    with pytest.raises(ValueError):
        hash_bytes(b"x", "md5")
    assert compute_file_hash(__file__, "md5") is None


def test_file_hash_matches_bytes_hash(temp_dir):
    """Chunked file hashing agrees with hashing the content at once."""
    path = temp_dir / "data.bin"
    payload = bytes(range(256)) * 1000
    path.write_bytes(payload)
    for algorithm in ("sha256", "blake3"):
        assert compute_file_hash(str(path), algorithm, chunk_size=1000) == hash_bytes(
            payload, algorithm
        )


def test_missing_file(temp_dir):
    """Missing files have no digest."""
    assert compute_file_hash(str(temp_dir / "absent")) is None
