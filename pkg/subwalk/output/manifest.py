"""
Run manifests.

A manifest records how a command was run and fingerprints every file it
wrote, so a rerun can be compared digest by digest.
"""

import logging
import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..utils import compute_file_hash, package_versions
from .writers import read_json, write_json

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


@dataclass
class RunManifest:
    """
    Description of one command run.

    Attributes:
        command: Subcommand name
        config: Effective configuration
        seeds: Seeds used
        versions: Package versions
        wall_time: Seconds the run took
        outputs: Output path -> digest
        algorithm: Digest algorithm
    """

    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    versions: Dict[str, str] = field(default_factory=package_versions)
    wall_time: float = 0.0
    outputs: Dict[str, Optional[str]] = field(default_factory=dict)
    algorithm: str = "blake3"
    _started: float = field(
        default_factory=time.perf_counter, init=False, repr=False, compare=False
    )

    def add_output(self, path: str):
        """Fingerprint an output file."""
        self.outputs[path] = compute_file_hash(path, self.algorithm)

    def finish(self):
        """Record the wall time."""
        self.wall_time = time.perf_counter() - self._started

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form."""
        return {
            "command": self.command,
            "config": self.config,
            "seeds": list(self.seeds),
            "versions": self.versions,
            "wall_time": self.wall_time,
            "outputs": self.outputs,
            "algorithm": self.algorithm,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        """Create RunManifest from dictionary."""
        return cls(
            command=data["command"],
            config=data.get("config", {}),
            seeds=list(data.get("seeds", [])),
            versions=data.get("versions", {}),
            wall_time=float(data.get("wall_time", 0.0)),
            outputs=data.get("outputs", {}),
            algorithm=data.get("algorithm", "blake3"),
        )

    def write(self, primary_output: str) -> str:
        """
        Write the manifest as ``<primary_output>.manifest.json``.

        Returns:
            Manifest path
        """
        self.finish()
        path = f"{primary_output}{MANIFEST_SUFFIX}"
        write_json(path, self.to_dict())
        logger.info(f"Wrote manifest {os.path.basename(path)} ({len(self.outputs)} outputs)")
        return path


def read_manifest(path: str) -> RunManifest:
    """Read a manifest written by RunManifest.write."""
    return RunManifest.from_dict(read_json(path))
