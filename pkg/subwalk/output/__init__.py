"""
Result files, run manifests and summaries for subwalk.
"""

from .manifest import MANIFEST_SUFFIX, RunManifest, read_manifest
from .renderer import SummaryRenderer
from .writers import (
    dumps_json,
    read_json,
    read_kernel_csv,
    read_table_csv,
    read_weights_csv,
    sidecar_path,
    write_json,
    write_kernel_csv,
    write_report,
    write_table_csv,
    write_weights_csv,
)

__all__ = [
    "MANIFEST_SUFFIX",
    "RunManifest",
    "SummaryRenderer",
    "dumps_json",
    "read_json",
    "read_kernel_csv",
    "read_manifest",
    "read_table_csv",
    "read_weights_csv",
    "sidecar_path",
    "write_json",
    "write_kernel_csv",
    "write_report",
    "write_table_csv",
    "write_weights_csv",
]
