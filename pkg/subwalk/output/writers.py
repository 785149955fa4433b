"""
Result files for subwalk.

CSV files have a header row, LF line endings and repr-exact floats; JSON
files have sorted keys, two-space indentation and a trailing newline. Every
writer has a reader that regenerates identical in-memory values.
"""

import csv
import json
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..bernstein import PhiSpec, parse_phi
from ..exceptions import ConfigurationError, ValidationError
from ..kernel import KernelMethod, LatticeKernel
from ..subordination import SubordinationWeights, WeightsMethod

logger = logging.getLogger(__name__)


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps_json(data: Any) -> str:
    """Canonical JSON text of data."""
    return json.dumps(data, sort_keys=True, indent=2, default=_to_builtin) + "\n"


def write_json(path: str, data: Any) -> str:
    """
    Write data as canonical JSON.

    Args:
        path: Output path
        data: JSON-serializable data (numpy scalars and arrays allowed)

    Returns:
        The path written
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(data))
    logger.debug(f"Wrote {path}")
    return path


def read_json(path: str) -> Any:
    """Read a JSON file."""
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def sidecar_path(path: str) -> str:
    """Path of the JSON metadata written next to a table."""
    return f"{path}.json"


def _write_rows(path: str, header: List[str], rows) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_rows(path: str) -> List[List[str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise ValidationError(f"{path} is empty")
    return rows


def _spec_from_literal(literal: Optional[str]) -> Optional[PhiSpec]:
    if literal is None:
        return None
    try:
        return parse_phi(literal)
    except (ConfigurationError, OSError):
        logger.warning(f"Cannot rebuild phi from '{literal}'; reading without it")
        return None


def write_weights_csv(path: str, w: SubordinationWeights) -> str:
    """
    Write weights as ``m,a_m`` rows with a JSON sidecar holding M and the tail mass.

    Returns:
        The path written
    """
    rows = ((m, repr(float(a))) for m, a in enumerate(w.weights, start=1))
    _write_rows(path, ["m", "a_m"], rows)
    write_json(sidecar_path(path), w.metadata())
    logger.info(f"Wrote {w.M} weights to {path}")
    return path


def read_weights_csv(path: str) -> SubordinationWeights:
    """Read weights written by write_weights_csv."""
    rows = _read_rows(path)
    weights = np.array([float(row[1]) for row in rows[1:]])
    meta = read_json(sidecar_path(path))
    return SubordinationWeights(
        weights=weights,
        tail_mass=float(meta["tail_mass"]),
        method=WeightsMethod(meta["method"]),
        spec=_spec_from_literal(meta.get("phi")),
        converged=bool(meta.get("converged", True)),
        tol=meta.get("tol"),
    )


def write_kernel_csv(path: str, kernel: LatticeKernel) -> str:
    """
    Write a kernel as ``x1..xd,p`` rows in lexicographic order, with a JSON sidecar.

    Returns:
        The path written
    """
    header = [f"x{i + 1}" for i in range(kernel.d)] + ["p"]
    rows = (list(point) + [repr(value)] for point, value in kernel.points())
    _write_rows(path, header, rows)
    write_json(sidecar_path(path), kernel.metadata())
    logger.info(f"Wrote kernel with {kernel.values.size} points to {path}")
    return path


def read_kernel_csv(path: str) -> LatticeKernel:
    """Read a kernel written by write_kernel_csv (the periodic lattice is not stored)."""
    rows = _read_rows(path)
    meta = read_json(sidecar_path(path))
    d, radius = int(meta["d"]), int(meta["radius"])
    values = np.zeros((2 * radius + 1,) * d)
    for row in rows[1:]:
        index = tuple(int(c) + radius for c in row[:d])
        values[index] = float(row[d])
    return LatticeKernel(
        d=d,
        radius=radius,
        time=meta["t"] if "t" in meta else meta["n"],
        values=values,
        method=KernelMethod(meta["method"]),
        mass_defect=float(meta["mass_defect"]),
        error_bound=float(meta["error_bound"]),
        grid=meta.get("grid"),
        spec=_spec_from_literal(meta.get("phi")),
    )


def write_report(path: str, report: Any) -> str:
    """Write any object with to_dict() as canonical JSON."""
    data: Dict[str, Any] = report.to_dict() if hasattr(report, "to_dict") else report
    return write_json(path, data)


def _cell(value: Any) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_table_csv(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Write a numeric table; integers stay integers, floats are repr-exact.

    Args:
        path: Output path
        header: Column names
        rows: Rows of numbers
        metadata: Written to the JSON sidecar when given

    Returns:
        The path written
    """
    _write_rows(path, list(header), ([_cell(v) for v in row] for row in rows))
    if metadata is not None:
        write_json(sidecar_path(path), metadata)
    logger.info(f"Wrote table {os.path.basename(path)}")
    return path


def read_table_csv(path: str) -> Tuple[List[str], np.ndarray]:
    """
    Read a table written by write_table_csv.

    Returns:
        Header and a float array with one row per record
    """
    rows = _read_rows(path)
    values = np.array([[float(c) for c in row] for row in rows[1:]], dtype=float)
    return rows[0], values.reshape(len(rows) - 1, len(rows[0]))
