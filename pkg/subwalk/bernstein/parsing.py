"""
Parsing of Bernstein function literals.

Literals have the form ``kind:param[,param]`` (``stable:0.5``, ``mix:0.3,0.7``,
``log:0.5,0.2``, ``logcosh:0.5``, ``table:path.csv``) or are the word
``identity``. Configuration files may instead give a mapping with keys
``kind``, ``alpha``, ``beta`` and ``table``.
"""

import csv
import logging
import os
from typing import Any, Dict, List, Optional, Tuple, Union

from ..exceptions import ConfigurationError
from .catalog import PhiKind
from .models import PhiSpec

logger = logging.getLogger(__name__)

KIND_ALIASES = {
    "stable": PhiKind.STABLE,
    "mix": PhiKind.STABLE_MIXTURE,
    "stable_mixture": PhiKind.STABLE_MIXTURE,
    "log": PhiKind.STABLE_LOG,
    "stable_log": PhiKind.STABLE_LOG,
    "logcosh": PhiKind.LOG_COSH,
    "log_cosh": PhiKind.LOG_COSH,
    "table": PhiKind.USER_TABLE,
    "user_table": PhiKind.USER_TABLE,
}


def read_phi_table(path: str) -> Tuple[List[float], List[float]]:
    """
    Read a two-column CSV of (lambda, phi) samples; a header row is optional.

    Args:
        path: CSV file path

    Returns:
        Lambdas and values

    Raises:
        ConfigurationError: If the file cannot be read or parsed
    """
    lams: List[float] = []
    values: List[float] = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            for index, row in enumerate(csv.reader(f)):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    lam, value = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if index == 0:
                        continue
                    raise ConfigurationError(f"{path}:{index + 1}: expected two numbers")
                lams.append(lam)
                values.append(value)
    except OSError as e:
        raise ConfigurationError(f"Cannot read phi table {path}: {e}")

    logger.debug(f"Read {len(lams)} phi samples from {path}")
    return lams, values


def _parse_params(text: str, literal: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigurationError(f"Invalid parameters in phi literal '{literal}'")


def _build(kind: PhiKind, params: Tuple[float, ...], table_path: Optional[str]) -> PhiSpec:
    if kind is PhiKind.USER_TABLE:
        if not table_path:
            raise ConfigurationError("user_table requires a table path")
        lams, values = read_phi_table(table_path)
        return PhiSpec.user_table(lams, values, source=table_path)
    return PhiSpec(kind, params)


def parse_phi(
    value: Union[str, Dict[str, Any], PhiSpec], base_dir: Optional[str] = None
) -> PhiSpec:
    """
    Build a PhiSpec from a literal or a configuration mapping.

    Args:
        value: Literal, mapping or an existing spec
        base_dir: Directory against which relative table paths are resolved

    Returns:
        Validated PhiSpec

    Raises:
        ConfigurationError: If the literal is malformed or parameters are out of range
    """
    if isinstance(value, PhiSpec):
        return value

    if isinstance(value, dict):
        name = str(value.get("kind", "")).strip().lower()
        if name == "identity":
            return PhiSpec.identity()
        if name not in KIND_ALIASES:
            raise ConfigurationError(f"Unknown phi kind: '{name}'")
        params = tuple(
            float(value[key]) for key in ("alpha", "beta") if value.get(key) is not None
        )
        table_path = value.get("table")
        if table_path and base_dir and not os.path.isabs(table_path):
            table_path = os.path.join(base_dir, table_path)
        return _build(KIND_ALIASES[name], params, table_path)

    literal = str(value).strip()
    if literal.lower() == "identity":
        return PhiSpec.identity()

    name, sep, rest = literal.partition(":")
    name = name.strip().lower()
    if not sep or name not in KIND_ALIASES:
        raise ConfigurationError(
            f"Invalid phi literal '{literal}'; expected kind:param[,param] "
            f"with kind in {sorted(set(KIND_ALIASES))}"
        )

    kind = KIND_ALIASES[name]
    if kind is PhiKind.USER_TABLE:
        table_path = rest.strip()
        if base_dir and not os.path.isabs(table_path):
            table_path = os.path.join(base_dir, table_path)
        return _build(kind, (), table_path)
    return _build(kind, _parse_params(rest, literal), None)
