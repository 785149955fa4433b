"""
Tests for result writers.

This module checks the file formats and that every reader regenerates
the values its writer was given.
"""

import json
import os

import numpy as np
import pytest

from subwalk.estimates import RatioReport
from subwalk.kernel import srw_kernel
from subwalk.output import (
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
from subwalk.subordination import SubordinationWeights, stable_weights_exact


def test_json_is_canonical():
    """Sorted keys, two-space indent, trailing newline, numpy values converted."""
    text = dumps_json({"b": np.int64(2), "a": np.array([0.5, 1.5]), "c": (1, 2)})
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert '\n  "a": [\n    0.5,' in text
    assert json.loads(text) == {"a": [0.5, 1.5], "b": 2, "c": [1, 2]}


def test_json_rejects_unknown_objects():
    """Arbitrary objects are not silently stringified."""
    with pytest.raises(TypeError):
        dumps_json({"x": object()})


def test_write_json_creates_directories(temp_dir):
    """Parent directories are created on demand."""
    path = write_json(str(temp_dir / "nested" / "out.json"), {"k": 1})
    assert read_json(path) == {"k": 1}


def test_weights_csv(temp_dir, stable_half_weights):
    """m,a_m rows plus a sidecar with M and the tail mass."""
    path = write_weights_csv(str(temp_dir / "weights.csv"), stable_half_weights)
    with open(path, encoding="utf-8") as f:
        lines = f.read().split("\n")
    assert lines[0] == "m,a_m"
    assert lines[1] == f"1,{repr(float(stable_half_weights.weights[0]))}"
    meta = read_json(sidecar_path(path))
    assert meta["M"] == 4096
    assert meta["phi"] == "stable:0.5"

    restored = read_weights_csv(path)
    assert np.array_equal(restored.weights, stable_half_weights.weights)
    assert restored.tail_mass == stable_half_weights.tail_mass
    assert restored.method is stable_half_weights.method
    assert restored.spec == stable_half_weights.spec


def test_explicit_weights_without_phi(temp_dir):
    """Weights without phi have a null sidecar entry."""
    weights = SubordinationWeights.explicit(stable_weights_exact(0.5, 3), tail_mass=0.3125)
    path = write_weights_csv(str(temp_dir / "w.csv"), weights)
    assert read_json(sidecar_path(path))["phi"] is None
    assert read_weights_csv(path).spec is None


def test_kernel_csv(temp_dir, stable_half_step):
    """x1..xd,p rows in lexicographic order."""
    kernel = stable_half_step.restrict(4)
    path = write_kernel_csv(str(temp_dir / "kernel.csv"), kernel)
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert lines[0] == "x1,p"
    assert lines[1].startswith("-4,")
    assert len(lines) == 10

    restored = read_kernel_csv(path)
    assert np.array_equal(restored.values, kernel.values)
    assert restored.metadata() == kernel.metadata()
    assert not restored.is_periodic


def test_two_dimensional_kernel_csv(temp_dir):
    """Points carry one column per coordinate."""
    kernel = srw_kernel(2, 2, 2)
    path = write_kernel_csv(str(temp_dir / "k2.csv"), kernel)
    header, values = read_table_csv(path)
    assert header == ["x1", "x2", "p"]
    assert values.shape == (25, 3)
    assert values[:, 2].sum() == pytest.approx(1.0)
    assert np.array_equal(read_kernel_csv(path).values, kernel.values)


def test_table_csv(temp_dir):
    """Integers stay integers and floats are repr-exact."""
    third = 1.0 / 3.0
    path = write_table_csv(
        str(temp_dir / "table.csv"), ["n", "ratio"], [(1, third), (np.int64(2), 0.25)]
    )
    with open(path, encoding="utf-8") as f:
        assert f.read() == f"n,ratio\n1,{repr(third)}\n2,0.25\n"
    assert not os.path.exists(sidecar_path(path))

    header, values = read_table_csv(path)
    assert header == ["n", "ratio"]
    assert values[0, 1] == third


def test_table_csv_with_metadata(temp_dir):
    """Metadata goes to the sidecar; an empty table still has its header."""
    path = write_table_csv(str(temp_dir / "empty.csv"), ["r", "p"], [], metadata={"d": 1})
    assert read_json(sidecar_path(path)) == {"d": 1}
    header, values = read_table_csv(path)
    assert header == ["r", "p"]
    assert values.shape == (0, 2)


def test_write_report(temp_dir):
    """Objects with to_dict are written through it."""
    report = RatioReport("demo", {"d": 1}, 0.5, 2.0, [1, [0]], [1, [3]])
    path = write_report(str(temp_dir / "report.json"), report)
    assert RatioReport.from_dict(read_json(path)).to_dict() == report.to_dict()
    assert read_json(write_report(str(temp_dir / "plain.json"), {"x": 1})) == {"x": 1}
