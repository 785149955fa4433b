"""
Tests for the summary renderer.
"""

import pytest
from jinja2 import UndefinedError

from subwalk.output import SummaryRenderer


@pytest.fixture
def context():
    """Summary context with one passing and one failing criterion."""
    return {
        "version": "0.1.0",
        "phi": "stable:0.5",
        "d": 1,
        "seed": 12345,
        "criteria": [
            {"name": "weights_oracle", "passed": True, "detail": "max error 3.1e-13"},
            {"name": "harnack", "passed": False, "detail": "ratio 140 > 100"},
        ],
        "passed": 1,
        "failed": ["harnack"],
    }


def test_render_summary(context):
    """One row per criterion and a pass count."""
    text = SummaryRenderer().render_summary(context)
    lines = text.splitlines()
    assert lines[0] == "subwalk 0.1.0 report"
    assert lines[1] == "phi: stable:0.5  d: 1  seed: 12345"
    assert any(line.startswith("weights_oracle") and " PASS " in line for line in lines)
    assert any(line.startswith("harnack") and " FAIL " in line for line in lines)
    assert "1 of 2 criteria passed" in text
    assert lines[-1] == "failed: harnack"
    assert text.endswith("\n")


def test_all_passed_has_no_failure_line(context):
    """The failure line is omitted when nothing failed."""
    context["criteria"] = context["criteria"][:1]
    context["failed"] = []
    text = SummaryRenderer().render_summary(context)
    assert "failed:" not in text
    assert "1 of 1 criteria passed" in text


def test_missing_keys_are_errors(context):
    """Templates render strictly."""
    del context["seed"]
    with pytest.raises(UndefinedError):
        SummaryRenderer().render_summary(context)


def test_write_summary(temp_dir, context):
    """The rendered text is written as is."""
    renderer = SummaryRenderer()
    path = renderer.write_summary(str(temp_dir / "summary.txt"), context)
    with open(path, encoding="utf-8") as f:
        assert f.read() == renderer.render_summary(context)
