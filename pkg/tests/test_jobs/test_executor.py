"""
Tests for the report runner.

Expensive criteria are replaced by stub handlers; the cheap ones run for real.
"""

import os

import pytest

from subwalk.bernstein import PhiSpec
from subwalk.config import merge_configs
from subwalk.exceptions import ConfigurationError
from subwalk.jobs import (
    CRITERIA,
    CriterionResult,
    ReportRunner,
    simulation_config,
    spec_from_config,
)
from subwalk.jobs.executor import CROSS_STEP_ERROR
from subwalk.output import MANIFEST_SUFFIX, read_json, read_manifest
from subwalk.subordination import SubordinationWeights


def _stub(name, passed=True, data=None):
    return lambda: CriterionResult(name, passed, f"{name} stub", data or {"value": 1})


def test_spec_from_config(full_config):
    """phi literals and mappings are both accepted."""
    assert spec_from_config(full_config) == PhiSpec.stable(0.5)
    full_config["phi"] = {"kind": "mix", "alpha": 0.3, "beta": 0.7}
    assert spec_from_config(full_config) == PhiSpec.stable_mixture(0.3, 0.7)


def test_simulation_config(full_config):
    """Flat keys and the montecarlo section feed the simulation parameters."""
    cfg = simulation_config(
        full_config, PhiSpec.identity(), SubordinationWeights.degenerate(), n_steps=5, d=2
    )
    assert (cfg.d, cfg.n_steps, cfg.trials) == (2, 5, 500)
    assert cfg.base_seed == 12345
    assert cfg.step_cap == 100000
    assert cfg.chunk_steps == 64
    assert cfg.confidence == 0.95
    assert cfg.batch_size == 4096


def test_unknown_criteria_are_rejected(full_config):
    """Criteria names are checked up front."""
    full_config["report"]["criteria"] = ["weights_oracle", "speed"]
    with pytest.raises(ConfigurationError, match="speed"):
        ReportRunner(full_config)

    runner = ReportRunner(merge_configs(full_config, {"report": {"criteria": []}}))
    with pytest.raises(ConfigurationError):
        runner.execute_criterion("speed")


def test_default_criteria(full_config):
    """The packaged defaults run every criterion in order."""
    del full_config["report"]["criteria"]
    assert ReportRunner(full_config).criteria == list(CRITERIA)


def test_gamma_tail_criterion(full_config):
    """The exponential-clock bound holds with a positive gap."""
    result = ReportRunner(full_config).execute_criterion("gamma_tail")
    assert result.passed
    assert len(result.data["rows"]) == 50
    assert result.data["min_gap"] > 0.0


@pytest.mark.slow
def test_kernel_cross_method_criterion(full_config):
    """The weight-built step, convolved in boxes, stays within the tracked spectral bound."""
    full_config["report"]["grid"] = 1 << 16
    result = ReportRunner(full_config).execute_criterion("kernel_cross_method")
    assert result.passed
    gaps, bounds = result.data["gaps"], result.data["bounds"]
    assert list(gaps) == ["1", "2", "4", "8", "16", "32"]
    assert all(gaps[n] <= bounds[n] for n in gaps)
    # The two one-step kernels differ only by the weight tail
    assert 0.0 < gaps["1"] < CROSS_STEP_ERROR
    assert max(result.data["residuals"].values()) <= 1e-10


@pytest.mark.slow
def test_harnack_criterion(full_config):
    """Harnack ratios are finite, translation-exact and trivial for constants."""
    result = ReportRunner(full_config).execute_criterion("harnack")
    assert result.passed
    assert [row["R"] for row in result.data["rows"]] == [32, 64, 128]
    assert all(row["constant_ratio"] == 1.0 for row in result.data["rows"])


def test_execute_all_skips_determinism_when_disabled(full_config):
    """report.check_determinism = false skips the rerun."""
    full_config["report"].update({"criteria": ["gamma_tail", "determinism"]})
    full_config["report"]["check_determinism"] = False
    runner = ReportRunner(full_config)
    assert runner.execute_all() == {"gamma_tail": True}
    assert runner.failed() == []


def test_determinism_compares_rerun_digests(full_config):
    """Every configured criterion is rerun; a changing rerun fails and is named."""
    full_config["report"]["criteria"] = ["weights_oracle", "gamma_tail", "exit_time", "determinism"]
    runner = ReportRunner(full_config)
    runner._handlers["weights_oracle"] = _stub("weights_oracle")
    runner._handlers["exit_time"] = _stub("exit_time")
    runner.execute_criterion("gamma_tail")
    result = runner.execute_criterion("determinism")
    assert result.passed
    assert result.data["criteria"] == ["weights_oracle", "gamma_tail", "exit_time"]
    first, second = result.data["digests"]
    assert first == second

    calls = iter(range(10))
    runner._handlers["exit_time"] = lambda: CriterionResult(
        "exit_time", True, "", {"draw": next(calls)}
    )
    result = runner.execute_criterion("determinism")
    assert not result.passed
    assert result.detail == "digests differ: exit_time"
    assert runner.failed() == ["determinism"]


def test_write_report(full_config, temp_dir):
    """report.json, summary.txt and the manifest are written; reruns are byte-identical."""
    full_config["report"]["criteria"] = ["weights_oracle", "gamma_tail", "harnack"]

    def run(output_dir):
        runner = ReportRunner(full_config)
        runner._handlers["weights_oracle"] = _stub("weights_oracle")
        runner._handlers["harnack"] = _stub("harnack", passed=False)
        runner.execute_all()
        return runner.write(str(output_dir))

    path = run(temp_dir / "first")
    report = read_json(path)
    assert report["passed"] == ["weights_oracle", "gamma_tail"]
    assert report["failed"] == ["harnack"]
    assert report["settings"]["seed"] == 12345

    with open(os.path.join(os.path.dirname(path), "summary.txt"), encoding="utf-8") as f:
        summary = f.read()
    assert "2 of 3 criteria passed" in summary
    assert "failed: harnack" in summary

    manifest = read_manifest(path + MANIFEST_SUFFIX)
    assert manifest.command == "report"
    assert len(manifest.outputs) == 2
    assert all(manifest.outputs.values())

    again = run(temp_dir / "second")
    with open(path, "rb") as a, open(again, "rb") as b:
        assert a.read() == b.read()
