"""
Tests for the command-line interface.

This module contains tests for the CLI functionality.
"""

import os
from unittest.mock import patch

import pytest

from subwalk.cli import apply_overrides, fit_grid, main, parse_args
from subwalk.exceptions import NumericError
from subwalk.kernel import nstep_kernel_spectral
from subwalk.output import (
    MANIFEST_SUFFIX,
    read_json,
    read_kernel_csv,
    read_table_csv,
    sidecar_path,
)


def test_parse_args():
    """Test parsing command-line arguments."""
    args = parse_args(["kernel"])
    assert args.command == "kernel"
    assert args.config is None
    assert args.phi is None
    assert args.method == "spectral"
    assert args.step == "spectral"
    assert args.output == "kernel.csv"
    assert not args.debug
    assert not args.quiet

    args = parse_args(
        [
            "--config",
            "test_config.yaml",
            "--threads",
            "4",
            "--debug",
            "harnack",
            "--phi",
            "mix:0.3,0.7",
            "--R",
            "32",
            "--z",
            "1,-2",
            "-o",
            "h.json",
        ]
    )
    assert args.config == "test_config.yaml"
    assert args.threads == 4
    assert args.debug
    assert args.phi == "mix:0.3,0.7"
    assert args.R == 32.0
    assert args.z == [1, -2]
    assert args.output == "h.json"


def test_parse_args_rejects_bad_points():
    """Points are comma-separated integers."""
    with pytest.raises(SystemExit):
        parse_args(["hitting", "--x", "a,b", "--y", "0"])


def test_apply_overrides(sample_config, monkeypatch):
    """
    Test that flags replace configuration values.

    Args:
        sample_config: Sample configuration
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.delenv("SUBWALK_THREADS", raising=False)
    args = parse_args(["--threads", "3", "--debug", "kernel", "--d", "2", "--n", "4"])
    config = apply_overrides(sample_config, args)
    assert (config["d"], config["n"], config["threads"]) == (2, 4, 3)
    assert config["phi"] == "stable:0.5"
    assert config["logging"]["level"] == "DEBUG"
    assert config["logging"]["console"]["level"] == "DEBUG"


def test_thread_variable_beats_flag(sample_config, monkeypatch):
    """
    Test that SUBWALK_THREADS wins over --threads.

    Args:
        sample_config: Sample configuration
        monkeypatch: Pytest fixture for patching environment variables
    """
    monkeypatch.setenv("SUBWALK_THREADS", "2")
    config = apply_overrides(dict(sample_config), parse_args(["--threads", "8", "report"]))
    assert config["threads"] == 1


def test_fit_grid_doubles_until_exact(stable_half):
    """The grid doubles from the smallest admissible torus until the bound is met."""
    sizes = []

    def compute(N):
        sizes.append(N)
        return nstep_kernel_spectral(stable_half, 1, 2, N, 8, max_error=float("inf"))

    kernel = fit_grid(compute, 8, None, 1e-4, 1 << 16)
    assert kernel.error_bound <= 1e-4
    assert sizes[0] == 32
    assert all(b == 2 * a for a, b in zip(sizes, sizes[1:]))

    with pytest.raises(NumericError):
        fit_grid(compute, 8, 32, 1e-4, 1 << 16)
    with pytest.raises(NumericError):
        fit_grid(compute, 8, None, 1e-12, 64)


def test_kernel_command(config_file, temp_dir):
    """
    Test that the kernel command writes the table, its sidecar and a manifest.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "kernel.csv")
    code = main(["--config", config_file, "kernel", "--n", "2", "--radius", "8", "-o", output])
    assert code == 0
    kernel = read_kernel_csv(output)
    assert kernel.radius == 8
    assert kernel.error_bound <= 1e-6
    manifest = read_json(output + MANIFEST_SUFFIX)
    assert set(manifest["outputs"]) == {output, sidecar_path(output)}
    assert manifest["command"] == "kernel"


def test_convolution_command(config_file, temp_dir):
    """
    Test the convolution method against the spectral kernel.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    spectral, convolved = str(temp_dir / "s.csv"), str(temp_dir / "c.csv")
    base = ["--config", config_file, "kernel", "--n", "3", "--radius", "8", "--grid", "16384"]
    assert main(base + ["-o", spectral]) == 0
    assert main(base + ["--method", "convolution", "-o", convolved]) == 0
    a, b = read_kernel_csv(spectral), read_kernel_csv(convolved)
    assert abs(a.values - b.values).max() <= 1e-12


def test_inexact_kernel_exits_three(config_file, temp_dir):
    """
    Test that a grid too small for kernel.max_error exits with code 3.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "kernel.csv")
    args = ["--config", config_file, "kernel", "--radius", "8", "--grid", "32", "-o", output]
    assert main(args) == 3
    assert not os.path.exists(output)


def test_poissonized_kernel_needs_time(config_file, temp_dir):
    """
    Test that the poissonized method without --t exits with code 2.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "kernel.csv")
    assert main(["--config", config_file, "kernel", "--method", "poissonized", "-o", output]) == 2


def test_envelope_command(config_file, temp_dir):
    """
    Test the envelope table along the first axis.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "envelope.csv")
    assert main(["--config", config_file, "envelope", "--xmax", "16", "-o", output]) == 0
    header, values = read_table_csv(output)
    assert header == ["r", "j", "envelope"]
    assert values.shape == (17, 3)
    # stable(1/2), n = 8: diagonal 1/8 up to r = 8, then 8 / r^2
    assert values[0, 2] == pytest.approx(0.125)
    assert values[16, 2] == pytest.approx(8.0 / 256.0)
    meta = read_json(sidecar_path(output))
    assert meta["crossover_radius"] == pytest.approx(8.0)


def test_weights_series_command(config_file, temp_dir):
    """
    Test the series method for the weights command.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "weights.csv")
    args = ["--config", config_file, "weights", "--method", "series", "--series-terms", "20"]
    code = main(args + ["-o", output])
    assert code == 0
    header, values = read_table_csv(output)
    assert header == ["m", "a_m"]
    assert values.shape == (20, 2)
    assert values[0, 1] == pytest.approx(0.5, rel=1e-10)
    assert read_json(sidecar_path(output))["method"] == "series"


def test_simulate_endpoints(config_file, temp_dir):
    """
    Test endpoint sampling; reruns are identical.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    outputs = [str(temp_dir / "a.csv"), str(temp_dir / "b.csv")]
    for output in outputs:
        args = ["--config", config_file, "simulate", "--phi", "stable:0.9"]
        args += ["--n", "4", "--trials", "50", "--seed", "3", "-o", output]
        assert main(args) == 0
    header, values = read_table_csv(outputs[0])
    assert header == ["x1"]
    assert values.shape == (50, 1)
    with open(outputs[0], "rb") as a, open(outputs[1], "rb") as b:
        assert a.read() == b.read()


def test_simulate_path(config_file, temp_dir):
    """
    Test that --path writes one discrete path.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "path.csv")
    args = ["--config", config_file, "simulate", "--phi", "stable:0.9", "--d", "2"]
    assert main(args + ["--n", "10", "--path", "-o", output]) == 0
    header, values = read_table_csv(output)
    assert header == ["k", "x1", "x2"]
    assert values.shape == (11, 3)
    assert values[0].tolist() == [0.0, 0.0, 0.0]


def test_invalid_phi_exits_two(config_file, temp_dir):
    """
    Test that a malformed phi literal exits with code 2.

    Args:
        config_file: Path to a temporary config file
        temp_dir: Path to a temporary directory
    """
    output = str(temp_dir / "k.csv")
    assert main(["--config", config_file, "kernel", "--phi", "stable:1.5", "-o", output]) == 2
    assert main(["--config", config_file, "kernel", "--phi", "zeta:1", "-o", output]) == 2


def test_invalid_flag_value_exits_two(config_file):
    """
    Test that out-of-range flag values are validated like file values.

    Args:
        config_file: Path to a temporary config file
    """
    assert main(["--config", config_file, "probe-max", "--r", "8", "--gamma", "1.5"]) == 2


def test_usage_errors_exit_two():
    """Test that argparse usage errors map to exit code 2."""
    assert main(["kernel", "--method", "fourier"]) == 2
    assert main([]) == 2


def test_missing_config_file_exits_two():
    """Test that a missing configuration file exits with code 2."""
    assert main(["--config", "nonexistent_config.yaml", "report"]) == 2


@patch("subwalk.cli.load_and_validate_config")
@patch("subwalk.cli.ReportRunner")
@patch("subwalk.cli.setup_logging")
def test_report_with_failed_criteria(
    mock_setup_logging, mock_report_runner, mock_load_config, full_config
):
    """
    Test that failed criteria exit with code 1 after the report is written.

    Args:
        mock_setup_logging: Mock for the setup_logging function
        mock_report_runner: Mock for the ReportRunner class
        mock_load_config: Mock for the load_and_validate_config function
        full_config: Sample configuration on top of the packaged defaults
    """
    mock_load_config.return_value = full_config
    mock_runner_instance = mock_report_runner.return_value
    mock_runner_instance.execute_all.return_value = {"gamma_tail": True, "harnack": False}

    assert main(["report"]) == 1

    mock_report_runner.assert_called_once_with(full_config)
    mock_runner_instance.write.assert_called_once()
    mock_setup_logging.assert_called_once_with(full_config, "report")


@patch("subwalk.cli.load_and_validate_config")
@patch("subwalk.cli.ReportRunner")
@patch("subwalk.cli.setup_logging")
def test_report_success(mock_setup_logging, mock_report_runner, mock_load_config, full_config):
    """
    Test that a passing report exits with code 0 and honours --output-dir.

    Args:
        mock_setup_logging: Mock for the setup_logging function
        mock_report_runner: Mock for the ReportRunner class
        mock_load_config: Mock for the load_and_validate_config function
        full_config: Sample configuration on top of the packaged defaults
    """
    mock_load_config.return_value = full_config
    mock_report_runner.return_value.execute_all.return_value = {"gamma_tail": True}

    assert main(["report", "--output-dir", "out"]) == 0
    assert full_config["report"]["output_dir"] == "out"


@patch("subwalk.cli.load_and_validate_config")
@patch("subwalk.cli.ReportRunner")
@patch("subwalk.cli.setup_logging")
def test_unexpected_errors_exit_one(
    mock_setup_logging, mock_report_runner, mock_load_config, full_config
):
    """
    Test that unexpected exceptions are logged and exit with code 1.

    Args:
        mock_setup_logging: Mock for the setup_logging function
        mock_report_runner: Mock for the ReportRunner class
        mock_load_config: Mock for the load_and_validate_config function
        full_config: Sample configuration on top of the packaged defaults
    """
    mock_load_config.return_value = full_config
    mock_report_runner.side_effect = RuntimeError("boom")

    assert main(["report"]) == 1
