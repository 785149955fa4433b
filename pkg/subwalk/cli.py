"""
Command-line interface for subwalk.

This module maps the subcommands onto the library operations. Flags override
the configuration file; every output file is fingerprinted in a manifest
written next to it.
"""

import argparse
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .bernstein import PhiKind, PhiSpec, scaling_profile
from .config import load_and_validate_config, validate_config
from .estimates import (
    EstimateEnvelope,
    HarnackWindow,
    crossover_radius,
    diagonal,
    envelope,
    harnack_ratio,
    hitting_radius,
    j_profile,
    verify_two_sided,
)
from .exceptions import (
    ConfigurationError,
    CriterionFailure,
    DomainError,
    NumericError,
    SubwalkError,
)
from .jobs import ReportRunner, simulation_config, spec_from_config
from .kernel import (
    DEFAULT_MAX_ERROR,
    DEFAULT_MAX_GRID,
    LatticeKernel,
    ctrw_kernel,
    default_grid,
    nstep_kernel_convolve,
    nstep_kernel_spectral,
    subordinate_step_kernel,
)
from .montecarlo import (
    calibrate_gamma,
    default_sampler,
    estimate_exit_time,
    estimate_hitting,
    maximal_inequality_probe,
    sample_endpoints,
    simulate_ctrw,
    simulate_walk,
)
from .output import (
    RunManifest,
    sidecar_path,
    write_json,
    write_kernel_csv,
    write_table_csv,
    write_weights_csv,
)
from .subordination import SubordinationWeights, weights_quadrature, weights_series
from .subordination.weights import SERIES_TABLE_MAX_TERMS
from .utils import setup_logging

logger = logging.getLogger(__name__)

THREADS_ENV = "SUBWALK_THREADS"

# Flags whose values replace the flat configuration keys
CONFIG_FLAGS = (
    "phi",
    "d",
    "n",
    "t",
    "radius",
    "grid",
    "tol",
    "max_terms",
    "series_terms",
    "trials",
    "seed",
    "nmax",
    "xmax",
    "gamma",
    "x0",
    "z",
    "n0",
    "R",
)


def _point(text: str) -> List[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _add_phi(parser: argparse.ArgumentParser):
    parser.add_argument("--phi", help="Bernstein function, e.g. stable:0.5 or mix:0.3,0.7")


def _add_output(parser: argparse.ArgumentParser, default: str):
    parser.add_argument("-o", "--output", default=default, help=f"Output file (default: {default})")


def _add_simulation(parser: argparse.ArgumentParser):
    parser.add_argument("--trials", type=int, help="Number of independent trials")
    parser.add_argument("--seed", type=int, help="Base seed")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        argv: Arguments (default: sys.argv[1:])

    Returns:
        Parsed arguments
    """
    parser = argparse.ArgumentParser(
        prog="subwalk",
        description="subwalk - heat kernels and simulation of subordinate random walks on Z^d",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # Configuration
    parser.add_argument("-c", "--config", help="Path to configuration file")
    parser.add_argument("--threads", type=int, help=f"Worker threads ({THREADS_ENV} wins)")

    # Logging
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--quiet", action="store_true", help="Suppress console output")

    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    weights = commands.add_parser("weights", help="Subordination weights a_m")
    _add_phi(weights)
    weights.add_argument("--tol", type=float, help="Tail tolerance")
    weights.add_argument("--max-terms", dest="max_terms", type=int, help="Largest M")
    weights.add_argument("--method", choices=["quadrature", "series"], default="quadrature")
    weights.add_argument("--series-terms", dest="series_terms", type=int, help="Series length")
    _add_output(weights, "weights.csv")

    kernel = commands.add_parser("kernel", help="Transition kernel on a box")
    _add_phi(kernel)
    kernel.add_argument("--d", type=int, help="Dimension")
    kernel.add_argument("--n", type=int, help="Number of steps")
    kernel.add_argument("--t", type=float, help="Time of the Poissonized walk")
    kernel.add_argument("--radius", type=int, help="Box half-width")
    kernel.add_argument("--grid", type=int, help="Torus points per axis (default: fitted)")
    kernel.add_argument(
        "--method", choices=["spectral", "convolution", "poissonized"], default="spectral"
    )
    kernel.add_argument(
        "--step",
        choices=["spectral", "weights"],
        default="spectral",
        help="One-step kernel the convolution method starts from",
    )
    _add_output(kernel, "kernel.csv")

    env = commands.add_parser("envelope", help="Envelope min{diag(n), n j(|x|)} along an axis")
    _add_phi(env)
    env.add_argument("--d", type=int, help="Dimension")
    env.add_argument("--n", type=int, help="Number of steps")
    env.add_argument("--xmax", type=int, help="Largest |x|")
    _add_output(env, "envelope.csv")

    verify = commands.add_parser("verify", help="Two-sided kernel band over n <= nmax")
    _add_phi(verify)
    verify.add_argument("--d", type=int, help="Dimension")
    verify.add_argument("--nmax", type=int, help="Largest time")
    verify.add_argument("--xmax", type=int, help="Largest |x|_inf")
    verify.add_argument("--grid", type=int, help="Torus points per axis (default: fitted)")
    verify.add_argument("--method", choices=["spectral", "poissonized"], default="spectral")
    _add_output(verify, "verify.json")

    simulate = commands.add_parser("simulate", help="Sample walk endpoints or one path")
    _add_phi(simulate)
    simulate.add_argument("--d", type=int, help="Dimension")
    simulate.add_argument("--n", type=int, help="Number of steps")
    simulate.add_argument("--t", type=float, help="Simulate one Poissonized path up to t")
    simulate.add_argument("--path", action="store_true", help="Write one discrete path")
    _add_simulation(simulate)
    _add_output(simulate, "walk.csv")

    exit_time = commands.add_parser("exit-time", help="Mean exit time from B(0, r)")
    _add_phi(exit_time)
    exit_time.add_argument("--d", type=int, help="Dimension")
    exit_time.add_argument("--r", type=float, nargs="+", required=True, help="Radii")
    _add_simulation(exit_time)
    _add_output(exit_time, "exit_time.json")

    hitting = commands.add_parser("hitting", help="Probability of entering B(y, r_n) by time n")
    _add_phi(hitting)
    hitting.add_argument("--d", type=int, help="Dimension")
    hitting.add_argument("--x", type=_point, required=True, help="Start, e.g. 64,0")
    hitting.add_argument("--y", type=_point, required=True, help="Target center")
    hitting.add_argument("--n", type=int, help="Step horizon")
    _add_simulation(hitting)
    _add_output(hitting, "hitting.json")

    probe = commands.add_parser("probe-max", help="Maximal displacement probes")
    _add_phi(probe)
    probe.add_argument("--d", type=int, help="Dimension")
    probe.add_argument("--r", type=float, nargs="+", required=True, help="Radii")
    probe.add_argument("--gamma", type=float, help="Time-depth factor")
    probe.add_argument("--calibrate", action="store_true", help="Calibrate gamma on the radii")
    _add_simulation(probe)
    _add_output(probe, "probe_max.json")

    harnack = commands.add_parser("harnack", help="Empirical parabolic Harnack ratio")
    _add_phi(harnack)
    harnack.add_argument("--d", type=int, help="Dimension")
    harnack.add_argument("--R", type=float, help="Outer radius")
    harnack.add_argument("--gamma", type=float, help="Time-depth factor")
    harnack.add_argument("--z", type=_point, help="Cylinder center (default: origin)")
    harnack.add_argument("--x0", type=_point, help="Kernel pole (default: z)")
    harnack.add_argument("--n0", type=int, help="Kernel time (default: parabolicity horizon)")
    _add_output(harnack, "harnack.json")

    report = commands.add_parser("report", help="Run the acceptance criteria")
    report.add_argument("--output-dir", dest="output_dir", help="Report directory")

    return parser.parse_args(argv)


def apply_overrides(config: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    """
    Override configuration values with command-line flags.

    Args:
        config: Configuration
        args: Parsed arguments

    Returns:
        The updated configuration
    """
    for key in CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value

    if args.threads is not None and not os.environ.get(THREADS_ENV):
        config["threads"] = args.threads

    if args.config:
        config["config_dir"] = os.path.dirname(os.path.abspath(args.config))

    if args.debug:
        config.setdefault("logging", {})["level"] = "DEBUG"
        config["logging"].setdefault("console", {})["level"] = "DEBUG"

    if args.quiet:
        config.setdefault("logging", {}).setdefault("console", {})["enabled"] = False

    if getattr(args, "output_dir", None):
        config.setdefault("report", {})["output_dir"] = args.output_dir

    return config


def _write_manifest(command: str, config: Dict[str, Any], path: str, seeds: Sequence[int] = ()):
    manifest = RunManifest(command=command, config=config, seeds=list(seeds))
    manifest.add_output(path)
    if os.path.exists(sidecar_path(path)):
        manifest.add_output(sidecar_path(path))
    manifest.write(path)


def _max_error(config: Dict[str, Any]) -> float:
    return float(config.get("kernel", {}).get("max_error", DEFAULT_MAX_ERROR))


def _max_grid(config: Dict[str, Any], d: int) -> int:
    limits = config.get("kernel", {}).get("max_grid", {})
    return int(limits.get(d, limits.get(str(d), DEFAULT_MAX_GRID.get(d, 0))))


def _refuse_inexact(kernel: LatticeKernel, max_error: float) -> LatticeKernel:
    if kernel.error_bound > max_error:
        message = (
            f"kernel error bound {kernel.error_bound:.3e} exceeds "
            f"kernel.max_error = {max_error:.1e} on a grid of {kernel.grid} points per axis"
        )
        logger.error(message)
        raise NumericError(
            message, worst=kernel.error_bound, suggestion="larger grid or smaller radius"
        )
    return kernel


def fit_grid(
    compute: Callable[[int], LatticeKernel],
    radius: int,
    grid: Optional[int],
    max_error: float,
    max_grid: int,
) -> LatticeKernel:
    """
    Kernel on the smallest power-of-two torus whose error bound is within max_error.

    Args:
        compute: Maps a grid size to a kernel
        radius: Box half-width
        grid: Fixed grid, or None to search from the smallest admissible one
        max_error: Largest admissible error bound
        max_grid: Largest grid searched

    Raises:
        NumericError: If the bound stays above max_error
    """
    size = grid if grid is not None else default_grid(radius)
    while True:
        kernel = compute(size)
        if kernel.error_bound <= max_error:
            return kernel
        if grid is not None or 2 * size > max_grid:
            return _refuse_inexact(kernel, max_error)
        size *= 2


def _weights(config: Dict[str, Any], spec: PhiSpec) -> SubordinationWeights:
    # Tables have no Levy density; their weights come from the short series
    if spec.kind is PhiKind.USER_TABLE:
        return weights_series(spec, min(int(config["series_terms"]), SERIES_TABLE_MAX_TERMS))
    return weights_quadrature(spec, tol=float(config["tol"]), max_terms=int(config["max_terms"]))


def run_weights(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Compute and write the subordination weights."""
    spec = spec_from_config(config)
    if args.method == "series":
        w = weights_series(spec, int(config["series_terms"]))
    else:
        w = _weights(config, spec)
    write_weights_csv(args.output, w)
    _write_manifest("weights", config, args.output)
    return 0


def _kernel_radius(config: Dict[str, Any]) -> int:
    radius = int(config["radius"])
    if radius < 1:
        raise DomainError(f"radius must be at least 1, got {radius}")
    return radius


def run_kernel(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Compute and write one kernel."""
    spec = spec_from_config(config)
    d, radius = int(config["d"]), _kernel_radius(config)
    grid = config.get("grid")
    max_error, max_grid = _max_error(config), _max_grid(config, d)

    if args.method == "poissonized":
        if config.get("t") is None:
            raise DomainError("the poissonized method needs --t")
        t = float(config["t"])
        kernel = fit_grid(
            lambda N: ctrw_kernel(spec, d, t, N, radius, max_error=math.inf),
            radius,
            grid,
            max_error,
            max_grid,
        )
    elif args.method == "convolution":
        n = int(config["n"])
        if args.step == "weights":
            step = subordinate_step_kernel(
                d, _weights(config, spec), radius, grid, max_error, max_grid
            )
        else:
            step = fit_grid(
                lambda N: nstep_kernel_spectral(spec, d, 1, N, radius, max_error=math.inf),
                radius,
                grid,
                max_error,
                max_grid,
            )
        kernel = nstep_kernel_convolve(step, n, max_error)
    else:
        n = int(config["n"])
        kernel = fit_grid(
            lambda N: nstep_kernel_spectral(spec, d, n, N, radius, max_error=math.inf),
            radius,
            grid,
            max_error,
            max_grid,
        )

    write_kernel_csv(args.output, kernel.detached())
    _write_manifest("kernel", config, args.output)
    return 0


def run_envelope(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Write j(r) and the envelope along the first axis."""
    spec = spec_from_config(config)
    env = EstimateEnvelope(spec, int(config["d"]))
    n, xmax = int(config["n"]), int(config["xmax"])
    rows = []
    for r in range(0, xmax + 1):
        jump = float(j_profile(env, r)) if r > 0 else math.inf
        rows.append((r, jump, envelope(env, n, float(r))))
    metadata = {
        "phi": spec.literal,
        "d": env.d,
        "n": n,
        "diagonal": diagonal(env, n),
        "hitting_radius": hitting_radius(env, n),
        "crossover_radius": crossover_radius(env, n),
    }
    write_table_csv(args.output, ["r", "j", "envelope"], rows, metadata)
    _write_manifest("envelope", config, args.output)
    return 0


def run_verify(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Two-sided band over n = 1..nmax and |x|_inf <= xmax."""
    spec = spec_from_config(config)
    d, nmax, xmax = int(config["d"]), int(config["nmax"]), int(config["xmax"])
    if nmax < 1 or xmax < 1:
        raise DomainError(f"nmax and xmax must be at least 1, got {nmax}, {xmax}")
    max_error = _max_error(config)
    if args.method == "poissonized":

        def compute(N: int, n: float) -> LatticeKernel:
            return ctrw_kernel(spec, d, n, N, xmax, max_error=math.inf)

    else:

        def compute(N: int, n: float) -> LatticeKernel:
            return nstep_kernel_spectral(spec, d, int(n), N, xmax, max_error=math.inf)

    widest = fit_grid(
        lambda N: compute(N, nmax), xmax, config.get("grid"), max_error, _max_grid(config, d)
    )
    kernels = [widest.detached()]
    for n in range(1, nmax):
        kernels.append(_refuse_inexact(compute(widest.grid, n), max_error).detached())

    report = verify_two_sided(kernels, EstimateEnvelope(spec, d), xmax)
    report.check()
    write_json(args.output, report.to_dict())
    _write_manifest("verify", config, args.output)
    return 0


def run_simulate(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Sample endpoints S_n, or one discrete or Poissonized path."""
    spec = spec_from_config(config)
    d, n = int(config["d"]), int(config["n"])
    t = args.t
    cfg = simulation_config(config, spec, _weights(config, spec), n_steps=n, t=t)
    sampler = default_sampler(cfg)
    axes = [f"x{i + 1}" for i in range(d)]
    metadata = cfg.echo()

    if t is not None:
        path = simulate_ctrw(cfg, sampler)
        rows: List[Tuple[Any, ...]] = [
            (float(time), *position) for time, position in zip(path.times, path.positions)
        ]
        write_table_csv(args.output, ["time"] + axes, rows, metadata)
    elif args.path:
        positions = simulate_walk(cfg, sampler)
        rows = [(k, *position) for k, position in enumerate(positions)]
        write_table_csv(args.output, ["k"] + axes, rows, metadata)
    else:
        endpoints = sample_endpoints(cfg, sampler, n, cfg.trials)
        write_table_csv(args.output, axes, endpoints.tolist(), metadata)

    _write_manifest("simulate", config, args.output, [cfg.base_seed])
    return 0


def run_exit_time(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Mean exit times for the given radii."""
    spec = spec_from_config(config)
    cfg = simulation_config(config, spec, _weights(config, spec))
    sampler = default_sampler(cfg)
    reports = [estimate_exit_time(cfg, r, sampler).to_dict() for r in args.r]
    write_json(args.output, {"reports": reports})
    _write_manifest("exit-time", config, args.output, [cfg.base_seed])
    return 0


def run_hitting(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Hitting probability of B(y, r_n) within n steps."""
    spec = spec_from_config(config)
    n = int(config["n"])
    cfg = simulation_config(config, spec, _weights(config, spec), n_steps=n)
    report = estimate_hitting(cfg, args.x, args.y, n)
    write_json(args.output, report.to_dict())
    _write_manifest("hitting", config, args.output, [cfg.base_seed])
    return 0


def run_probe_max(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Maximal displacement probes, or gamma calibration."""
    spec = spec_from_config(config)
    cfg = simulation_config(config, spec, _weights(config, spec))
    sampler = default_sampler(cfg)
    if args.calibrate:
        data: Dict[str, Any] = calibrate_gamma(cfg, args.r, sampler).to_dict()
    else:
        gamma = float(config["gamma"])
        probes = [maximal_inequality_probe(cfg, r, gamma, sampler) for r in args.r]
        data = {"probes": [probe.to_dict() for probe in probes]}
    write_json(args.output, data)
    _write_manifest("probe-max", config, args.output, [cfg.base_seed])
    return 0


def run_harnack(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """Empirical Harnack ratio for one window."""
    spec = spec_from_config(config)
    d = int(config["d"])
    z = config.get("z") or [0] * d
    x0 = config.get("x0") or z
    n0 = config.get("n0")
    window = HarnackWindow.from_profile(
        scaling_profile(spec), float(config["gamma"]), float(config["R"]), z
    )
    report = harnack_ratio(spec, d, None if n0 is None else int(n0), x0, window)
    write_json(args.output, report.to_dict())
    _write_manifest("harnack", config, args.output)
    return 0


def run_report(config: Dict[str, Any], args: argparse.Namespace) -> int:
    """
    Run the acceptance criteria and write the report.

    Raises:
        CriterionFailure: If any criterion fails
    """
    runner = ReportRunner(config)
    results = runner.execute_all()
    runner.write()
    failed = [name for name, passed in results.items() if not passed]
    if failed:
        raise CriterionFailure(failed)
    logger.info("All criteria passed")
    return 0


COMMANDS: Dict[str, Callable[[Dict[str, Any], argparse.Namespace], int]] = {
    "weights": run_weights,
    "kernel": run_kernel,
    "envelope": run_envelope,
    "verify": run_verify,
    "simulate": run_simulate,
    "exit-time": run_exit_time,
    "hitting": run_hitting,
    "probe-max": run_probe_max,
    "harnack": run_harnack,
    "report": run_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line.

    Returns:
        Exit code: 0 on success, 1 on failed criteria, 2 on invalid input, 3 on numeric failure
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = load_and_validate_config(args.config)
        config = apply_overrides(config, args)
        if not validate_config(config):
            raise ConfigurationError("Invalid command-line values")
        setup_logging(config, args.command)
        logger.debug(f"Running {args.command} with threads={config.get('threads')}")
        return COMMANDS[args.command](config, args)

    except SubwalkError as e:
        logger.error(f"Error: {e}")
        return e.exit_code

    except FileNotFoundError as e:
        logger.error(f"Error: {e}")
        return 2

    except Exception as e:
        logger.error(f"Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
