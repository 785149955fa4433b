"""
Acceptance report runner for subwalk.

This module runs the criteria listed in the ``report`` section of the
configuration and writes the aggregated JSON, the summary table and a run
manifest. The aggregated JSON carries no timestamps, so reruns with the
same configuration produce identical bytes.
"""

import logging
import math
import os
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..bernstein import PhiSpec, parse_phi, scaling_profile
from ..estimates import (
    EstimateEnvelope,
    HarnackWindow,
    RatioReport,
    diagonal_band,
    harnack_ratio,
    one_step_comparability,
    pruitt_report,
    tail_sum_check,
    verify_two_sided,
)
from ..exceptions import ConfigurationError, NumericError
from ..kernel import (
    DEFAULT_MAX_ERROR,
    LatticeKernel,
    compose,
    nstep_kernel_convolve,
    nstep_kernel_spectral,
    ondiagonal_family,
    subordinate_step_kernel,
)
from ..montecarlo import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_CHUNK_STEPS,
    DEFAULT_STEP_CAP,
    SimulationConfig,
    calibrate_gamma,
    default_sampler,
    estimate_exit_time,
    estimate_hitting,
    gamma_tail_check,
)
from ..output import RunManifest, SummaryRenderer, dumps_json, write_json
from ..subordination import (
    SubordinationWeights,
    closed_form_weights,
    stable_weights_exact,
    weights_quadrature,
    weights_series,
)
from ..utils import ProgressLogger, hash_bytes, package_versions
from .models import CriterionResult

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.txt"

STABLE_ALPHAS = (0.3, 0.5, 0.7)
ORACLE_TERMS = 50
ORACLE_TOLERANCE = 1e-8
MASS_TOLERANCE = 1e-10

CROSS_TIMES = (1, 2, 4, 8, 16, 32)
CROSS_RADIUS = 128
CROSS_TOLERANCE = 1e-10
CROSS_STEP_TERMS = 16384
CROSS_STEP_RADIUS = 512
CROSS_STEP_GRID = 8192
# Weight tail beyond CROSS_STEP_TERMS leaves about 3e-5 pointwise
CROSS_STEP_ERROR = 1e-4
CHAPMAN_KOLMOGOROV_SPLITS = ((1, 1), (2, 6), (8, 24))

ONE_STEP_RMAX = 100
ONE_STEP_GRID = {1: None, 2: 4096}
DIAGONAL_TIMES = tuple(2**k for k in range(2, 11))
BAND_WIDTH = 10.0

SANDWICH_NMAX = 128
SANDWICH_XMAX = 128
SANDWICH_WIDTH = 100.0
SANDWICH_STABILITY = 2.0

PRUITT_XMAX = 128
PRUITT_MEDIAN_FACTOR = 10.0

TAIL_RMAX = 64
TAIL_STABILITY = 1.5

EXIT_RADII = (8, 16, 32)
EXIT_WIDTH = 5.0
EXIT_CENSORING = 1e-3

HITTING_DISTANCES = (32, 64, 128)
HITTING_TIMES = (8, 16, 32)

PROBE_RADII = (8, 16, 32, 64)
PROBE_LEVEL = 0.25

HARNACK_RADII = (32, 64, 128)
HARNACK_SHIFT = 7

GAMMA_TAIL_N = (1, 2, 3, 4, 5)
GAMMA_TAIL_T = tuple(k / 10 for k in range(1, 11))


CRITERIA = (
    "weights_oracle",
    "kernel_cross_method",
    "one_step",
    "on_diagonal",
    "two_sided",
    "pruitt",
    "tail_sum",
    "exit_time",
    "hitting",
    "maximal_inequality",
    "harnack",
    "gamma_tail",
    "determinism",
)


def spec_from_config(config: Dict[str, Any]) -> PhiSpec:
    """The Bernstein function named by the ``phi`` key."""
    return parse_phi(config["phi"], config.get("config_dir"))


def simulation_config(
    config: Dict[str, Any],
    spec: PhiSpec,
    weights: SubordinationWeights,
    n_steps: int = 0,
    d: Optional[int] = None,
    trials: Optional[int] = None,
    t: Optional[float] = None,
) -> SimulationConfig:
    """
    Simulation parameters from the flat keys and the ``montecarlo`` section.

    Args:
        config: Configuration
        spec: Bernstein function
        weights: Weights the increments are drawn from
        n_steps: Steps per path
        d: Dimension (default: config ``d``)
        trials: Trial count (default: config ``trials``)
        t: Poissonized time horizon

    Returns:
        Simulation configuration
    """
    montecarlo = config.get("montecarlo", {})
    return SimulationConfig(
        d=int(config["d"] if d is None else d),
        n_steps=n_steps,
        trials=int(config["trials"] if trials is None else trials),
        base_seed=int(config["seed"]),
        spec=spec,
        weights=weights,
        t=t,
        chunk_steps=int(montecarlo.get("chunk_steps", DEFAULT_CHUNK_STEPS)),
        step_cap=int(montecarlo.get("step_cap", DEFAULT_STEP_CAP)),
        confidence=float(montecarlo.get("confidence", 0.95)),
        threads=int(config.get("threads", 1)),
        batch_size=int(montecarlo.get("batch_size", DEFAULT_BATCH_SIZE)),
    )


def _band(report: RatioReport) -> str:
    return f"[{report.ratio_inf:.4g}, {report.ratio_sup:.4g}]"


class ReportRunner:
    """Runner for the acceptance criteria."""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize report runner.

        Args:
            config: Configuration
        """
        self.config = config
        report_config = config.get("report", {})
        self.trials = int(report_config.get("trials", config.get("trials", 100_000)))
        self.grid = int(report_config.get("grid", 1 << 20))
        self.max_error = float(config.get("kernel", {}).get("max_error", DEFAULT_MAX_ERROR))
        self.check_determinism = bool(report_config.get("check_determinism", True))
        self.criteria: List[str] = list(report_config.get("criteria", CRITERIA))
        unknown = [name for name in self.criteria if name not in CRITERIA]
        if unknown:
            raise ConfigurationError(f"Unknown report criteria: {', '.join(unknown)}")

        self.results: Dict[str, CriterionResult] = {}
        self._weights: Dict[str, SubordinationWeights] = {}
        self._handlers: Dict[str, Callable[[], CriterionResult]] = {
            "weights_oracle": self._weights_oracle,
            "kernel_cross_method": self._kernel_cross_method,
            "one_step": self._one_step,
            "on_diagonal": self._on_diagonal,
            "two_sided": self._two_sided,
            "pruitt": self._pruitt,
            "tail_sum": self._tail_sum,
            "exit_time": self._exit_time,
            "hitting": self._hitting,
            "maximal_inequality": self._maximal_inequality,
            "harnack": self._harnack,
            "gamma_tail": self._gamma_tail,
            "determinism": self._determinism,
        }

    def execute_criterion(self, name: str) -> CriterionResult:
        """
        Run one criterion.

        Args:
            name: Criterion name

        Returns:
            Criterion result

        Raises:
            ConfigurationError: If the criterion is unknown
            SubwalkError: If a computation inside the criterion fails
        """
        handler = self._handlers.get(name)
        if handler is None:
            raise ConfigurationError(f"Unknown report criterion: {name}")
        logger.info(f"Running criterion: {name}")
        result = handler()
        self.results[name] = result
        if result.passed:
            logger.info(f"Criterion {name} passed: {result.detail}")
        else:
            logger.error(f"Criterion {name} failed: {result.detail}")
        return result

    def execute_all(self) -> Dict[str, bool]:
        """
        Run every configured criterion in order.

        Returns:
            Dictionary of criterion names and results
        """
        outcomes = {}
        progress = ProgressLogger(logger, len(self.criteria), "Report criteria", unit="criteria")
        for name in self.criteria:
            if name == "determinism" and not self.check_determinism:
                logger.info("Skipping determinism check (report.check_determinism is false)")
                progress.update()
                continue
            outcomes[name] = self.execute_criterion(name).passed
            progress.update()
        return outcomes

    def aggregate(self, results: Optional[Dict[str, CriterionResult]] = None) -> Dict[str, Any]:
        """The aggregated report of results (default: this run); contains no wall times."""
        results = self.results if results is None else results
        rows = [results[name].to_dict() for name in self.criteria if name in results]
        return {
            "criteria": rows,
            "passed": [row["name"] for row in rows if row["passed"]],
            "failed": [row["name"] for row in rows if not row["passed"]],
            "settings": {
                "seed": int(self.config["seed"]),
                "trials": self.trials,
                "grid": self.grid,
                "max_error": self.max_error,
            },
            "versions": package_versions(),
        }

    def write(self, output_dir: Optional[str] = None, command: str = "report") -> str:
        """
        Write report.json, summary.txt and the manifest.

        Args:
            output_dir: Output directory (default: report.output_dir)
            command: Command name recorded in the manifest

        Returns:
            Path of report.json
        """
        if output_dir is None:
            output_dir = self.config.get("report", {}).get("output_dir", "report")
        os.makedirs(output_dir, exist_ok=True)

        aggregate = self.aggregate()
        report_path = write_json(os.path.join(output_dir, REPORT_FILE), aggregate)
        context = {
            "version": aggregate["versions"]["subwalk"],
            "phi": str(self.config.get("phi")),
            "d": self.config.get("d"),
            "seed": self.config.get("seed"),
            "criteria": aggregate["criteria"],
            "passed": len(aggregate["passed"]),
            "failed": aggregate["failed"],
        }
        summary_path = SummaryRenderer().write_summary(
            os.path.join(output_dir, SUMMARY_FILE), context
        )

        manifest = RunManifest(command=command, config=self.config, seeds=[self.config["seed"]])
        manifest.add_output(report_path)
        manifest.add_output(summary_path)
        manifest.write(report_path)
        logger.info(f"Wrote report to {output_dir}")
        return report_path

    def failed(self) -> List[str]:
        """Names of the criteria that did not pass."""
        return [name for name, result in self.results.items() if not result.passed]

    # Shared inputs

    def _weights_for(self, spec: PhiSpec) -> SubordinationWeights:
        key = spec.literal
        if key not in self._weights:
            self._weights[key] = weights_quadrature(
                spec, tol=float(self.config["tol"]), max_terms=int(self.config["max_terms"])
            )
        return self._weights[key]

    def _simulation(self, spec: PhiSpec, n_steps: int = 0) -> SimulationConfig:
        return simulation_config(
            self.config, spec, self._weights_for(spec), n_steps=n_steps, d=1, trials=self.trials
        )

    def _kernel(self, spec: PhiSpec, n: int, radius: int, d: int = 1) -> LatticeKernel:
        grid = self.grid if d == 1 else ONE_STEP_GRID.get(d)
        return nstep_kernel_spectral(
            spec, d, n, grid_points_per_axis=grid, radius=radius, max_error=self.max_error
        )

    def _require_exact(self, kernels: Sequence[LatticeKernel], what: str):
        worst = max(kernels, key=lambda k: k.error_bound)
        if worst.error_bound > self.max_error:
            message = (
                f"{what}: kernel n={worst.time} has error bound {worst.error_bound:.3e} "
                f"above the defect threshold kernel.max_error = {self.max_error:.1e}"
            )
            logger.error(message)
            raise NumericError(
                message, worst=worst.error_bound, suggestion="larger report.grid"
            )

    def _family(self, spec: PhiSpec, times: Sequence[int], radius: int) -> List[LatticeKernel]:
        kernels = []
        for n in times:
            kernels.append(self._kernel(spec, n, radius).detached())
        self._require_exact(kernels, f"{spec.literal} family")
        return kernels

    # Criteria

    def _weights_oracle(self) -> CriterionResult:
        rows = []
        for alpha in STABLE_ALPHAS:
            spec = PhiSpec.stable(alpha)
            quadrature = weights_quadrature(
                spec, tol=float(self.config["tol"]), max_terms=int(self.config["max_terms"])
            )
            series = weights_series(spec, ORACLE_TERMS).weights
            exact = stable_weights_exact(alpha, ORACLE_TERMS)
            head = quadrature.weights[:ORACLE_TERMS]
            rows.append(
                {
                    "phi": spec.literal,
                    "quadrature_vs_series": float(np.max(np.abs(head - series))),
                    "quadrature_vs_exact": float(np.max(np.abs(head - exact))),
                    "series_vs_exact": float(np.max(np.abs(series - exact))),
                    "mass_error": abs(quadrature.total - 1.0),
                    "M": quadrature.M,
                    "tail_mass": quadrature.tail_mass,
                }
            )
        worst = max(
            max(r["quadrature_vs_series"], r["quadrature_vs_exact"], r["series_vs_exact"])
            for r in rows
        )
        mass = max(r["mass_error"] for r in rows)
        passed = worst <= ORACLE_TOLERANCE and mass <= MASS_TOLERANCE
        detail = f"max entry gap {worst:.2e}, mass error {mass:.2e}"
        return CriterionResult("weights_oracle", passed, detail, {"rows": rows})

    def _kernel_cross_method(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        # Step from the weights, then powers by linear convolution of boxes
        step = subordinate_step_kernel(
            1,
            closed_form_weights(spec, CROSS_STEP_TERMS),
            CROSS_STEP_RADIUS,
            grid=CROSS_STEP_GRID,
            max_error=CROSS_STEP_ERROR,
            max_grid=CROSS_STEP_GRID,
        ).detached()
        spectral = {n: self._kernel(spec, n, CROSS_RADIUS) for n in CROSS_TIMES}
        gaps, bounds = {}, {}
        for n in CROSS_TIMES:
            convolved = nstep_kernel_convolve(step, n, max_error=math.inf).restrict(CROSS_RADIUS)
            gaps[str(n)] = float(np.max(np.abs(convolved.values - spectral[n].values)))
            bounds[str(n)] = convolved.error_bound + spectral[n].error_bound + CROSS_TOLERANCE

        residuals = {}
        for a, b in CHAPMAN_KOLMOGOROV_SPLITS:
            left = compose(
                self._kernel(spec, a, CROSS_RADIUS), self._kernel(spec, b, CROSS_RADIUS)
            )
            right = spectral.get(a + b) or self._kernel(spec, a + b, CROSS_RADIUS)
            residuals[f"{a}+{b}"] = float(np.max(np.abs(left.values - right.values)))

        exceeded = [n for n in gaps if gaps[n] > bounds[n]]
        worst = max(gaps, key=lambda n: gaps[n] / bounds[n])
        worst_residual = max(residuals.values())
        passed = not exceeded and worst_residual <= CROSS_TOLERANCE
        detail = (
            f"convolution vs spectral {gaps[worst]:.2e} within bound {bounds[worst]:.2e} "
            f"at n={worst}, Chapman-Kolmogorov {worst_residual:.2e}"
        )
        if exceeded:
            detail += f"; bound exceeded at n={', '.join(exceeded)}"
        data = {
            "phi": spec.literal,
            "radius": CROSS_RADIUS,
            "step_terms": CROSS_STEP_TERMS,
            "step_radius": CROSS_STEP_RADIUS,
            "gaps": gaps,
            "bounds": bounds,
            "residuals": residuals,
        }
        return CriterionResult("kernel_cross_method", passed, detail, data)

    def _one_step(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        reports = []
        for d in (1, 2):
            step = self._kernel(spec, 1, ONE_STEP_RMAX, d=d)
            self._require_exact([step], f"one-step kernel d={d}")
            reports.append(one_step_comparability(step, EstimateEnvelope(spec, d), ONE_STEP_RMAX))
        passed = all(r.spread <= BAND_WIDTH for r in reports)
        detail = ", ".join(f"d={r.grid['d']} band {_band(r)}" for r in reports)
        data = {"reports": [r.to_dict() for r in reports]}
        return CriterionResult("one_step", passed, detail, data)

    def _on_diagonal(self) -> CriterionResult:
        reports = []
        for spec in (PhiSpec.stable(0.5), PhiSpec.stable_mixture(0.3, 0.7)):
            for d in (1, 2):
                values = ondiagonal_family(spec, d, DIAGONAL_TIMES)
                reports.append(diagonal_band(EstimateEnvelope(spec, d), values))
        passed = all(r.spread <= BAND_WIDTH for r in reports)
        worst = max(reports, key=lambda r: r.spread)
        detail = f"widest band {_band(worst)} ({worst.grid['phi']}, d={worst.grid['d']})"
        return CriterionResult(
            "on_diagonal", passed, detail, {"reports": [r.to_dict() for r in reports]}
        )

    def _two_sided(self) -> CriterionResult:
        times = range(1, SANDWICH_NMAX + 1)
        rows = []
        passed = True
        for spec in (PhiSpec.stable(0.5), PhiSpec.stable_mixture(0.3, 0.7)):
            env = EstimateEnvelope(spec, 1)
            base = verify_two_sided(self._family(spec, times, SANDWICH_XMAX), env)
            wide_radius = 2 * SANDWICH_XMAX
            doubled = verify_two_sided(
                self._family(spec, times, wide_radius), env, name="two_sided_doubled"
            )
            stable = (
                doubled.ratio_inf * SANDWICH_STABILITY >= base.ratio_inf
                and doubled.ratio_sup <= SANDWICH_STABILITY * base.ratio_sup
            )
            ok = 0.0 < base.ratio_inf and base.spread <= SANDWICH_WIDTH and stable
            passed = passed and ok
            rows.append(
                {"base": base.to_dict(), "doubled": doubled.to_dict(), "stable": stable}
            )
        detail = "; ".join(
            f"{row['base']['grid']['phi']} band "
            f"[{row['base']['ratio_inf']:.4g}, {row['base']['ratio_sup']:.4g}]"
            for row in rows
        )
        return CriterionResult("two_sided", passed, detail, {"rows": rows})

    def _pruitt(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        step = self._kernel(spec, 1, 2 * PRUITT_XMAX)
        self._require_exact([step], "Pruitt step kernel")
        report = pruitt_report(EstimateEnvelope(spec, 1), step, range(1, PRUITT_XMAX + 1))
        median = float(np.median(report.extra["ratios"]))
        bound = PRUITT_MEDIAN_FACTOR * median
        passed = math.isfinite(report.ratio_sup) and report.ratio_sup <= bound
        detail = f"sup {report.ratio_sup:.4g}, median {median:.4g}"
        data = {"report": report.to_dict(), "median": median}
        return CriterionResult("pruitt", passed, detail, data)

    def _tail_sum(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        env = EstimateEnvelope(spec, 1)
        r_grid = range(1, TAIL_RMAX + 1)
        base = tail_sum_check(env, self._kernel(spec, 1, TAIL_RMAX), r_grid)
        doubled = tail_sum_check(env, self._kernel(spec, 1, 2 * TAIL_RMAX), r_grid)
        change = max(base.ratio_sup / doubled.ratio_sup, doubled.ratio_sup / base.ratio_sup)
        passed = math.isfinite(base.ratio_sup) and change <= TAIL_STABILITY
        detail = f"sup {base.ratio_sup:.4g}, change under box doubling {change:.4f}"
        data = {"base": base.to_dict(), "doubled": doubled.to_dict(), "change": change}
        return CriterionResult("tail_sum", passed, detail, data)

    def _exit_time(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        cfg = self._simulation(spec)
        sampler = default_sampler(cfg)
        reports = [estimate_exit_time(cfg, r, sampler) for r in EXIT_RADII]
        ratios = [report.ratio for report in reports]
        width = max(ratios) / min(ratios)
        censored = max(report.censored / report.trials for report in reports)
        passed = width <= EXIT_WIDTH and censored < EXIT_CENSORING
        detail = (
            f"E[tau] phi(r^-2) in [{min(ratios):.4g}, {max(ratios):.4g}], "
            f"censored {censored:.1e}"
        )
        return CriterionResult(
            "exit_time", passed, detail, {"reports": [r.to_dict() for r in reports]}
        )

    def _hitting(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        sampler = default_sampler(self._simulation(spec))
        reports = []
        for n in HITTING_TIMES:
            cfg = self._simulation(spec, n_steps=n)
            for distance in HITTING_DISTANCES:
                reports.append(estimate_hitting(cfg, (distance,), (0,), n, sampler))
        constant = max(report.ratio for report in reports)
        passed = math.isfinite(constant)
        detail = f"fitted constant C = {constant:.4g}"
        data = {"constant": constant, "reports": [r.to_dict() for r in reports]}
        return CriterionResult("hitting", passed, detail, data)

    def _maximal_inequality(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        cfg = self._simulation(spec)
        calibration = calibrate_gamma(cfg, PROBE_RADII)
        margins = []
        for probe in calibration.probes:
            p = probe.estimate.p
            stderr = math.sqrt(p * (1.0 - p) / probe.estimate.trials)
            margins.append(PROBE_LEVEL + 3.0 * stderr - p)
        passed = min(margins) >= 0.0
        detail = f"calibrated gamma {calibration.gamma}, smallest margin {min(margins):.3g}"
        data = {"calibration": calibration.to_dict(), "margins": margins}
        return CriterionResult("maximal_inequality", passed, detail, data)

    def _harnack(self) -> CriterionResult:
        spec = PhiSpec.stable(0.5)
        profile = scaling_profile(spec)
        gamma = float(self.config["gamma"])
        rows = []
        for R in HARNACK_RADII:
            window = HarnackWindow.from_profile(profile, gamma, R, (0,))
            report = harnack_ratio(spec, 1, None, (0,), window)
            shifted_window = HarnackWindow.from_profile(profile, gamma, R, (HARNACK_SHIFT,))
            shifted = harnack_ratio(spec, 1, None, (HARNACK_SHIFT,), shifted_window)
            constant = harnack_ratio(
                spec, 1, None, (0,), window, q=lambda k, points: np.ones(points.shape[0])
            )
            rows.append(
                {
                    "R": R,
                    "report": report.to_dict(),
                    "translation_exact": report.ratio_sup == shifted.ratio_sup,
                    "constant_ratio": constant.ratio_sup,
                }
            )
        passed = all(
            math.isfinite(row["report"]["ratio_sup"])
            and not row["report"]["degenerate"]
            and row["translation_exact"]
            and row["constant_ratio"] == 1.0
            for row in rows
        )
        detail = ", ".join(f"R={row['R']}: {row['report']['ratio_sup']:.4g}" for row in rows)
        return CriterionResult("harnack", passed, detail, {"rows": rows})

    def _gamma_tail(self) -> CriterionResult:
        report = gamma_tail_check(GAMMA_TAIL_N, GAMMA_TAIL_T)
        passed = report.min_gap > 0.0
        detail = f"smallest gap t - P(T_n <= t) = {report.min_gap:.4g}"
        return CriterionResult("gamma_tail", passed, detail, report.to_dict())

    def _determinism(self) -> CriterionResult:
        names = [name for name in self.criteria if name != "determinism"]
        first = {name: self.results.get(name) or self._handlers[name]() for name in names}
        second = {name: self._handlers[name]() for name in names}
        digests = [
            hash_bytes(dumps_json(self.aggregate(results)).encode("utf-8"))
            for results in (first, second)
        ]
        mismatched = [
            name
            for name in names
            if dumps_json(first[name].to_dict()) != dumps_json(second[name].to_dict())
        ]
        passed = digests[0] == digests[1]
        detail = (
            f"aggregated report digests match over {len(names)} criteria"
            if passed
            else f"digests differ: {', '.join(mismatched)}"
        )
        data = {"criteria": names, "digests": digests}
        return CriterionResult("determinism", passed, detail, data)
