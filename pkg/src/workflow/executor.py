"""
实验执行器 - 把实验配置变成流场、求解器与分析的调用并写出结果
Experiment executor - turns an experiment config into runs and artifacts
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import psutil
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from config.environment import get_fit_window, get_grid_defaults
from ..analysis.fits import harmonic_fit, wake_fit
from ..analysis.phase_map import PhaseMapRow, phase_frame, phase_map, write_phasemap
from ..analysis.plots import plot_phase_panels, plot_profile
from ..analysis.profiles import log_radii, ray_profile
from ..fields.analytic import AnalyticField, parse_assignments
from ..fields.forcing import ForceField, parse_force_spec
from ..fields.types import FieldError, FieldKind, ParameterError
from ..invariants.contour import extrapolated_force, invariants_at_radii
from ..invariants.moments import force_integral, moment_coeffs, moment_envelope, torque_integral
from ..residual.decay import ray_residual
from ..residual.operators import OperatorKind
from ..solver.boundary import BoundaryConditionSpec
from ..solver.continuation import ContinuationPlan, SweepPoint, continuation_sweep, sweep_disagreement
from ..solver.forcing import delta_forcing
from ..solver.grid import AnnularGrid, GridError
from ..solver.newton import NewtonOptions, SolverDivergenceError, newton_solve
from ..solver.solution import GridSolution
from ..solver.system import NavierStokesSystem
from ..utils.artifacts import write_csv, write_json
from ..utils.config import Config
from ..utils.experiment import ConfigError, ExperimentConfig
from ..utils.logger import get_logger
from ..verification.report import SuiteReport
from ..verification.suites import run_suite
from ..wake.residual_orders import DEFAULT_WINDOW, wake_basis, wake_residual_orders
from ..wake.wake_field import WakeParameters, double_wake, wake_field

logger = get_logger(__name__)

EVAL_GRID_RADII = (2.0, 1.0e3, 8)
EVAL_GRID_ANGLES = 16
FORCING_R_INNER = 0.05


@dataclass
class ExperimentOutcome:
    """一次实验的产物与摘要 / artifacts and summary of one experiment"""
    experiment: str
    outputs: Dict[str, str] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: List[pd.DataFrame] = field(default_factory=list)
    report: Optional[SuiteReport] = None


# ---- 配置到对象 Config to objects ---------------------------------------------------------

def parse_points(spec: str) -> np.ndarray:
    """
    grid | ray:θ:rmin:rmax:n | x1,x2;x1,x2;...
    """
    spec = spec.strip()
    try:
        if spec == "grid":
            lo, hi, n = EVAL_GRID_RADII
            radii = np.geomspace(lo, hi, n)
            theta = 2.0 * np.pi * np.arange(EVAL_GRID_ANGLES) / EVAL_GRID_ANGLES
            rr, tt = np.meshgrid(radii, theta, indexing="ij")
            return np.stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()], axis=1)
        if spec.startswith("ray:"):
            _, theta, rmin, rmax, n = spec.split(":")
            radii = np.geomspace(float(rmin), float(rmax), int(n))
            return np.stack([radii * np.cos(float(theta)), radii * np.sin(float(theta))], axis=1)
        rows = [[float(v) for v in chunk.split(",")] for chunk in spec.split(";") if chunk.strip()]
        points = np.asarray(rows, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] == 0:
            raise ValueError
        return points
    except ValueError:
        raise ConfigError(f"无法解析点集 / cannot parse point set '{spec}'; "
                          "expected grid | ray:theta:rmin:rmax:n | x1,x2;x1,x2") from None


def build_source(cfg: ExperimentConfig):
    """FIELD_KIND: 闭式流场族、double-wake 或 solution (读取 SOLUTION)"""
    kind = cfg.get("FIELD_KIND")
    try:
        if kind == "solution":
            return GridSolution.from_npz(cfg.get("SOLUTION"))
        if kind == "double-wake":
            params = parse_assignments(cfg.get("FIELD_PARAMS", ""))
            return double_wake((params.get("F1", -16.0 / 9.0), params.get("F2", 0.0)),
                               parse_assignments(cfg.get("FIELD_OPTIONS", ""), numeric=False).get("terms", "full"))
        return AnalyticField.from_strings(kind, cfg.get("FIELD_PARAMS", ""), cfg.get("FIELD_OPTIONS", ""))
    except (ParameterError, TypeError) as e:
        raise ConfigError(str(e)) from e
    except (OSError, KeyError) as e:
        raise ConfigError(f"无法读取解文件 / cannot read solution: {e}") from e


def build_operator(cfg: ExperimentConfig) -> OperatorKind:
    try:
        return OperatorKind.from_string(cfg.get("OPERATOR", "ns"), cfg.get_float("NU", 1.0))
    except ParameterError as e:
        raise ConfigError(str(e)) from e


def build_forcing(cfg: ExperimentConfig) -> Optional[ForceField]:
    try:
        if cfg.has("FORCING_N"):
            return delta_forcing(cfg.get_int("FORCING_N"), cfg.get_float("FORCING_AMPLITUDE", 1.0),
                                 cfg.get_float("FORCING_EPS", 0.1))
        if cfg.has("FORCE_SPEC"):
            return parse_force_spec(cfg.get("FORCE_SPEC"))
    except ParameterError as e:
        raise ConfigError(str(e)) from e
    return None


def build_grid(cfg: ExperimentConfig, forcing_run: bool = False) -> AnnularGrid:
    """未给出的网格参数取分辨率档位默认值"""
    defaults = get_grid_defaults()
    try:
        return AnnularGrid(
            cfg.get_float("GRID_R_INNER", FORCING_R_INNER if forcing_run else 1.0),
            cfg.get_float("GRID_R_OUTER", defaults["r_outer"]),
            cfg.get_int("GRID_N_R", defaults["n_r"]),
            cfg.get_int("GRID_N_THETA", defaults["n_theta"]),
        )
    except GridError as e:
        raise ConfigError(str(e)) from e


def build_boundary(cfg: ExperimentConfig, forcing_run: bool = False) -> BoundaryConditionSpec:
    try:
        return BoundaryConditionSpec(
            cfg.get_floats("BC_C0", 2, (0.0, 0.0)),
            cfg.get_floats("BC_C1", 3, (0.0, 0.0, 0.0)),
            cfg.get("BC_INNER", "regular" if forcing_run else "body"),
            cfg.get("BC_OUTER", "open"),
        )
    except ParameterError as e:
        raise ConfigError(str(e)) from e


def build_newton(cfg: ExperimentConfig) -> NewtonOptions:
    options = NewtonOptions(
        tol=cfg.get_float("SOLVER_TOL", Config.SOLVER_TOL),
        atol=cfg.get_float("SOLVER_ATOL", Config.SOLVER_ATOL),
        max_iter=cfg.get_int("SOLVER_MAX_ITER", Config.SOLVER_MAX_ITER),
        damping=cfg.get_float("SOLVER_DAMPING", 1.0),
    )
    if not 0.0 < options.damping <= 1.0:
        raise ConfigError(f"SOLVER_DAMPING 须在 (0, 1] / SOLVER_DAMPING must lie in (0, 1], got {options.damping}")
    return options


def build_plan(cfg: ExperimentConfig) -> ContinuationPlan:
    mode = cfg.get("SWEEP_MODE", "force")
    delta = mode == "delta"
    try:
        return ContinuationPlan(
            mode=mode,
            param1=cfg.get_range("SWEEP_PARAM1"),
            param2=cfg.get_range("SWEEP_PARAM2"),
            order=cfg.sweep_order(),
            grid=build_grid(cfg, forcing_run=delta),
            inner=cfg.get("BC_INNER", "regular" if delta else "body"),
            outer=cfg.get("BC_OUTER", "open"),
            nu=cfg.get_float("NU", 1.0),
            delta_n=cfg.get_int("FORCING_N", 1),
            delta_eps=cfg.get_float("FORCING_EPS", 0.1),
            newton=build_newton(cfg),
        )
    except ParameterError as e:
        raise ConfigError(str(e)) from e


def analysis_window(cfg: ExperimentConfig, grid: Optional[AnnularGrid] = None):
    """ANALYSIS_WINDOW，缺省取档位窗口并裁剪到网格内"""
    window = cfg.get_window("ANALYSIS_WINDOW", get_fit_window())
    if grid is not None:
        lo, hi = max(window[0], grid.r_inner), min(window[1], grid.r_outer)
        if not lo < hi and not cfg.has("ANALYSIS_WINDOW"):
            logger.warning(f"默认窗口 {window} 超出网格，改用整个网格 / default window outside the grid, "
                           f"using [{grid.r_inner:g}, {grid.r_outer:g}]")
            lo, hi = grid.r_inner, grid.r_outer
        if not lo < hi:
            raise ConfigError(f"分析窗口不在网格内 / analysis window {window} outside the grid")
        window = (lo, hi)
    return window


# ---- 执行器 Executor ----------------------------------------------------------------------

class ExperimentExecutor:
    """实验执行器 Experiment executor"""

    def __init__(self, cfg: ExperimentConfig, out_dir=None, jobs: int = 1):
        self.cfg = cfg
        self.out_dir = Path(out_dir or cfg.output_dir)
        self.jobs = max(1, int(jobs))
        self.process = psutil.Process()
        self.start_memory = None

    def _log_resource_usage(self, stage: str):
        """记录资源使用情况"""
        memory_mb = self.process.memory_info().rss / 1024 / 1024
        if self.start_memory is None:
            self.start_memory = memory_mb
        logger.info(f"[{stage}] 内存: {memory_mb:.1f}MB (+{memory_mb - self.start_memory:.1f}MB)")

    def _path(self, name: str) -> Path:
        return self.out_dir / name

    def run(self) -> ExperimentOutcome:
        handler = getattr(self, f"_run_{self.cfg.experiment}")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._log_resource_usage(f"{self.cfg.experiment} start")
        try:
            outcome = handler()
        except FieldError as e:
            raise ConfigError(str(e)) from e
        self._log_resource_usage(f"{self.cfg.experiment} end")
        return outcome

    def _run_eval(self) -> ExperimentOutcome:
        source = build_source(self.cfg)
        points = parse_points(self.cfg.get("POINTS", "grid"))
        frame = source.jet(points).to_frame(points)
        path = write_csv(frame, self._path("eval.csv"))
        return ExperimentOutcome("eval", {"eval": str(path)}, {"n_points": len(points)}, [frame.head(10)])

    def _rays(self, source) -> List[float]:
        if self.cfg.has("RAYS"):
            return list(self.cfg.get_floats("RAYS"))
        if self.cfg.has("RAY"):
            return [self.cfg.get_float("RAY")]
        if isinstance(source, AnalyticField) and source.kind is FieldKind.WAKE:
            return [WakeParameters.from_force(source.params).theta0 + d for d in (-0.3, -0.2, -0.1, -0.05,
                                                                                  0.05, 0.1, 0.2, 0.3)]
        return list(2.0 * np.pi * np.arange(8) / 8 + 0.1)

    def _run_residual(self) -> ExperimentOutcome:
        source = build_source(self.cfg)
        op = build_operator(self.cfg)
        window = self.cfg.get_window("WINDOW", DEFAULT_WINDOW)
        n = self.cfg.get_int("N_SAMPLES", 24)
        basis = None
        if isinstance(source, AnalyticField) and source.kind is FieldKind.WAKE:
            basis = wake_basis(WakeParameters.from_force(source.params).theta0)
        rows, samples = [], []
        for theta in self._rays(source):
            ray = ray_residual(source, op, theta, window, n, basis=basis)
            samples.append(ray.to_frame().assign(theta=theta))
            for component, fit in ray.fits.items():
                row = {"theta": theta, "component": component}
                row.update({"exponent": np.nan, "prefactor": np.nan, "rms_log_residual": np.nan}
                           if fit is None else {"exponent": fit.exponent, "prefactor": fit.prefactor,
                                                "rms_log_residual": fit.rms_log_residual})
                rows.append(row)
        fits = pd.DataFrame(rows)
        outputs = {"residual": str(write_csv(fits, self._path("residual.csv"))),
                   "samples": str(write_csv(pd.concat(samples, ignore_index=True),
                                            self._path("residual_samples.csv")))}
        worst = fits.groupby("component")["exponent"].max().to_dict()
        return ExperimentOutcome("residual", outputs, {"operator": op.name, "window": list(window),
                                                       "max_exponent": worst}, [fits])

    def _run_invariants(self) -> ExperimentOutcome:
        source = build_source(self.cfg)
        radii = self.cfg.get_floats("RADIUS", default=(10.0,))
        viscous = self.cfg.get("OPERATOR", "ns") != "euler"
        triples = invariants_at_radii(source, radii, self.cfg.get_float("NU", 1.0),
                                      self.cfg.get_int("N_QUAD", 256), viscous)
        frame = pd.DataFrame([t.to_dict() for t in triples])
        path = write_csv(frame, self._path("invariants.csv"))
        return ExperimentOutcome("invariants", {"invariants": str(path)}, {"viscous": viscous}, [frame])

    def _run_moments(self) -> ExperimentOutcome:
        force = build_forcing(self.cfg)
        coeffs = moment_coeffs(force)
        envelope = moment_envelope(force)
        frame = pd.DataFrame([{"name": k, "value": v} for k, v in coeffs.to_dict().items()])
        path = write_csv(frame, self._path("moments.csv"))
        summary = {"force_integral": force_integral(force), "torque_integral": torque_integral(force),
                   "envelope": envelope, "label": force.label}
        return ExperimentOutcome("moments", {"moments": str(path)}, summary, [frame])

    def _run_wake(self) -> ExperimentOutcome:
        params = parse_assignments(self.cfg.get("FIELD_PARAMS"))
        force = (params.get("F1", -16.0 / 9.0), params.get("F2", 0.0))
        try:
            wake = WakeParameters.from_force(force)
        except ParameterError as e:
            raise ConfigError(str(e)) from e
        window = self.cfg.get_window("WINDOW", DEFAULT_WINDOW)
        terms = parse_assignments(self.cfg.get("FIELD_OPTIONS", ""), numeric=False).get("terms", "full")
        rays = wake_residual_orders(force, window=window, n_samples=self.cfg.get_int("N_SAMPLES", 24), terms=terms)
        frame = pd.DataFrame([{"theta": ray.theta,
                               "parallel": ray.fits["parallel"].exponent if ray.fits["parallel"] else np.nan,
                               "perpendicular": ray.fits["perpendicular"].exponent
                               if ray.fits["perpendicular"] else np.nan} for ray in rays])
        radii = self.cfg.get_floats("RADIUS", default=(1e3, 1e4, 3e4))
        extrapolated = extrapolated_force(wake_field(force, terms), radii, rate=1.0 / 3.0)
        summary = {"a": wake.a, "theta0": wake.theta0, "force": list(wake.force),
                   "extrapolated_force": extrapolated, "terms": terms}
        outputs = {"wake": str(write_csv(frame, self._path("wake.csv"))),
                   "summary": str(write_json(summary, self._path("wake_summary.json")))}
        return ExperimentOutcome("wake", outputs, summary, [frame])

    def _solution_outputs(self, solution: GridSolution, stem: str) -> Dict[str, str]:
        outputs = {"solution": str(solution.to_npz(self._path(f"{stem}.npz"))),
                   "solution_csv": str(solution.to_csv(self._path(f"{stem}.csv")))}
        window = analysis_window(self.cfg, solution.grid)
        profile = ray_profile(solution, log_radii(window, 16))
        outputs["profile"] = str(profile.to_csv(self._path("profile.csv")))
        outputs["profile_plot"] = str(plot_profile(profile, self._path("profile.svg"), stem))
        return outputs

    def _run_solve(self) -> ExperimentOutcome:
        forcing = build_forcing(self.cfg)
        grid = build_grid(self.cfg, forcing is not None)
        bc = build_boundary(self.cfg, forcing is not None)
        system = NavierStokesSystem(grid, bc, forcing=forcing, nu=self.cfg.get_float("NU", 1.0))
        params = {"bc": bc.to_dict(), "forcing": forcing.label if forcing is not None else None}
        logger.info(f"求解 / solving on {grid.describe()}")
        result = newton_solve(system, None, build_newton(self.cfg), params)
        summary = {"status": result.status.value, "iterations": result.iterations,
                   "residual": result.final_residual, "elapsed": result.elapsed}
        if not result.converged:
            result.solution.to_npz(self._path("solution.npz"))
            raise SolverDivergenceError(result)
        outputs = self._solution_outputs(result.solution, "solution")
        return ExperimentOutcome("solve", outputs, summary)

    def _run_sweep(self) -> ExperimentOutcome:
        plan = build_plan(self.cfg)
        window = analysis_window(self.cfg, plan.grid)
        fold = self.cfg.get("ANALYSIS_FOLD", "pi" if plan.mode == "delta" and plan.delta_n == 2 else "none")
        total = len(plan.param1) * len(plan.param2) * len(plan.orders)
        names = {"force": ("F", "M"), "strain": ("A", "M"), "delta": ("A", "-")}[plan.mode]

        with Progress(TextColumn("[cyan]{task.description}"), BarColumn(), MofNCompleteColumn(),
                      TimeElapsedColumn()) as progress:
            task = progress.add_task(f"sweep {plan.mode}", total=total)
            sweeps = continuation_sweep(plan, jobs=self.jobs,
                                        on_point=lambda _: progress.advance(task))

        outputs, summary, tables = {}, {}, []
        all_rows = {}
        for order, sweep in sweeps.items():
            status = sweep.to_frame()
            outputs[f"status_{order}"] = str(write_csv(status, self._path(f"sweep_{order}.csv")))
            rows = phase_map(sweep, window, fold)
            outputs[f"phasemap_{order}"] = str(write_phasemap(rows, self._path(f"phasemap_{order}.csv")))
            for i, path in enumerate(plot_phase_panels(rows, self._path(f"plots_{order}"), names)):
                outputs[f"heatmap_{order}_{i}"] = str(path)
            self._save_solutions(sweep.converged_solutions(), order)
            summary[order] = status["status"].value_counts().to_dict()
            tables.append(phase_frame(rows))
            all_rows[order] = rows
        outputs["phasemap"] = str(write_phasemap(next(iter(all_rows.values())), self._path("phasemap.csv")))
        if len(sweeps) == 2:
            a, b = sweeps.values()
            diff = pd.DataFrame(sweep_disagreement(a, b), columns=["param1", "param2", "status_a", "status_b"])
            outputs["disagreement"] = str(write_csv(diff, self._path("disagreement.csv")))
            summary["disagreements"] = len(diff)
        return ExperimentOutcome("sweep", outputs, summary, tables)

    def _save_solutions(self, points: List[SweepPoint], order: str):
        folder = self._path(f"solutions_{order}")
        for pt in points:
            pt.solution.to_npz(folder / f"p1_{pt.param1:.6g}_p2_{pt.param2:.6g}.npz")

    def _run_analyze(self) -> ExperimentOutcome:
        solution = self._load_solution()
        window = analysis_window(self.cfg, solution.grid)
        fold = self.cfg.get("ANALYSIS_FOLD", "none")
        profile = ray_profile(solution, log_radii(window, 16))
        mean_angle, angle_std = profile.angle_stats(fold)
        harmonic = harmonic_fit(solution, window)
        wake = wake_fit(solution, window, double=fold == "pi")
        summary = {"window": list(window), "exponent": profile.decay().exponent, "mean_angle": mean_angle,
                   "angle_std": angle_std, "harmonic": harmonic.to_dict(), "wake": wake.to_dict()}
        outputs = {"profile": str(profile.to_csv(self._path("profile.csv"))),
                   "analysis": str(write_json(summary, self._path("analysis.json")))}
        return ExperimentOutcome("analyze", outputs, summary, [profile.to_frame()])

    def _run_plot(self) -> ExperimentOutcome:
        target = Path(self.cfg.get("SOLUTION"))
        if target.suffix == ".csv":
            frame = pd.read_csv(target)
            rows = [PhaseMapRow(r.param1, r.param2, r.exponent, r.mean_angle, r.angle_std, (r.Fx, r.Fy), r.M,
                                r.status) for r in frame.itertuples()]
            paths = plot_phase_panels(rows, self.out_dir)
            return ExperimentOutcome("plot", {f"heatmap_{i}": str(p) for i, p in enumerate(paths)})
        solution = self._load_solution()
        profile = ray_profile(solution, log_radii(analysis_window(self.cfg, solution.grid), 16))
        path = plot_profile(profile, self._path("profile.svg"), target.stem)
        return ExperimentOutcome("plot", {"profile_plot": str(path)})

    def _load_solution(self) -> GridSolution:
        path = self.cfg.get("SOLUTION")
        try:
            return GridSolution.from_npz(path)
        except (OSError, KeyError, ValueError) as e:
            raise ConfigError(f"无法读取解文件 / cannot read solution {path}: {e}") from e

    def _run_verify(self) -> ExperimentOutcome:
        suite = self.cfg.get("SUITE")
        try:
            report = run_suite(suite, seed=self.cfg.seed)
        except KeyError as e:
            raise ConfigError(str(e.args[0])) from e
        path = report.write(self.out_dir)
        return ExperimentOutcome("verify", {"report": str(path)}, report.summary, report=report)
