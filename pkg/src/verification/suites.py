"""
验收检查套件
Acceptance check suites

exact-solutions      精确解残差、Euler修正与Euler净力
asymptotics          尾流残差阶、尾流净力外推、交叉修正的抵消
symmetry-table       对称系综的矩零模式
oracle               Stokes卷积参照解与 S₀+S₁，Stokes佯谬的对数增长
solver-convergence   精确解注入的截断误差阶、零解、纯力矩涡、外边界敏感性
"""
import time
from typing import Callable, Dict, List, Optional

import numpy as np

from ..analysis.profiles import log_radii, ray_profile
from ..fields.analytic import AnalyticField, first_order_field, stokes_asymptotic_field
from ..fields.closed_forms import euler_net_force
from ..fields.forcing import gaussian_bump, gaussian_lift
from ..fields.types import CutoffProfile, FieldKind
from ..invariants.contour import contour_invariants, extrapolated_force
from ..invariants.moments import moment_coeffs
from ..invariants.symmetry import symmetry_table_check
from ..residual.convolution import paradox_slope, stokes_convolution
from ..residual.decay import DecayFitError, fit_decay, ray_points
from ..residual.euler_ode import solve_euler_correction
from ..residual.operators import OperatorKind, advected_residual, apply_operator
from ..solver.boundary import BoundaryConditionSpec
from ..solver.grid import AnnularGrid
from ..solver.manufactured import truncation_rates
from ..solver.newton import newton_solve
from ..solver.system import NavierStokesSystem
from ..utils.logger import get_logger
from ..wake.residual_orders import wake_residual_orders
from ..wake.wake_field import WakeParameters, wake_field
from .report import CheckResult, SuiteReport

logger = get_logger(__name__)

EXACT_TOL = 1e-10
WAKE_FORCE = (-16.0 / 9.0, 0.0)
CONVERGENCE_BAND = (1.7, 2.3)
VORTEX_TORQUE = 30.0 * np.pi
OUTER_WINDOW = (10.0, 100.0)
OUTER_EXPONENT_GAP = 0.1


def random_far_points(rng: np.random.Generator, n: int, r_min: float, r_max: float) -> np.ndarray:
    """log r 与 θ 均匀分布的随机点"""
    r = np.exp(rng.uniform(np.log(r_min), np.log(r_max), n))
    th = rng.uniform(-np.pi, np.pi, n)
    return np.stack([r * np.cos(th), r * np.sin(th)], axis=1)


def _max_residual(op: OperatorKind, source, points) -> float:
    f, div = apply_operator(op, source, points)
    return float(max(np.max(np.abs(f)), np.max(np.abs(div))))


def _fit_or_nan(radii, values) -> float:
    try:
        return fit_decay(radii, values).exponent
    except DecayFitError as e:
        logger.warning(f"衰减拟合失败 / decay fit failed: {e}")
        return float("nan")


def exact_solutions_suite(rng: np.random.Generator) -> List[CheckResult]:
    checks = []
    cutoff = CutoffProfile()
    points = random_far_points(rng, 1000, 2.0 * cutoff.outer, 1e4)
    ns = OperatorKind.navier_stokes(1.0)

    for amp, mu in ((1.0, 0.0), (0.5, 2.0), (-2.0, -1.0)):
        value = _max_residual(ns, AnalyticField.create(FieldKind.HAMEL, A=amp, mu=mu), points)
        checks.append(CheckResult(f"hamel A={amp:g} mu={mu:g}", value < EXACT_TOL, value, EXACT_TOL))
    for m in (1.0, -3.0, 4.0 * np.pi):
        value = _max_residual(ns, AnalyticField.create(FieldKind.HARMONIC_VORTEX, cutoff, M=m), points)
        checks.append(CheckResult(f"harmonic-vortex M={m:g}", value < EXACT_TOL, value, EXACT_TOL))
    for lam in (0.0, 0.3, 0.6, 0.9):
        field = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.3)
        value = _max_residual(OperatorKind.euler(), field, points)
        checks.append(CheckResult(f"euler-leading lam={lam:g}", value < EXACT_TOL, value, EXACT_TOL))

    for lam in (0.0, 0.3, 0.6):
        corr = solve_euler_correction(1.0, lam, 0.5)
        rel = corr.integral_error / corr.expected_integral
        checks.append(CheckResult(f"euler-correction integral lam={lam:g}", rel < 1e-6, rel, 1e-6,
                                  f"∫φ₁={corr.integral:.10g}, 3π/√(1−λ²)={corr.expected_integral:.10g}"))

    for lam in (0.3, 0.6):
        field = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.0)
        measured = contour_invariants(field, 1.0, 1e3, n_quad=2048, viscous=False).force
        expected = euler_net_force(1.0, lam, 0.0)
        rel = float(np.linalg.norm(measured - expected) / np.linalg.norm(expected))
        checks.append(CheckResult(f"euler net force lam={lam:g}", rel < 5e-3, rel, 5e-3,
                                  f"contour={np.round(measured, 8).tolist()}"))

    flux = contour_invariants(AnalyticField.create(FieldKind.HAMEL, A=1.0, mu=0.5), 1.0, 50.0).flux
    err = abs(flux + 3.0 * np.pi)
    checks.append(CheckResult("hamel flux = -3π", err < 1e-10, err, 1e-10))
    return checks


def asymptotics_suite(rng: np.random.Generator) -> List[CheckResult]:
    checks = []
    rays = wake_residual_orders(WAKE_FORCE)
    bounds = {"parallel": -7.0 / 3.0 + 0.15, "perpendicular": -8.0 / 3.0 + 0.15}
    for key, bound in bounds.items():
        exponents = [ray.fits[key].exponent if ray.fits.get(key) else float("nan") for ray in rays]
        worst = float(np.max(exponents))
        checks.append(CheckResult(f"wake residual {key} exponent", bool(worst <= bound), worst, bound,
                                  f"{len(rays)} rays over [1e2, 1e4]"))

    params = WakeParameters.from_force(WAKE_FORCE)
    force = extrapolated_force(wake_field(WAKE_FORCE), [1e3, 1e4, 3e4], rate=1.0 / 3.0)
    expected = -16.0 * params.a ** 3 / 9.0 * np.array([np.cos(params.theta0), np.sin(params.theta0)])
    rel = float(np.linalg.norm(force - expected) / np.linalg.norm(expected))
    checks.append(CheckResult("wake net force (extrapolated)", rel < 0.02, rel, 0.02,
                              f"F∞={np.round(force, 6).tolist()}"))

    a_vec = (0.4, 1.0, 0.5, -0.8)
    cross = AnalyticField.create(FieldKind.CROSS_CORRECTOR, options={"form": "stream", "amplitude": "squared"},
                                 A0=a_vec[0], A1=a_vec[1], A2=a_vec[2], A3=a_vec[3], nu=1.0)
    first = first_order_field(a_vec)
    worst = -np.inf
    for theta in np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False) + 0.1:
        pts = ray_points(theta, (1e2, 1e4), 24)
        residual = np.linalg.norm(advected_residual(cross, first, 1.0, pts), axis=1)
        worst = max(worst, _fit_or_nan(np.hypot(pts[:, 0], pts[:, 1]), residual))
    checks.append(CheckResult("cross-corrector cancellation exponent", bool(worst <= -3.5), float(worst), -3.5))
    return checks


def symmetry_table_suite(rng: np.random.Generator) -> List[CheckResult]:
    return [CheckResult(f"symmetry ({row.kind.value})", row.passed, row.observed, row.expected,
                        f"zeros={row.zero_counts}")
            for row in symmetry_table_check(rng)]


def oracle_suite(rng: np.random.Generator) -> List[CheckResult]:
    checks = []
    zero_mean = gaussian_lift(0.7, -0.4, 1.1)
    moments = moment_coeffs(zero_mean)
    asym = stokes_asymptotic_field(moments.c0, moments.c1)
    radii = np.geomspace(1e2, 1e3, 10)
    worst = -np.inf
    for theta in (0.3, 1.9, 4.0):
        pts = np.stack([radii * np.cos(theta), radii * np.sin(theta)], axis=1)
        remainder = np.linalg.norm(stokes_convolution(zero_mean, pts).u - asym.jet(pts).u, axis=1)
        worst = max(worst, _fit_or_nan(radii, remainder))
    checks.append(CheckResult("oracle remainder exponent", bool(worst <= -1.4), float(worst), -1.4,
                              "convolution minus S₀+S₁ over [1e2, 1e3]"))

    bump = gaussian_bump((0.3, 0.2), (1.0, -0.5), 0.7)
    slope = paradox_slope(bump)
    expected = float(np.hypot(1.0, -0.5) / (4.0 * np.pi))
    rel = abs(slope - expected) / expected
    checks.append(CheckResult("stokes paradox log-slope", rel < 0.05, rel, 0.05,
                              f"slope={slope:.6g}, |F|/4π={expected:.6g}"))
    return checks


def solver_convergence_suite(rng: np.random.Generator) -> List[CheckResult]:
    checks = []
    base = AnnularGrid(1.0, 20.0, 17, 32)
    for kind in ("hamel", "harmonic-vortex"):
        norms, rates = truncation_rates(kind, base, levels=3)
        lo, hi = CONVERGENCE_BAND
        ok = all(lo <= rate <= hi for rate in rates)
        checks.append(CheckResult(f"truncation order {kind}", ok, float(min(rates)), f"[{lo}, {hi}]",
                                  f"norms={[f'{n:.3e}' for n in norms]}, rates={[round(r, 3) for r in rates]}"))

    result = newton_solve(NavierStokesSystem(base))
    ok = result.converged and result.iterations == 1 and not np.any(result.solution.psi)
    checks.append(CheckResult("zero data gives zero solution", ok, float(result.iterations), 1.0,
                              result.status.value))

    # 纯力矩: 离散解就是调和涡 ψ = (𝓜/4π) log r, ω = 0
    grid = AnnularGrid(1.0, 1e3, 65, 64)
    bc = BoundaryConditionSpec.from_parameters("force", 0.0, VORTEX_TORQUE)
    result = newton_solve(NavierStokesSystem(grid, bc))
    slope = VORTEX_TORQUE / (4.0 * np.pi)
    error = float(np.max(np.abs(result.solution.psi - slope * grid.s[:, None])) / (slope * grid.s[-1]))
    error = max(error, float(np.max(np.abs(result.solution.omega))))
    checks.append(CheckResult("pure torque gives the harmonic vortex", bool(result.converged and error < 1e-6),
                              error, 1e-6, result.status.value))

    grid = AnnularGrid(1.0, 1e3, 97, 64)
    exponents = {}
    for outer in ("open", "dirichlet"):
        bc = BoundaryConditionSpec.from_parameters("strain", 1.0, 0.0, outer=outer)
        result = newton_solve(NavierStokesSystem(grid, bc))
        exponents[outer] = (_fit_or_nan(*_profile_arrays(result.solution)) if result.converged
                            else float("nan"))
    gap = abs(exponents["open"] - exponents["dirichlet"])
    checks.append(CheckResult("outer condition sensitivity", bool(gap <= OUTER_EXPONENT_GAP), float(gap),
                              OUTER_EXPONENT_GAP,
                              f"open={exponents['open']:.4f}, dirichlet={exponents['dirichlet']:.4f} "
                              f"over {OUTER_WINDOW}"))
    return checks


def _profile_arrays(solution):
    profile = ray_profile(solution, log_radii(OUTER_WINDOW))
    return profile.radii, profile.d


SUITES: Dict[str, Callable[[np.random.Generator], List[CheckResult]]] = {
    "exact-solutions": exact_solutions_suite,
    "asymptotics": asymptotics_suite,
    "symmetry-table": symmetry_table_suite,
    "oracle": oracle_suite,
    "solver-convergence": solver_convergence_suite,
}


def run_suite(name: str, seed: int = 0, rng: Optional[np.random.Generator] = None) -> SuiteReport:
    """
    运行一个验收套件；失败记录在报告中而不抛异常
    Run one acceptance suite; failures are report content
    """
    if name not in SUITES:
        raise KeyError(f"未知验证套件 / unknown suite '{name}', choose one of {', '.join(SUITES)}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    start = time.perf_counter()
    logger.info(f"开始验证套件 / running suite {name}")
    checks = SUITES[name](rng)
    report = SuiteReport(name, checks, time.perf_counter() - start)
    logger.info(f"套件 {name}: {report.summary['passed']}/{report.summary['total']} 通过, {report.elapsed:.1f}s")
    return report
