"""
远场拟合：调和渐近 μe_θ/r 与尾流解 U_F
Far-field fits: harmonic asymptote and wake profile
"""
from dataclasses import asdict, dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from ..fields.types import ParameterError
from ..utils.logger import get_logger
from ..wake.wake_field import WakeParameters, leading_wake_speed, wake_field
from .profiles import log_radii, ray_profile

logger = get_logger(__name__)

WAKE_MODELS = ("composite", "leading")
WAKE_REJECT_RMS = 0.1
HARMONIC_REJECT_RATIO = 0.1
ACTIVE_FRACTION = 1e-2
TINY = 1e-300


def _circle_points(window: Tuple[float, float], n_radii: int, n_theta: int):
    radii = log_radii(window, n_radii)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    rr, tt = np.meshgrid(radii, theta, indexing="ij")
    points = np.stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()], axis=1)
    return points, rr.ravel(), tt.ravel()


@dataclass(frozen=True)
class HarmonicFit:
    mu: float
    sup_residual: float
    window: Tuple[float, float]

    @property
    def relative(self) -> float:
        return self.sup_residual / abs(self.mu) if self.mu != 0.0 else float("inf")

    @property
    def accepted(self) -> bool:
        return self.relative < HARMONIC_REJECT_RATIO

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out.update(window=list(self.window), relative=self.relative, accepted=self.accepted)
        return out


def harmonic_fit(source, window: Tuple[float, float], n_radii: int = 24, n_theta: int = 256) -> HarmonicFit:
    """
    min_μ sup |r·u − μ e_θ|，窗口内各圆上取样
    Minimax fit of r·u against μ e_θ over the window
    """
    points, r, th = _circle_points(window, n_radii, n_theta)
    ru = r[:, None] * source.jet(points).u
    e_theta = np.stack([-np.sin(th), np.cos(th)], axis=1)
    along = np.einsum("ni,ni->n", ru, e_theta)
    across = np.linalg.norm(ru - along[:, None] * e_theta, axis=1)

    # |v − μe|² = (μ − v·e)² + |v⊥|²，对 μ 凸
    def sup(mu):
        return float(np.max(np.hypot(mu - along, across)))

    lo, hi = float(along.min()), float(along.max())
    scale = max(1.0, abs(lo), abs(hi))
    if hi - lo <= 1e-15 * scale:
        mu = 0.5 * (lo + hi)
    else:
        mu = float(minimize_scalar(sup, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-13 * scale}).x)
    return HarmonicFit(mu, sup(mu), (float(window[0]), float(window[1])))


@dataclass(frozen=True)
class WakeFit:
    force: Tuple[float, float]
    a: float
    theta0: float
    rms: float
    model: str
    double: bool
    n_points: int

    @property
    def accepted(self) -> bool:
        return bool(np.isfinite(self.rms) and self.rms <= WAKE_REJECT_RMS)

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out.update(force=list(self.force), accepted=self.accepted)
        return out


def _model_speed(model: str, double: bool, a: float, theta0: float, points: np.ndarray) -> np.ndarray:
    if model == "leading":
        speed = leading_wake_speed(a, theta0, points)
        if double:
            speed = speed + leading_wake_speed(a, theta0 + np.pi, points)
        return speed
    force = WakeParameters.from_amplitude(a, theta0).net_force
    jet = wake_field(force).jet(points)
    if double:
        jet = jet + wake_field(-force).jet(points)
    return jet.speed


def wake_fit(source, window: Tuple[float, float], model: str = "composite", double: bool = False,
             n_radii: int = 12, n_theta: int = 256) -> WakeFit:
    """
    对 log|u| 做 (a, θ₀) 的非线性最小二乘
    Nonlinear least squares of log|u| against the wake model

    初值：θ₀ 取 a(r) 的圆周均值 (double 时模 π)，a 取 (3 r^{1/3} d(r)/2)^{1/2} 的中位数。
    只用速度不小于同一圆上最大值 1% 的点。
    """
    if model not in WAKE_MODELS:
        raise ParameterError(f"未知尾流模型 / unknown wake model '{model}', expected one of {WAKE_MODELS}")
    profile = ray_profile(source, log_radii(window, n_radii), n_theta=n_theta)
    theta_seed, _ = profile.angle_stats("pi" if double else "none")
    if not np.isfinite(theta_seed):
        theta_seed = 0.0
    a_seed = float(np.median(np.sqrt(1.5 * profile.radii ** (1.0 / 3.0) * profile.d)))
    a_seed = max(a_seed, 1e-6)

    points, r, _ = _circle_points(window, n_radii, n_theta)
    observed = source.jet(points).speed.reshape(n_radii, n_theta)
    active = (observed >= ACTIVE_FRACTION * observed.max(axis=1, keepdims=True)).ravel()
    active &= observed.ravel() > 0.0
    pts, log_obs = points[active], np.log(observed.ravel()[active])
    if pts.shape[0] < 3:
        return WakeFit((float("nan"), float("nan")), float("nan"), float("nan"), float("inf"),
                       model, double, int(pts.shape[0]))

    def residuals(x):
        speed = _model_speed(model, double, float(np.exp(x[0])), float(x[1]), pts)
        return np.log(np.maximum(speed, TINY)) - log_obs

    result = least_squares(residuals, x0=[np.log(a_seed), theta_seed], method="lm", x_scale=[1.0, 0.1])
    a, theta0 = float(np.exp(result.x[0])), float(np.angle(np.exp(1j * result.x[1])))
    rms = float(np.sqrt(np.mean(result.fun ** 2)))
    force = WakeParameters.from_amplitude(a, theta0).net_force
    fit = WakeFit((float(force[0]), float(force[1])), a, theta0, rms, model, double, int(pts.shape[0]))
    if not fit.accepted:
        logger.info(f"尾流拟合被拒绝 / wake fit rejected: rms={rms:.3g} > {WAKE_REJECT_RMS}")
    return fit


def mean_wake_angle(source, window: Tuple[float, float], fold: str = "none",
                    n_radii: int = 16) -> Tuple[float, float]:
    """窗口内 a(r) 的圆周均值与角偏差"""
    return ray_profile(source, log_radii(window, n_radii)).angle_stats(fold)
