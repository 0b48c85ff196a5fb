"""
衰减指数拟合
Power-law decay fits in log-log coordinates
"""
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..fields.types import as_points
from .operators import OperatorKind, apply_operator

MIN_SAMPLES = 8


class DecayFitError(ValueError):
    """拟合输入非法 Invalid input to a decay fit"""


@dataclass(frozen=True)
class DecayFit:
    """value ≈ prefactor · r^exponent on [rmin, rmax]"""
    exponent: float
    prefactor: float
    window: Tuple[float, float]
    rms_log_residual: float
    n_samples: int
    stderr: float = 0.0

    def predict(self, r) -> np.ndarray:
        return self.prefactor * np.asarray(r, dtype=float) ** self.exponent

    def to_dict(self) -> Dict[str, float]:
        out = asdict(self)
        out["window"] = list(self.window)
        return out

    def summary(self) -> str:
        return (f"exponent={self.exponent:.6f} prefactor={self.prefactor:.6g} "
                f"window=[{self.window[0]:g}, {self.window[1]:g}] rms={self.rms_log_residual:.3g} "
                f"n={self.n_samples}")


def fit_decay(radii: Sequence[float], values: Sequence[float]) -> DecayFit:
    """
    (log r, log value) 上的最小二乘直线，斜率即衰减指数
    Least-squares line in log-log coordinates; the slope is the exponent
    """
    r = np.asarray(radii, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    if r.shape != v.shape:
        raise DecayFitError(f"半径与数值长度不一致 / radii and values differ in length: {r.size} vs {v.size}")
    if r.size < MIN_SAMPLES:
        raise DecayFitError(f"样本数不足 / need at least {MIN_SAMPLES} samples, got {r.size}")
    if np.any(~np.isfinite(v)) or np.any(v <= 0.0):
        raise DecayFitError("拟合值必须为正的有限数 / values must be positive and finite")
    if np.any(r <= 0.0):
        raise DecayFitError("半径必须为正 / radii must be positive")
    if np.isclose(r.min(), r.max()):
        raise DecayFitError(f"拟合区间退化 / degenerate window [{r.min():g}, {r.max():g}]")
    log_r, log_v = np.log(r), np.log(v)
    line = stats.linregress(log_r, log_v)
    resid = log_v - (line.intercept + line.slope * log_r)
    return DecayFit(float(line.slope), float(np.exp(line.intercept)), (float(r.min()), float(r.max())),
                    float(np.sqrt(np.mean(resid ** 2))), int(r.size), float(line.stderr))


def fit_decay_samples(samples: Sequence[Tuple[float, float]]) -> DecayFit:
    """接受 (r, value) 对的列表 / accepts a list of (r, value) pairs"""
    arr = np.asarray(samples, dtype=float).reshape(-1, 2)
    return fit_decay(arr[:, 0], arr[:, 1])


def ray_points(theta: float, window: Tuple[float, float], n: int = 24) -> np.ndarray:
    """射线上的对数等距采样点 / log-spaced samples on a ray, shape (n, 2)"""
    rmin, rmax = (float(w) for w in window)
    if not 0.0 < rmin < rmax:
        raise DecayFitError(f"拟合区间非法 / invalid window [{rmin:g}, {rmax:g}]")
    radii = np.geomspace(rmin, rmax, n)
    return np.stack([radii * np.cos(theta), radii * np.sin(theta)], axis=1)


@dataclass
class RayResidual:
    """一条射线上的残差样本与三个拟合 / residual samples on one ray with their fits"""
    theta: float
    radii: np.ndarray
    parallel: np.ndarray
    perpendicular: np.ndarray
    divergence: np.ndarray
    fits: Dict[str, Optional[DecayFit]] = field(default_factory=dict)

    def to_frame(self):
        import pandas as pd

        return pd.DataFrame({"r": self.radii, "f_par": np.abs(self.parallel),
                             "f_perp": np.abs(self.perpendicular), "div": self.divergence})


def _safe_fit(radii, values) -> Optional[DecayFit]:
    try:
        return fit_decay(radii, np.abs(values))
    except DecayFitError:
        return None


def ray_residual(source, op: OperatorKind, theta: float, window: Tuple[float, float], n: int = 24,
                 direction: Optional[float] = None,
                 basis: Optional[Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]] = None) -> RayResidual:
    """
    沿射线求算子残差并分解为平行/垂直分量
    Operator residual along a ray, split into parallel and perpendicular parts

    默认参考方向为射线方向；给定 direction 时用固定方向；
    basis(points) -> (e1, e2) 给出逐点的局部基 (尾流用共形基)。
    """
    pts = ray_points(theta, window, n)
    f, div = apply_operator(op, source, pts)
    if basis is not None:
        e1, e2 = basis(as_points(pts))
    else:
        angle = theta if direction is None else direction
        e1 = np.tile([np.cos(angle), np.sin(angle)], (n, 1))
        e2 = np.tile([-np.sin(angle), np.cos(angle)], (n, 1))
    par = np.einsum('ni,ni->n', f, e1)
    perp = np.einsum('ni,ni->n', f, e2)
    radii = np.hypot(pts[:, 0], pts[:, 1])
    result = RayResidual(float(theta), radii, par, perp, div)
    result.fits = {
        "parallel": _safe_fit(radii, par),
        "perpendicular": _safe_fit(radii, perp),
        "magnitude": _safe_fit(radii, np.linalg.norm(f, axis=1)),
        "divergence": _safe_fit(radii, div),
    }
    return result


def richardson_extrapolate(radii: Sequence[float], values, rate: float) -> np.ndarray:
    """
    按 value(R) = v∞ + c·R^{−rate} 最小二乘外推
    Least-squares extrapolation of value(R) = v_inf + c R^{-rate}
    """
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if r.size < 2 or r.size != v.shape[0]:
        raise DecayFitError("外推至少需要两个半径 / extrapolation needs at least two radii")
    design = np.stack([np.ones_like(r), r ** (-rate)], axis=1)
    coeffs, *_ = np.linalg.lstsq(design, v, rcond=None)
    out = coeffs[0]
    return out if out.size > 1 else out[:1]
