"""
射线剖面 d(r) = max_θ |u|, a(r) = argmax_θ |u|
Ray profiles of the speed and the angle of its maximum
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..fields.types import ParameterError
from ..residual.decay import DecayFit, fit_decay
from ..utils.config import Config

FOLDS = ("none", "pi")
MAX_ANGLE_STD = float(np.sqrt(2.0))
DEGENERATE_RTOL = 1e-9
DEFAULT_N_THETA = 720


def wrap_angle(angle):
    """映射到 (−π, π]"""
    wrapped = np.angle(np.exp(1j * np.asarray(angle, dtype=float)))
    return np.where(np.isclose(wrapped, -np.pi), np.pi, wrapped)


def circular_stats(angles: Sequence[float], fold: str = "none") -> Tuple[float, float]:
    """
    圆周均值与角偏差 √(2(1−R))；fold="pi" 时按倍角 (模 π) 统计
    Circular mean and angular deviation; fold="pi" works on doubled angles
    """
    if fold not in FOLDS:
        raise ParameterError(f"未知折叠方式 / unknown fold '{fold}', expected one of {FOLDS}")
    arr = np.asarray(angles, dtype=float).ravel()
    arr = arr[np.isfinite(arr)]
    if arr.size == 0:
        return float("nan"), MAX_ANGLE_STD
    k = 2.0 if fold == "pi" else 1.0
    resultant = np.mean(np.exp(1j * k * arr))
    length = min(1.0, float(np.abs(resultant)))
    mean = float(np.angle(resultant) / k) if length > 0.0 else float("nan")
    return mean, float(np.sqrt(2.0 * (1.0 - length)))


@dataclass
class RayProfile:
    radii: np.ndarray
    d: np.ndarray
    a: np.ndarray
    degenerate: np.ndarray   # |u| 与 θ 无关的半径，argmax 无意义
    n_maxima: np.ndarray     # 与最大值相等 (相对 1e-6) 的局部极大个数

    def __post_init__(self):
        if np.any(np.diff(self.radii) <= 0.0):
            raise ParameterError("剖面半径须严格递增 / profile radii must be strictly increasing")

    def angle_stats(self, fold: str = "none") -> Tuple[float, float]:
        """退化半径不参与统计；全部退化时 std 取最大值"""
        keep = ~self.degenerate
        if not np.any(keep):
            return float("nan"), MAX_ANGLE_STD
        return circular_stats(self.a[keep], fold)

    def decay(self, window: Optional[Tuple[float, float]] = None) -> DecayFit:
        mask = np.ones_like(self.radii, dtype=bool)
        if window is not None:
            mask = (self.radii >= window[0] * (1 - 1e-12)) & (self.radii <= window[1] * (1 + 1e-12))
        return fit_decay(self.radii[mask], self.d[mask])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"r": self.radii, "d": self.d, "a": self.a})

    def to_csv(self, path, float_format: str = Config.FLOAT_FORMAT) -> Path:
        """profile.csv: r, d, a"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=float_format)
        return path


def _sample_angles(source, n_theta: Optional[int]) -> np.ndarray:
    grid = getattr(source, "grid", None)
    if n_theta is None and grid is not None:
        return np.asarray(grid.theta, dtype=float)
    n = n_theta or DEFAULT_N_THETA
    return 2.0 * np.pi * np.arange(n) / n


def ray_profile(source, radii: Sequence[float], n_theta: Optional[int] = None) -> RayProfile:
    """
    每个半径的圆上取 max |u| 与其角度；网格解默认用网格角度
    For each radius, sample the circle and record the maximum speed and its angle
    """
    radii = np.asarray(radii, dtype=float).ravel()
    theta = _sample_angles(source, n_theta)
    ring = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    points = (radii[:, None, None] * ring[None, :, :]).reshape(-1, 2)
    speed = source.jet(points).speed.reshape(radii.size, theta.size)

    d = speed.max(axis=1)
    idx = speed.argmax(axis=1)
    a = wrap_angle(theta[idx])
    spread = speed.max(axis=1) - speed.min(axis=1)
    degenerate = spread <= DEGENERATE_RTOL * np.maximum(d, np.finfo(float).tiny)

    neighbours = np.maximum(np.roll(speed, 1, axis=1), np.roll(speed, -1, axis=1))
    peaks = (speed >= neighbours) & (speed >= (1.0 - 1e-6) * d[:, None])
    n_maxima = np.where(degenerate, 0, peaks.sum(axis=1))
    return RayProfile(radii, d, a, degenerate, n_maxima)


def log_radii(window: Tuple[float, float], n: int = 16) -> np.ndarray:
    return np.geomspace(window[0], window[1], n)
