"""
相图表：每个参数点的衰减指数、尾流角度与物体受力
Phase-map table built from sweep results
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import numpy as np
import pandas as pd

from ..invariants.contour import contour_invariants
from ..residual.decay import DecayFitError
from ..solver.continuation import SweepPoint, SweepResult
from ..utils.config import Config
from ..utils.logger import get_logger
from .profiles import log_radii, ray_profile, wrap_angle

logger = get_logger(__name__)

PHASEMAP_COLUMNS = ["param1", "param2", "exponent", "mean_angle", "angle_std", "Fx", "Fy", "M", "status",
                    "force_norm", "force_angle", "angle_difference"]
ZERO_SPEED = 1e-14


@dataclass
class PhaseMapRow:
    param1: float
    param2: float
    exponent: float
    mean_angle: float
    angle_std: float
    body_force: Tuple[float, float]
    body_torque: float
    status: str

    @property
    def force_norm(self) -> float:
        return float(np.hypot(*self.body_force))

    @property
    def force_angle(self) -> float:
        return float(np.arctan2(self.body_force[1], self.body_force[0])) if self.force_norm > 0 else float("nan")

    @property
    def angle_difference(self) -> float:
        """净力方向与平均尾流角之差，(−π, π]"""
        if not (np.isfinite(self.force_angle) and np.isfinite(self.mean_angle)):
            return float("nan")
        return float(wrap_angle(self.force_angle - self.mean_angle))

    def to_record(self) -> dict:
        return {"param1": self.param1, "param2": self.param2, "exponent": self.exponent,
                "mean_angle": self.mean_angle, "angle_std": self.angle_std,
                "Fx": self.body_force[0], "Fy": self.body_force[1], "M": self.body_torque,
                "status": self.status, "force_norm": self.force_norm, "force_angle": self.force_angle,
                "angle_difference": self.angle_difference}


def _missing_row(point: SweepPoint, status: str) -> PhaseMapRow:
    nan = float("nan")
    return PhaseMapRow(point.param1, point.param2, nan, nan, float(np.sqrt(2.0)), (nan, nan), nan, status)


def phase_row(point: SweepPoint, window: Tuple[float, float], fold: str = "none",
              n_radii: int = 16) -> PhaseMapRow:
    """单个扫描点的相图行 / phase-map row for one sweep point"""
    solution = point.solution
    if not point.converged or solution is None:
        return _missing_row(point, point.status)

    profile = ray_profile(solution, log_radii(window, n_radii))
    if profile.d.max() <= ZERO_SPEED:
        return _missing_row(point, "zero-solution")
    try:
        exponent = profile.decay().exponent
        status = point.status
    except DecayFitError as e:
        logger.warning(f"衰减拟合失败 / decay fit failed at ({point.param1:g}, {point.param2:g}): {e}")
        exponent, status = float("nan"), "fit-failed"
    mean_angle, angle_std = profile.angle_stats(fold)

    grid = solution.grid
    # 受力算例中积分圆放在强迫支撑之外
    radius = grid.r_inner if solution.forcing_values is None else float(window[0])
    triple = contour_invariants(solution, solution.nu, radius, n_quad=max(64, grid.n_theta))
    return PhaseMapRow(point.param1, point.param2, float(exponent), mean_angle, angle_std,
                       (float(triple.force[0]), float(triple.force[1])), triple.torque, status)


def phase_map(sweep: Union[SweepResult, Iterable[SweepPoint]], window: Tuple[float, float],
              fold: str = "none", n_radii: int = 16) -> List[PhaseMapRow]:
    points = sweep.points.values() if isinstance(sweep, SweepResult) else sweep
    ordered = sorted(points, key=lambda p: (p.param1, p.param2))
    rows = [phase_row(p, window, fold, n_radii) for p in ordered]
    logger.info(f"相图: {len(rows)} 个参数点, 窗口 [{window[0]:g}, {window[1]:g}], fold={fold}")
    return rows


def phase_frame(rows: Iterable[PhaseMapRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_record() for row in rows], columns=PHASEMAP_COLUMNS)


def write_phasemap(rows: Iterable[PhaseMapRow], path, float_format: str = Config.FLOAT_FORMAT) -> Path:
    """phasemap.csv"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    phase_frame(rows).to_csv(path, index=False, float_format=float_format)
    return path
