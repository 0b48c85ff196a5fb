"""
边界条件
Boundary conditions of the annular solver

内边界 body: 速度取 Stokes 渐近项 u* = C₀·E₀ + C₁·E₁ 在圆上的值；
内边界 regular: 小孔上 ψ = 0 且 ω 径向导数为零 (受力算例)；
外边界 open: ψ_ss = 0 (沿 s = log r 线性外推) 且 ∂²ω/∂r² = 0；dirichlet: ψ = ω = 0。
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..fields.types import ParameterError
from .grid import AnnularGrid

INNER_KINDS = ("body", "regular")
OUTER_KINDS = ("open", "dirichlet")
FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class PrescribedWall:
    """直接给定内圈上的 ψ 与 ∂ψ/∂s (用于精确解注入)"""
    psi: np.ndarray
    dpsi_ds: np.ndarray


@dataclass(frozen=True)
class BoundaryConditionSpec:
    c0: Tuple[float, float] = (0.0, 0.0)
    c1: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    inner: str = "body"
    outer: str = "open"
    wall: Optional[PrescribedWall] = field(default=None, compare=False)

    def __post_init__(self):
        if self.inner not in INNER_KINDS:
            raise ParameterError(f"未知内边界 / unknown inner condition: {self.inner}")
        if self.outer not in OUTER_KINDS:
            raise ParameterError(f"未知外边界 / unknown outer condition: {self.outer}")
        if len(self.c0) != 2 or len(self.c1) != 3:
            raise ParameterError("c0 需2个分量, c1 需3个分量 / c0 needs 2 and c1 needs 3 components")

    @classmethod
    def from_parameters(cls, mode: str, param1: float, param2: float, **kwargs) -> "BoundaryConditionSpec":
        """
        force:  C₀ = (−𝓕, 0), C₁ = (0, 0, −𝓜)
        strain: C₀ = 0,       C₁ = (−𝓐, 0, −𝓜)
        """
        if mode == "force":
            return cls((-float(param1), 0.0), (0.0, 0.0, -float(param2)), **kwargs)
        if mode == "strain":
            return cls((0.0, 0.0), (-float(param1), 0.0, -float(param2)), **kwargs)
        raise ParameterError(f"边界参数化只支持 force/strain / unknown boundary mode: {mode}")

    @property
    def is_homogeneous(self) -> bool:
        return not any(self.c0) and not any(self.c1) and self.wall is None

    def velocity(self, theta) -> np.ndarray:
        """
        单位圆上 u* 的笛卡尔分量 (N,2)
        u* = −(1/4π)[C₀·(cosθ, sinθ)e_r + C₁·(cos2θ e_r, sin2θ e_r, e_θ)]
        """
        th = np.asarray(theta, dtype=float)
        c01, c02 = self.c0
        c11, c12, c13 = self.c1
        u_r = -(c01 * np.cos(th) + c02 * np.sin(th) + c11 * np.cos(2 * th) + c12 * np.sin(2 * th)) / FOUR_PI
        u_t = -c13 / FOUR_PI * np.ones_like(th)
        return np.stack([u_r * np.cos(th) - u_t * np.sin(th), u_r * np.sin(th) + u_t * np.cos(th)], axis=1)

    def wall_data(self, grid: AnnularGrid) -> Tuple[np.ndarray, np.ndarray]:
        """内圈上的 (ψ, ∂ψ/∂s)"""
        if self.wall is not None:
            return np.asarray(self.wall.psi, dtype=float), np.asarray(self.wall.dpsi_ds, dtype=float)
        th = grid.theta
        if self.inner == "regular":
            return np.zeros_like(th), np.zeros_like(th)
        c01, c02 = self.c0
        c11, c12, c13 = self.c1
        r0 = grid.r_inner
        psi = r0 / FOUR_PI * (c01 * np.sin(th) - c02 * np.cos(th)
                              + 0.5 * c11 * np.sin(2 * th) - 0.5 * c12 * np.cos(2 * th))
        return psi, np.full_like(th, -r0 * c13 / FOUR_PI)

    def to_dict(self) -> Dict[str, object]:
        return {"c0": list(self.c0), "c1": list(self.c1), "inner": self.inner, "outer": self.outer}
