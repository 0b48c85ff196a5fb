"""
尾流解的方程残差衰减阶
Decay orders of the Navier-Stokes residual of the wake field
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..residual.decay import RayResidual, ray_residual
from ..residual.operators import OperatorKind
from .conformal import WAKE_EXPONENT, conformal_basis
from .wake_field import WakeParameters, wake_field

RAY_OFFSETS = (-0.3, -0.2, -0.1, -0.05, 0.05, 0.1, 0.2, 0.3)
DEFAULT_WINDOW = (1e2, 1e4)


def default_rays(force) -> List[float]:
    """尾流扇区内的8条射线 θ₀ ± {0.05, 0.1, 0.2, 0.3}"""
    theta0 = WakeParameters.from_force(force).theta0
    return [theta0 + d for d in RAY_OFFSETS]


def wake_basis(theta0: float):
    """旋转到尾流坐标系后的共形基 ē₁, ē₂ (回到物理坐标)"""
    c, s = np.cos(theta0), np.sin(theta0)
    rot = np.array([[c, -s], [s, c]])

    def basis(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        e1, e2 = conformal_basis(points @ rot, WAKE_EXPONENT)
        return e1 @ rot.T, e2 @ rot.T

    return basis


def wake_residual_orders(force, rays: Optional[Sequence[float]] = None,
                         window: Tuple[float, float] = DEFAULT_WINDOW, n_samples: int = 24,
                         terms: str = "full") -> List[RayResidual]:
    """
    沿各射线求 f = Δu − ∇p − u·∇u 并拟合 ē₁/ē₂ 分量的衰减指数
    Fit the decay of the residual components along each ray

    期望 parallel ≲ r^{−7/3}，perpendicular ≲ r^{−8/3}。
    """
    params = WakeParameters.from_force(force)
    field = wake_field(params.force, terms)
    basis = wake_basis(params.theta0)
    rays = default_rays(params.force) if rays is None else list(rays)
    op = OperatorKind.navier_stokes(1.0)
    return [ray_residual(field, op, theta, window, n_samples, basis=basis) for theta in rays]
