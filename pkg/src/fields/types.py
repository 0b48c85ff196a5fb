"""
流场类型定义
Flow field type definitions
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Protocol, Tuple, runtime_checkable

import jax.numpy as jnp
import numpy as np
import pandas as pd


class FieldError(Exception):
    """流场求值错误 Field evaluation error"""


class DomainError(FieldError, ValueError):
    """求值点超出定义域或有效区域 Point outside the domain of definition or validity"""


class ParameterError(FieldError, ValueError):
    """参数名称、长度或取值非法 Invalid parameter name, length or value"""


@dataclass(frozen=True)
class PolarPoint:
    """极坐标点 Polar point"""
    r: float
    theta: float  # (-π, π]

    def to_point(self) -> "Point":
        return Point(self.r * np.cos(self.theta), self.r * np.sin(self.theta))


@dataclass(frozen=True)
class Point:
    """笛卡尔坐标点 Cartesian point"""
    x1: float
    x2: float

    def __post_init__(self):
        if not (np.isfinite(self.x1) and np.isfinite(self.x2)):
            raise DomainError(f"非有限坐标 / non-finite point ({self.x1}, {self.x2})")

    @property
    def r(self) -> float:
        return float(np.hypot(self.x1, self.x2))

    def to_polar(self) -> PolarPoint:
        r = self.r
        if r == 0.0:
            raise DomainError("原点没有极角 / polar angle undefined at the origin")
        return PolarPoint(r, float(np.arctan2(self.x2, self.x1)))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2], dtype=float)


def as_points(points) -> np.ndarray:
    """把Point、Point列表或数组统一成(N,2)数组"""
    if isinstance(points, Point):
        return points.as_array()[None, :]
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], Point):
        return np.array([p.as_array() for p in points])
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"点数组形状必须为(N,2) / points must have shape (N, 2), got {arr.shape}")
    return arr


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass
class FlowJet:
    """
    一批点上的速度、压力及其梯度
    Velocity, pressure and their gradients at a batch of points

    grad_u[n, i, j] = ∂u_i/∂x_j
    """
    u: np.ndarray       # (N, 2)
    p: np.ndarray       # (N,)
    grad_u: np.ndarray  # (N, 2, 2)
    grad_p: np.ndarray  # (N, 2)

    @classmethod
    def zeros(cls, n: int) -> "FlowJet":
        return cls(np.zeros((n, 2)), np.zeros(n), np.zeros((n, 2, 2)), np.zeros((n, 2)))

    def __len__(self) -> int:
        return self.p.shape[0]

    def __add__(self, other: "FlowJet") -> "FlowJet":
        return FlowJet(self.u + other.u, self.p + other.p,
                       self.grad_u + other.grad_u, self.grad_p + other.grad_p)

    def __sub__(self, other: "FlowJet") -> "FlowJet":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "FlowJet":
        return FlowJet(factor * self.u, factor * self.p, factor * self.grad_u, factor * self.grad_p)

    @property
    def divergence(self) -> np.ndarray:
        return np.trace(self.grad_u, axis1=1, axis2=2)

    @property
    def vorticity(self) -> np.ndarray:
        return self.grad_u[:, 1, 0] - self.grad_u[:, 0, 1]

    @property
    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.u, axis=1)

    @property
    def convection(self) -> np.ndarray:
        """u·∇u"""
        return np.einsum('nij,nj->ni', self.grad_u, self.u)

    def rotated(self, angle: float) -> "FlowJet":
        """把向量和张量分量旋转angle (点本身不变)"""
        rot = rotation_matrix(angle)
        return FlowJet(self.u @ rot.T, self.p.copy(),
                       np.einsum('ij,njk,lk->nil', rot, self.grad_u, rot),
                       self.grad_p @ rot.T)

    def to_frame(self, points: np.ndarray) -> pd.DataFrame:
        points = as_points(points)
        return pd.DataFrame({
            'x1': points[:, 0], 'x2': points[:, 1],
            'u1': self.u[:, 0], 'u2': self.u[:, 1], 'p': self.p,
            'du1dx1': self.grad_u[:, 0, 0], 'du1dx2': self.grad_u[:, 0, 1],
            'du2dx1': self.grad_u[:, 1, 0], 'du2dx2': self.grad_u[:, 1, 1],
            'dpdx1': self.grad_p[:, 0], 'dpdx2': self.grad_p[:, 1],
        })


@runtime_checkable
class FlowSource(Protocol):
    """任何能在点上给出FlowJet的对象 Anything that evaluates to a FlowJet"""

    def jet(self, points) -> FlowJet:
        ...


@dataclass(frozen=True)
class CutoffProfile:
    """
    C²五次多项式截断函数 χ: r ≤ inner 时为0, r ≥ outer 时为1
    C² quintic cutoff χ, zero for r ≤ inner and one for r ≥ outer
    """
    inner: float = 1.0
    outer: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.inner < self.outer:
            raise ParameterError(f"截断区间非法 / invalid cutoff band [{self.inner}, {self.outer}]")

    def __call__(self, r):
        """jax可追踪 jax-traceable"""
        t = jnp.clip((r - self.inner) / (self.outer - self.inner), 0.0, 1.0)
        return t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)

    def value(self, r) -> np.ndarray:
        return np.asarray(self(jnp.asarray(r, dtype=float)))

    def derivative(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        t = np.clip((r - self.inner) / (self.outer - self.inner), 0.0, 1.0)
        return 30.0 * t ** 2 * (1.0 - t) ** 2 / (self.outer - self.inner)


class FieldKind(str, Enum):
    """解析解族 Closed-form field families"""
    STOKES_FUNDAMENTAL = "stokes-fundamental"
    ASYM_TERM0 = "asym0"
    ASYM_TERM1 = "asym1"
    ASYM_TERM2 = "asym2"
    FLUX_CARRIER = "flux-carrier"
    HARMONIC_VORTEX = "harmonic-vortex"
    HAMEL = "hamel"
    EULER_LEADING = "euler"
    WAKE = "wake"
    CROSS_CORRECTOR = "cross-corrector"
    PERTURB_ITERATE = "perturb"


@dataclass(frozen=True)
class KindSpec:
    """
    一个解析解族的注册信息
    Registry entry of one field family

    state(params, x, chi, options) -> [u1, u2, p] 须可被jax追踪
    """
    param_names: Tuple[str, ...]
    defaults: Dict[str, float]
    state: object
    singular_origin: bool = False     # r = 0 不在定义域内
    validity: str = "outer"           # 精确性声明的有效区域: outer | two-inner | wake | everywhere
    options: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    description: str = ""
