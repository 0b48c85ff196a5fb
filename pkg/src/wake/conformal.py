"""
共形坐标 z ↦ z̄ = z^p
Conformal coordinates z ↦ z̄ = z^p (principal branch)
"""
from dataclasses import dataclass

import numpy as np

from ..fields.types import DomainError, ParameterError, Point

WAKE_EXPONENT = 1.0 / 3.0


@dataclass(frozen=True)
class ConformalCoords:
    """共形坐标 x̄ = r^p (cos pθ, sin pθ)"""
    xbar1: float
    xbar2: float
    p: float = WAKE_EXPONENT

    @property
    def radius(self) -> float:
        """|x̄| = r^p"""
        return float(np.hypot(self.xbar1, self.xbar2))

    @property
    def scale_factor(self) -> float:
        """h₁ = h₂ = r^{1−p}/p"""
        r = self.radius ** (1.0 / self.p)
        return r ** (1.0 - self.p) / self.p


def _check_exponent(p: float):
    if not 0.0 < p < 1.0:
        raise ParameterError(f"共形指数须在 (0,1) / conformal exponent must lie in (0, 1), got {p}")


def to_conformal(x: Point, p: float = WAKE_EXPONENT) -> ConformalCoords:
    """
    主分支幂映射
    Principal-branch power map; θ = π maps to the upper edge of the slit
    """
    _check_exponent(p)
    if x.r == 0.0:
        raise DomainError("共形映射在原点无定义 / conformal map undefined at the origin")
    polar = x.to_polar()
    rp = polar.r ** p
    return ConformalCoords(rp * np.cos(p * polar.theta), rp * np.sin(p * polar.theta), p)


def from_conformal(c: ConformalCoords) -> Point:
    """逆映射 inverse map"""
    _check_exponent(c.p)
    rho = c.radius
    if rho == 0.0:
        raise DomainError("共形映射在原点无定义 / conformal map undefined at the origin")
    phi = np.arctan2(c.xbar2, c.xbar1)
    if abs(phi) > c.p * np.pi + 1e-12:
        raise DomainError("点不在共形扇区内 / point outside the image sector of the map")
    r = rho ** (1.0 / c.p)
    return Point(r * np.cos(phi / c.p), r * np.sin(phi / c.p))


def conformal_map(points: np.ndarray, p: float = WAKE_EXPONENT) -> np.ndarray:
    """(N,2) 批量版本 batched version"""
    r = np.hypot(points[:, 0], points[:, 1])
    theta = np.arctan2(points[:, 1], points[:, 0])
    rp = r ** p
    return np.stack([rp * np.cos(p * theta), rp * np.sin(p * theta)], axis=1)


def conformal_basis(points: np.ndarray, p: float = WAKE_EXPONENT):
    """
    共形坐标线的单位切向量 ē₁, ē₂
    Unit tangents of the conformal coordinate lines, each of shape (N, 2)
    """
    theta = np.arctan2(points[:, 1], points[:, 0])
    angle = (1.0 - p) * theta
    e1 = np.stack([np.cos(angle), np.sin(angle)], axis=1)
    e2 = np.stack([-np.sin(angle), np.cos(angle)], axis=1)
    return e1, e2
