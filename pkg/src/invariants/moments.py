"""
力场的矩系数 C₀, C₁, C₂
Moment coefficients of a force field
"""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import roots_legendre

from ..fields.forcing import ForceField


@dataclass(frozen=True)
class MomentQuadrature:
    """圆盘上 GL(径向) × 梯形(角向)，n_angular 取8的倍数保证二面体对称"""
    n_radial: int = 256
    n_angular: int = 512
    radius: Optional[float] = None

    def nodes(self, support_radius: float) -> Tuple[np.ndarray, np.ndarray]:
        radius = float(self.radius or support_radius)
        x, w = roots_legendre(self.n_radial)
        rho = 0.5 * radius * (x + 1.0)
        w_rho = 0.5 * radius * w
        alpha = 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular
        rr, aa = np.meshgrid(rho, alpha, indexing="ij")
        points = np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=-1).reshape(-1, 2)
        weights = (w_rho[:, None] * rho[:, None] * np.full_like(aa, 2.0 * np.pi / self.n_angular)).ravel()
        return points, weights


@dataclass(frozen=True)
class MomentCoefficients:
    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.c0, self.c1, self.c2])

    def to_dict(self) -> Dict[str, float]:
        names = ("C01", "C02", "C11", "C12", "C13", "C21", "C22", "C23", "C24")
        return dict(zip(names, (float(v) for v in self.as_vector())))

    @property
    def force(self) -> np.ndarray:
        return self.c0

    @property
    def torque(self) -> float:
        return float(self.c1[2])


def moment_integrands(points: np.ndarray, f: np.ndarray) -> np.ndarray:
    """(N, 9) 的被积函数 / the nine moment integrands"""
    x1, x2 = points[:, 0], points[:, 1]
    f1, f2 = f[:, 0], f[:, 1]
    return np.stack([
        f1, f2,
        x1 * f1 - x2 * f2, x1 * f2 + x2 * f1, x1 * f2 - x2 * f1,
        (x1 ** 2 - x2 ** 2) * f1 - 2.0 * x1 * x2 * f2,
        (x2 ** 2 - x1 ** 2) * f2 - 2.0 * x1 * x2 * f1,
        2.0 * x1 * x2 * f2 - 3.0 * x2 ** 2 * f1 - x1 ** 2 * f1,
        3.0 * x1 ** 2 * f2 + x2 ** 2 * f2 - 2.0 * x1 * x2 * f1,
    ], axis=1)


def moment_coeffs(force: ForceField, quadrature: Optional[MomentQuadrature] = None) -> MomentCoefficients:
    """C₀ = ∫f，C₁、C₂ 为一阶、二阶矩组合"""
    quadrature = quadrature or MomentQuadrature()
    points, weights = quadrature.nodes(force.support_radius)
    totals = weights @ moment_integrands(points, force.values(points))
    return MomentCoefficients(totals[:2], totals[2:5], totals[5:])


def moment_envelope(force: ForceField, quadrature: Optional[MomentQuadrature] = None) -> float:
    """∫|f|(1+|x|²)，对称性表零判据的尺度"""
    quadrature = quadrature or MomentQuadrature()
    points, weights = quadrature.nodes(force.support_radius)
    f = force.values(points)
    return float(weights @ (np.linalg.norm(f, axis=1) * (1.0 + np.einsum('ni,ni->n', points, points))))


def force_integral(force: ForceField, quadrature: Optional[MomentQuadrature] = None) -> np.ndarray:
    return moment_coeffs(force, quadrature).c0


def torque_integral(force: ForceField, quadrature: Optional[MomentQuadrature] = None) -> float:
    return moment_coeffs(force, quadrature).torque
