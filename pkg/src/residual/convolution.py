"""
Stokes卷积数值解 (渐近展开的参照解)
Numerical Stokes convolution u = E∗f, p = e∗f, used as the reference solution

远离力场支撑的点用以原点为中心的极坐标Gauss-Legendre×梯形公式；
靠近或位于支撑内的点用以 x 为中心的极坐标，径向分段几何加密，log奇性由 ρdρ 权吸收。
"""
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.special import roots_legendre

from ..fields.closed_forms import FOUR_PI
from ..fields.forcing import ForceField
from ..fields.types import FlowJet, as_points
from ..utils.logger import get_logger

logger = get_logger(__name__)


class QuadratureError(RuntimeError):
    """求积误差估计超过容差 / quadrature error estimate above tolerance"""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSpec:
    n_radial: int = 48
    n_angular: int = 96
    radius: Optional[float] = None    # 默认取力场的 support_radius
    near_factor: float = 1.5
    panels: int = 8
    rtol: float = 1e-6
    atol: float = 1e-13
    check: bool = True

    def doubled(self) -> "QuadratureSpec":
        return replace(self, n_radial=2 * self.n_radial, n_angular=2 * self.n_angular)


def gauss_legendre(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """[a, b] 上的 n 点 Gauss-Legendre 节点与权"""
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def graded_radial_rule(rho_max: float, panels: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """向 0 几何加密的分段GL / GL panels graded geometrically towards zero"""
    edges = np.concatenate([[0.0], rho_max * 2.0 ** -np.arange(panels, -1, -1)])
    nodes, weights = zip(*(gauss_legendre(n, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])))
    return np.concatenate(nodes), np.concatenate(weights)


def _kernels(d: np.ndarray):
    """d = x − y 处的 E 与 e"""
    r2 = np.einsum('mi,mi->m', d, d)
    E = (0.5 * np.log(r2)[:, None, None] * np.eye(2) - np.einsum('mi,mj->mij', d, d) / r2[:, None, None]) / FOUR_PI
    e = -d / (2.0 * np.pi * r2[:, None])
    return E, e


def _accumulate(d, w, f, jac) -> np.ndarray:
    """返回 [u1, u2, p, ∂u(4), ∂p(2)] 共9个分量"""
    E, e = _kernels(d)
    u = np.einsum('mij,mj,m->i', E, f, w)
    p = np.einsum('mj,mj,m->', e, f, w)
    grad_u = np.einsum('mij,mjk,m->ik', E, jac, w)
    grad_p = np.einsum('mj,mjk,m->k', e, jac, w)
    return np.concatenate([u, [p], grad_u.ravel(), grad_p])


class _Rule:
    """对一个 QuadratureSpec 缓存远场节点上的力场值"""

    def __init__(self, force: ForceField, spec: QuadratureSpec):
        self.force = force
        self.spec = spec
        self.radius = float(spec.radius or force.support_radius)
        rho, w_rho = gauss_legendre(spec.n_radial, 0.0, self.radius)
        alpha = 2.0 * np.pi * np.arange(spec.n_angular) / spec.n_angular
        rr, aa = np.meshgrid(rho, alpha, indexing="ij")
        self.far_nodes = np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=-1).reshape(-1, 2)
        self.far_weights = (w_rho[:, None] * rho[:, None] * (2.0 * np.pi / spec.n_angular)
                            * np.ones_like(aa)).ravel()
        self.far_f = force.values(self.far_nodes)
        self.far_jac = force.jacobian(self.far_nodes)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        spec = self.spec
        if np.hypot(*x) > spec.near_factor * self.radius:
            return _accumulate(x - self.far_nodes, self.far_weights, self.far_f, self.far_jac)
        rho, w_rho = graded_radial_rule(np.hypot(*x) + self.radius, spec.panels, spec.n_radial)
        alpha = 2.0 * np.pi * np.arange(spec.n_angular) / spec.n_angular
        rr, aa = np.meshgrid(rho, alpha, indexing="ij")
        offsets = np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=-1).reshape(-1, 2)
        weights = (w_rho[:, None] * rho[:, None] * (2.0 * np.pi / spec.n_angular) * np.ones_like(aa)).ravel()
        nodes = x + offsets
        return _accumulate(-offsets, weights, self.force.values(nodes), self.force.jacobian(nodes))


def _to_jet(rows: np.ndarray) -> FlowJet:
    return FlowJet(rows[:, :2].copy(), rows[:, 2].copy(), rows[:, 3:7].reshape(-1, 2, 2).copy(),
                   rows[:, 7:9].copy())


def stokes_convolution(force: ForceField, points, quadrature: Optional[QuadratureSpec] = None) -> FlowJet:
    """
    u = E∗f, ∇u = E∗∇f, p = e∗f, ∇p = e∗∇f
    Numerical convolution with the Stokes fundamental solution

    check=True 时用两倍分辨率比较估计误差，超差抛 QuadratureError；返回细网格结果。
    """
    spec = quadrature or QuadratureSpec()
    pts = as_points(points)
    coarse = _Rule(force, spec)
    rows = np.stack([coarse.evaluate(x) for x in pts])
    if not spec.check:
        return _to_jet(rows)

    fine = _Rule(force, spec.doubled())
    fine_rows = np.stack([fine.evaluate(x) for x in pts])
    scale = max(float(np.max(np.abs(fine_rows[:, :3]))), spec.atol)
    estimate = float(np.max(np.abs(fine_rows[:, :3] - rows[:, :3])))
    logger.debug(f"卷积求积误差估计 {estimate:.3g} (尺度 {scale:.3g})")
    if estimate > spec.rtol * scale + spec.atol:
        raise QuadratureError(
            f"Stokes卷积求积未收敛 / quadrature did not converge: estimate {estimate:.3g} "
            f"> {spec.rtol:g} * {scale:.3g}", estimate)
    return _to_jet(fine_rows)


class ConvolutionField:
    """把卷积结果包装成流场源 / wraps the convolution as a flow source"""

    def __init__(self, force: ForceField, quadrature: Optional[QuadratureSpec] = None):
        self.force = force
        self.quadrature = quadrature or QuadratureSpec()

    def jet(self, points) -> FlowJet:
        return stokes_convolution(self.force, points, self.quadrature)


def fit_first_moments(force: ForceField, radius: float = 200.0, n_points: int = 64,
                      quadrature: Optional[QuadratureSpec] = None) -> np.ndarray:
    """
    在半径 radius 的圆上用 E₀、E₁ 最小二乘拟合参照解，返回 C₁
    Recover C1 by least-squares fitting the far field against the first asymptotic term
    """
    from ..fields.analytic import eval_asym_term

    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    pts = radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    target = stokes_convolution(force, pts, quadrature).u.ravel()
    columns = []
    for order, size in ((0, 2), (1, 3)):
        for k in range(size):
            coeffs = np.zeros(size)
            coeffs[k] = 1.0
            columns.append(eval_asym_term(order, coeffs, pts).u.ravel())
    coeffs, *_ = np.linalg.lstsq(np.stack(columns, axis=1), target, rcond=None)
    return coeffs[2:5]


def paradox_slope(force: ForceField, window: Tuple[float, float] = (1e2, 1e3), n: int = 10,
                  quadrature: Optional[QuadratureSpec] = None) -> float:
    """
    沿垂直于 ∫f 的射线拟合 |u| 对 log r 的斜率 (Stokes佯谬)，期望 |F|/(4π)
    Slope of |u| against log r on the ray perpendicular to the net force
    """
    total = force_total(force, quadrature)
    angle = float(np.arctan2(total[1], total[0])) + 0.5 * np.pi
    radii = np.geomspace(window[0], window[1], n)
    pts = np.stack([radii * np.cos(angle), radii * np.sin(angle)], axis=1)
    speed = stokes_convolution(force, pts, quadrature).speed
    slope, _ = np.polyfit(np.log(radii), speed, 1)
    return float(slope)


def force_total(force: ForceField, quadrature: Optional[QuadratureSpec] = None) -> np.ndarray:
    rule = _Rule(force, replace(quadrature or QuadratureSpec(), check=False))
    return np.einsum('mi,m->i', rule.far_f, rule.far_weights)
