"""
Euler首项的角向ODE与一阶修正
Angular ODE of the Euler leading term and its first correction

φ₀ = A√(1 − λcos(θ−θ₀)) 满足 2φφ″ + 2φ′² + φ² = A²；
修正 φ₁ 满足 (4/3)(φ₀⁴φ₁′)′ + (φ₀+4φ₀″)φ₀³φ₁ = R，用Fourier配点法在圆周上求解。
"""
from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np
from scipy.linalg import lu_factor, lu_solve, toeplitz

from ..fields.closed_forms import check_euler_lambda, euler_profile
from ..fields.types import ParameterError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MIN_MODES = 32
MAX_CONDITION = 1e12


class EulerCorrectionError(RuntimeError):
    """配点线性系统病态或解不满足方程 / ill-conditioned or inaccurate collocation solve"""


def _derivatives(amp, lam, theta0, order: int = 4):
    """返回 [φ₀, φ₀′, …] 的批量函数 / batched derivatives of φ₀ up to ``order``"""
    fns = [lambda t: euler_profile(amp, lam, theta0, t)]
    for _ in range(order):
        fns.append(jax.grad(fns[-1]))
    return [jax.vmap(f) for f in fns]


def euler_ode_residual(amp: float, lam: float, theta0: float, theta, scale: float = 1.0) -> np.ndarray:
    """
    2φφ″ + 2φ′² + φ² − A²，φ = scale·φ₀
    Residual of the profile ODE; scale != 1 perturbs the closed-form profile
    """
    check_euler_lambda(lam)
    th = jnp.atleast_1d(jnp.asarray(theta, dtype=float))
    d0, d1, d2 = (f(th) for f in _derivatives(amp, lam, theta0, 2))
    phi, dphi, ddphi = scale * d0, scale * d1, scale * d2
    return np.asarray(2.0 * phi * ddphi + 2.0 * dphi ** 2 + phi ** 2 - amp ** 2)


def euler_identity(amp: float, lam: float, theta0: float, theta) -> np.ndarray:
    """(φ₀ + 4φ₀″)φ₀³，恒等于 A⁴(1−λ²)"""
    check_euler_lambda(lam)
    th = jnp.atleast_1d(jnp.asarray(theta, dtype=float))
    d0, _, d2 = (f(th) for f in _derivatives(amp, lam, theta0, 2))
    return np.asarray((d0 + 4.0 * d2) * d0 ** 3)


def correction_source(amp: float, lam: float, mu: float, theta0: float, theta) -> np.ndarray:
    """R = (φ₀³/6)[16φ₀⁗ − 16μφ₀‴ + 40φ₀″ − 4μφ₀′ + 9φ₀]"""
    th = jnp.atleast_1d(jnp.asarray(theta, dtype=float))
    d0, d1, d2, d3, d4 = (f(th) for f in _derivatives(amp, lam, theta0, 4))
    return np.asarray(d0 ** 3 / 6.0 * (16.0 * d4 - 16.0 * mu * d3 + 40.0 * d2 - 4.0 * mu * d1 + 9.0 * d0))


def fourier_differentiation_matrix(n: int) -> np.ndarray:
    """偶数 n 的周期谱微分矩阵 / periodic spectral differentiation matrix for even n"""
    h = 2.0 * np.pi / n
    k = np.arange(1, n)
    column = np.concatenate([[0.0], 0.5 * (-1.0) ** k / np.tan(k * h / 2.0)])
    return toeplitz(column, -column)


@dataclass
class EulerCorrection:
    theta: np.ndarray
    phi1: np.ndarray
    integral: float
    mean: float
    expected_integral: float
    residual_norm: float
    condition: float

    @property
    def flux(self) -> float:
        """可解性所需通量 Φ = −∫φ₁"""
        return -self.integral

    @property
    def integral_error(self) -> float:
        return abs(self.integral - self.expected_integral)


def solve_euler_correction(amp: float, lam: float, mu: float, n_modes: int = 64,
                           theta0: float = 0.0) -> EulerCorrection:
    """
    Fourier配点求解 φ₁
    Fourier collocation solve for the Euler correction φ₁

    期望 ∫φ₁ = 3π/√(1−λ²)，与 μ 无关。
    """
    check_euler_lambda(lam)
    if n_modes < MIN_MODES or n_modes % 2:
        raise ParameterError(f"n_modes 须为不小于 {MIN_MODES} 的偶数 / n_modes must be even and >= {MIN_MODES}")
    theta = 2.0 * np.pi * np.arange(n_modes) / n_modes
    d = fourier_differentiation_matrix(n_modes)
    d0, _, d2 = (np.asarray(f(jnp.asarray(theta))) for f in _derivatives(amp, lam, theta0, 2))
    coefficient = (d0 + 4.0 * d2) * d0 ** 3
    operator = 4.0 / 3.0 * d @ (np.diag(d0 ** 4) @ d) + np.diag(coefficient)
    rhs = correction_source(amp, lam, mu, theta0, theta)

    condition = float(np.linalg.cond(operator))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise EulerCorrectionError(f"配点矩阵病态 / collocation matrix ill-conditioned (cond = {condition:.3g})")
    phi1 = lu_solve(lu_factor(operator), rhs)
    residual = float(np.linalg.norm(operator @ phi1 - rhs) / max(np.linalg.norm(rhs), 1e-300))
    if residual > 1e-8:
        raise EulerCorrectionError(f"配点解不准确 / collocation residual {residual:.3g}")

    integral = float(2.0 * np.pi * phi1.mean())
    expected = 3.0 * np.pi / np.sqrt(1.0 - lam ** 2)
    logger.debug(f"Euler修正: λ={lam}, μ={mu}, ∫φ₁={integral:.12g} (期望 {expected:.12g}), cond={condition:.3g}")
    return EulerCorrection(theta, phi1, integral, float(phi1.mean()), float(expected), residual, condition)
