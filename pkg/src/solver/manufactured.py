"""
精确解注入与截断误差
Exact-state injection for truncation-error studies

把连续流函数在网格上取值作为离散状态，连续方程的残差作为旋度强迫加回去，
离散残差即为截断误差。
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import jax
import jax.numpy as jnp
import numpy as np

from ..fields.types import ParameterError
from .boundary import BoundaryConditionSpec, PrescribedWall
from .grid import AnnularGrid
from .system import NavierStokesSystem

INJECTED_KINDS = ("hamel", "harmonic-vortex")


def _stream(kind: str, params: Dict[str, float]) -> Tuple[Callable, float]:
    """返回 (单值流函数, 通量 Φ)"""
    if kind == "hamel":
        amp, mu = params.get("A", 1.0), params.get("mu", 0.0)
        return (lambda x: amp * jnp.dot(x, x) ** 0.25 + 0.5 * mu * jnp.log(jnp.dot(x, x))), -3.0 * np.pi
    if kind == "harmonic-vortex":
        # 核心光滑化的调和涡，远场为 −(M/4π) log r
        m, core = params.get("M", 4.0 * np.pi), params.get("core", 1.0)
        return (lambda x: -m / (8.0 * np.pi) * jnp.log(jnp.dot(x, x) + core ** 2)), 0.0
    raise ParameterError(f"不支持注入的解族 / cannot inject '{kind}', expected one of {INJECTED_KINDS}")


@dataclass
class InjectedState:
    kind: str
    grid: AnnularGrid
    state: np.ndarray
    wall: PrescribedWall
    source_curl: np.ndarray
    flux: float
    nu: float

    def system(self, outer: str = "open") -> NavierStokesSystem:
        bc = BoundaryConditionSpec(inner="body", outer=outer, wall=self.wall)
        return NavierStokesSystem(self.grid, bc, flux=self.flux, nu=self.nu, source_curl=self.source_curl)

    def residual_norm(self, outer: str = "open") -> float:
        """离散残差的均方根 / RMS of the discrete residual"""
        res = self.system(outer).residual(self.state)
        return float(np.sqrt(np.mean(res ** 2)))


def manufactured_forcing(psi_fn: Callable, flux: float, nu: float, points: np.ndarray) -> np.ndarray:
    """连续残差 Δω − ν u·∇ω，作为旋度强迫 / continuous vorticity residual of the injected field"""
    def total(x):
        return psi_fn(x) - flux / (2.0 * np.pi) * jnp.arctan2(x[1], x[0])

    def omega(x):
        return jnp.trace(jax.hessian(psi_fn)(x))

    def residual(x):
        g = jax.grad(total)(x)
        u = jnp.array([-g[1], g[0]])
        return jnp.trace(jax.hessian(omega)(x)) - nu * jnp.dot(u, jax.grad(omega)(x))

    return np.asarray(jax.jit(jax.vmap(residual))(jnp.asarray(points)))


def injected_state(kind: str, grid: AnnularGrid, nu: float = 1.0, **params) -> InjectedState:
    psi_fn, flux = _stream(kind, params)
    points = jnp.asarray(grid.points())
    psi = np.asarray(jax.vmap(psi_fn)(points))
    omega = np.asarray(jax.vmap(lambda x: jnp.trace(jax.hessian(psi_fn)(x)))(points))
    wall_pts = points[grid.ring(0)]
    dpsi_ds = np.asarray(jax.vmap(lambda x: jnp.dot(x, jax.grad(psi_fn)(x)))(wall_pts))
    wall = PrescribedWall(psi[grid.ring(0)].copy(), dpsi_ds)
    curl = manufactured_forcing(psi_fn, flux, nu, grid.points())
    return InjectedState(kind, grid, np.concatenate([psi, omega]), wall, curl, flux, nu)


def truncation_rates(kind: str, grid: AnnularGrid, levels: int = 3, nu: float = 1.0,
                     **params) -> Tuple[List[float], List[float]]:
    """
    逐次加密网格上的残差与收敛阶 log₂(‖R_h‖/‖R_{h/2}‖)
    Residual norms on successively refined grids and the observed orders
    """
    norms = []
    for _ in range(levels):
        norms.append(injected_state(kind, grid, nu, **params).residual_norm())
        grid = grid.refined()
    rates = [float(np.log2(a / b)) for a, b in zip(norms[:-1], norms[1:])]
    return norms, rates
