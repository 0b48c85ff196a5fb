"""
ψ–ω 形式的离散定常Navier-Stokes方程
Discrete steady Navier-Stokes equations in stream-function/vorticity form

在 s = log r 下：
  R1 = ψ_ss + ψ_θθ − r²ω
  R2 = ω_ss + ω_θθ − ν(ψ_s ω_θ − ψ̂_θ ω_s) − r² ∇∧f,   ψ̂_θ = ψ_θ − Φ/(2π)
未知量 X = [ψ, ω]，残差与雅可比矩阵都是精确的离散导数。
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..fields.forcing import ForceField
from ..utils.logger import get_logger
from .boundary import BoundaryConditionSpec
from .grid import AnnularGrid

logger = get_logger(__name__)

# 单侧四点二阶差分 (2f_L − 5f_{L−1} + 4f_{L−2} − f_{L−3})·Δs⁻²
OPEN_PSI = [(0, 2.0), (-1, -5.0), (-2, 4.0), (-3, -1.0)]


def open_omega_stencil(ds: float) -> List[Tuple[int, float]]:
    """
    外圈 ω 的开边界行: ∂²ω/∂r² = 0，即 ω_ss − ω_s = 0 (乘以 Δs²)
    Open outer row for the vorticity, zero second derivative in r

    ω_s 项定出轴对称部分的斜率 (内部方程令其 ω_ss = 0)。
    """
    slope = [(0, 1.5 * ds), (-1, -2.0 * ds), (-2, 0.5 * ds)]
    rows = dict(OPEN_PSI)
    for offset, coeff in slope:
        rows[offset] = rows.get(offset, 0.0) - coeff
    return sorted(rows.items(), reverse=True)


def _ring_rows(grid: AnnularGrid, ring: int, stencil: Sequence[Tuple[int, float]]) -> sp.csr_matrix:
    """在第 ring 圈的每个节点放置径向模板 [(圈偏移, 系数)]"""
    nt = grid.n_theta
    rows, cols, vals = [], [], []
    base = ring * nt
    for offset, coeff in stencil:
        rows.append(base + np.arange(nt))
        cols.append(base + offset * nt + np.arange(nt))
        vals.append(np.full(nt, coeff))
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(grid.size, grid.size))


def _ring_mask(grid: AnnularGrid, rings) -> sp.csr_matrix:
    mask = np.zeros(grid.size)
    for ring in rings:
        mask[grid.ring(ring)] = 1.0
    return sp.diags(mask, format="csr")


class NavierStokesSystem:
    """
    离散系统 F(X) = L X − c + N(X)
    Discrete system with a constant linear part and a quadratic convective part
    """

    def __init__(self, grid: AnnularGrid, bc: Optional[BoundaryConditionSpec] = None,
                 forcing: Optional[ForceField] = None, flux: float = 0.0, nu: float = 1.0,
                 source_curl: Optional[np.ndarray] = None):
        self.grid = grid
        self.bc = bc or BoundaryConditionSpec()
        self.forcing = forcing
        self.flux = float(flux)
        self.nu = float(nu)
        self.ops = grid.operators

        n, last = grid.size, grid.n_r - 1
        r2 = grid.radius_of_nodes() ** 2
        curl = np.zeros(n)
        if forcing is not None:
            curl += forcing.curl(grid.points())
        if source_curl is not None:
            curl += np.asarray(source_curl, dtype=float).ravel()
        self.interior = _ring_mask(grid, range(1, last))
        self.curl_forcing = curl
        self._assemble_linear(r2, curl)

    @property
    def size(self) -> int:
        return 2 * self.grid.size

    def _assemble_linear(self, r2: np.ndarray, curl: np.ndarray):
        grid, ops, bc = self.grid, self.ops, self.bc
        n, nt, last, ds = grid.size, grid.n_theta, grid.n_r - 1, grid.ds
        lap = ops.dss + ops.dtt
        inner, outer = _ring_mask(grid, [0]), _ring_mask(grid, [last])
        zero = sp.csr_matrix((n, n))
        c_psi, c_omega = np.zeros(n), np.zeros(n)

        # ψ 行
        psi_psi = self.interior @ lap + _ring_rows(grid, 0, [(0, 1.0)])
        psi_omega = -self.interior @ sp.diags(r2)
        wall_psi, wall_dpsi = bc.wall_data(grid)
        c_psi[grid.ring(0)] = wall_psi
        if bc.outer == "open":
            # ψ_ss = 0，单侧四点模板，与第 L−1 圈方程无关
            psi_psi = psi_psi + _ring_rows(grid, last, OPEN_PSI)
        else:
            psi_psi = psi_psi + _ring_rows(grid, last, [(0, 1.0)])

        # ω 行
        omega_psi = zero
        omega_omega = self.interior @ lap
        c_omega += self.interior @ (r2 * curl)
        if bc.inner == "body" or bc.wall is not None:
            # 二阶壁面涡量: ψ_ss ≈ (−7ψ₀ + 8ψ₁ − ψ₂ − 6Δs g)/(2Δs²)
            jensen = [(0, -3.5 / ds ** 2), (1, 4.0 / ds ** 2), (2, -0.5 / ds ** 2)]
            omega_psi = _ring_rows(grid, 0, jensen) + inner @ ops.dtt
            omega_omega = omega_omega - inner @ sp.diags(r2)
            c_omega[grid.ring(0)] = 3.0 * wall_dpsi / ds
        else:
            omega_omega = omega_omega + _ring_rows(grid, 0, [(0, -3.0), (1, 4.0), (2, -1.0)])
        if bc.outer == "open":
            omega_omega = omega_omega + _ring_rows(grid, last, open_omega_stencil(ds))
        else:
            omega_omega = omega_omega + _ring_rows(grid, last, [(0, 1.0)])

        self.linear = sp.bmat([[psi_psi, psi_omega], [omega_psi, omega_omega]], format="csr")
        self.constant = np.concatenate([c_psi, c_omega])
        logger.debug(f"组装线性部分: {grid.describe()}, nnz = {self.linear.nnz}")

    def split(self, state: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = self.grid.size
        if state.shape != (2 * n,):
            raise ValueError(f"状态维数不匹配 / state has shape {state.shape}, expected ({2 * n},)")
        return state[:n], state[n:]

    def _convective_parts(self, psi, omega):
        ops = self.ops
        psi_s, psi_t = ops.ds @ psi, ops.dt @ psi - self.flux / (2.0 * np.pi)
        omega_s, omega_t = ops.ds @ omega, ops.dt @ omega
        return psi_s, psi_t, omega_s, omega_t

    def residual(self, state: np.ndarray) -> np.ndarray:
        psi, omega = self.split(state)
        out = self.linear @ state - self.constant
        if self.nu != 0.0:
            psi_s, psi_t, omega_s, omega_t = self._convective_parts(psi, omega)
            out[self.grid.size:] -= self.nu * (self.interior @ (psi_s * omega_t - psi_t * omega_s))
        return out

    def jacobian(self, state: np.ndarray) -> sp.csr_matrix:
        if self.nu == 0.0:
            return self.linear
        psi, omega = self.split(state)
        ops, n = self.ops, self.grid.size
        psi_s, psi_t, omega_s, omega_t = self._convective_parts(psi, omega)
        d_psi = sp.diags(omega_t) @ ops.ds - sp.diags(omega_s) @ ops.dt
        d_omega = sp.diags(psi_s) @ ops.dt - sp.diags(psi_t) @ ops.ds
        nonlinear = sp.bmat([[sp.csr_matrix((n, n)), sp.csr_matrix((n, n))],
                             [-self.nu * (self.interior @ d_psi), -self.nu * (self.interior @ d_omega)]],
                            format="csr")
        return (self.linear + nonlinear).tocsr()

    def zero_state(self) -> np.ndarray:
        return np.zeros(self.size)


def assemble_system(grid: AnnularGrid, bc: Optional[BoundaryConditionSpec], state: np.ndarray,
                    forcing: Optional[ForceField] = None, flux: float = 0.0, nu: float = 1.0):
    """返回 (残差向量, 稀疏雅可比) / residual vector and sparse Jacobian at ``state``"""
    system = NavierStokesSystem(grid, bc, forcing, flux, nu)
    return system.residual(state), system.jacobian(state)
