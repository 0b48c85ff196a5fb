"""
网格解及其后处理
Grid solution: velocity, pressure recovery, interpolation and persistence
"""
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import RectBivariateSpline

from ..fields.types import DomainError, FlowJet, as_points
from .grid import AnnularGrid

SPLINE_PAD = 4


@dataclass
class GridSolution:
    """
    ψ、ω 网格值与产生它的参数
    Stream function and vorticity on the grid, with the parameters that produced them

    ψ 为单值部分；总流函数为 ψ − Φθ/(2π)。
    """
    grid: AnnularGrid
    psi: np.ndarray                # (n_r, n_theta)
    omega: np.ndarray              # (n_r, n_theta)
    flux: float = 0.0
    nu: float = 1.0
    params: Dict[str, Any] = field(default_factory=dict)
    status: str = "converged"
    forcing_values: Optional[np.ndarray] = None   # (n_r·n_theta, 2)

    @classmethod
    def from_state(cls, grid: AnnularGrid, state: np.ndarray, **kwargs) -> "GridSolution":
        n = grid.size
        return cls(grid, state[:n].reshape(grid.shape).copy(), state[n:].reshape(grid.shape).copy(), **kwargs)

    def state(self) -> np.ndarray:
        return np.concatenate([self.psi.ravel(), self.omega.ravel()])

    @cached_property
    def _polar_velocity(self):
        ops, r = self.grid.operators, self.grid.radius_of_nodes()
        psi = self.psi.ravel()
        u_r = -(ops.dt @ psi - self.flux / (2.0 * np.pi)) / r
        u_t = (ops.ds @ psi) / r
        return u_r, u_t

    def velocity(self) -> np.ndarray:
        """(n_r, n_theta, 2) 笛卡尔速度"""
        u_r, u_t = self._polar_velocity
        th = np.tile(self.grid.theta, self.grid.n_r)
        u = np.stack([u_r * np.cos(th) - u_t * np.sin(th), u_r * np.sin(th) + u_t * np.cos(th)], axis=1)
        return u.reshape(self.grid.n_r, self.grid.n_theta, 2)

    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.velocity(), axis=2)

    @cached_property
    def _pressure(self) -> np.ndarray:
        """
        沿内圈再沿径向积分动量方程 (Bernoulli形式)
        p = −ν|u|²/2 + q，∇q = ∇⊥ω − νω ẑ×u − f
        """
        grid, ops = self.grid, self.grid.operators
        r = grid.radius_of_nodes()
        th = np.tile(grid.theta, grid.n_r)
        omega = self.omega.ravel()
        u_r, u_t = self._polar_velocity
        if self.forcing_values is not None:
            f = self.forcing_values
            f_r = f[:, 0] * np.cos(th) + f[:, 1] * np.sin(th)
            f_t = -f[:, 0] * np.sin(th) + f[:, 1] * np.cos(th)
        else:
            f_r = f_t = np.zeros_like(r)
        dq_ds = (-(ops.dt @ omega) + r * self.nu * omega * u_t - r * f_r).reshape(grid.shape)
        dq_dt = ((ops.ds @ omega) - r * self.nu * omega * u_r - r * f_t).reshape(grid.shape)

        ring = dq_dt[0] - dq_dt[0].mean()
        closed = np.concatenate([ring, ring[:1]])
        theta = np.concatenate([grid.theta, [2.0 * np.pi]])
        q0 = cumulative_trapezoid(closed, theta, initial=0.0)[:-1]
        q = q0[None, :] + cumulative_trapezoid(dq_ds, grid.s, axis=0, initial=0.0)
        p = q - 0.5 * self.nu * (u_r ** 2 + u_t ** 2).reshape(grid.shape)
        return p - p[-1].mean()

    def pressure(self) -> np.ndarray:
        """(n_r, n_theta)，外圈平均为零 / zero mean on the outer ring"""
        return self._pressure

    @cached_property
    def _splines(self):
        grid = self.grid
        pad = SPLINE_PAD
        theta = np.concatenate([grid.theta[-pad:] - 2.0 * np.pi, grid.theta, grid.theta[:pad] + 2.0 * np.pi])

        def spline(values):
            ext = np.concatenate([values[:, -pad:], values, values[:, :pad]], axis=1)
            return RectBivariateSpline(grid.s, theta, ext, kx=3, ky=3)

        u = self.velocity()
        return spline(u[:, :, 0]), spline(u[:, :, 1]), spline(self.pressure())

    def jet(self, points) -> FlowJet:
        """
        双三次样条插值 (log r, θ)
        Bicubic spline interpolation in (log r, theta)
        """
        pts = as_points(points)
        r = np.hypot(pts[:, 0], pts[:, 1])
        if np.any(r < self.grid.r_inner * (1 - 1e-12)) or np.any(r > self.grid.r_outer * (1 + 1e-12)):
            raise DomainError(f"点在网格区域外 / points outside [{self.grid.r_inner:g}, {self.grid.r_outer:g}]")
        s = np.clip(np.log(r), self.grid.s[0], self.grid.s[-1])
        th = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * np.pi)
        c, sn = np.cos(th), np.sin(th)

        def value_and_gradient(spl):
            v = spl.ev(s, th)
            v_s, v_t = spl.ev(s, th, dx=1), spl.ev(s, th, dy=1)
            return v, np.stack([(c * v_s - sn * v_t) / r, (sn * v_s + c * v_t) / r], axis=1)

        s1, s2, sp_ = self._splines
        u1, g1 = value_and_gradient(s1)
        u2, g2 = value_and_gradient(s2)
        p, gp = value_and_gradient(sp_)
        return FlowJet(np.stack([u1, u2], axis=1), p, np.stack([g1, g2], axis=1), gp)

    def header(self) -> Dict[str, Any]:
        return {"grid": self.grid.to_dict(), "flux": self.flux, "nu": self.nu,
                "params": self.params, "status": self.status}

    def to_npz(self, path) -> Path:
        """numpy容器 + JSON头 / numpy container with a JSON header"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        extra = {} if self.forcing_values is None else {"forcing": self.forcing_values}
        np.savez(path, header=np.array(json.dumps(self.header())), psi=self.psi, omega=self.omega, **extra)
        return path

    @classmethod
    def from_npz(cls, path) -> "GridSolution":
        with np.load(path, allow_pickle=False) as data:
            header = json.loads(str(data["header"]))
            forcing = data["forcing"] if "forcing" in data.files else None
            return cls(AnnularGrid.from_dict(header["grid"]), data["psi"], data["omega"],
                       header["flux"], header["nu"], header["params"], header["status"], forcing)

    def to_frame(self) -> pd.DataFrame:
        rr, tt = self.grid.mesh()
        u = self.velocity()
        return pd.DataFrame({
            "r": rr.ravel(), "theta": tt.ravel(),
            "x1": (rr * np.cos(tt)).ravel(), "x2": (rr * np.sin(tt)).ravel(),
            "u1": u[:, :, 0].ravel(), "u2": u[:, :, 1].ravel(), "p": self.pressure().ravel(),
        })

    def to_csv(self, path, float_format: str = "%.17g") -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=float_format)
        return path
