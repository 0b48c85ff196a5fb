"""
对数径向环形网格与差分算子
Log-radial annular grid and its finite-difference operators

节点 (i, j) 的全局编号 k = i·n_theta + j，i 为径向 (s = log r)，j 为角向。
"""
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Any, Dict, NamedTuple

import numpy as np
import scipy.sparse as sp


class GridError(ValueError):
    """网格参数非法 Invalid grid parameters"""


class GridOperators(NamedTuple):
    """全网格上的稀疏差分算子 (对 s 与 θ)"""
    ds: sp.csr_matrix
    dss: sp.csr_matrix
    dt: sp.csr_matrix
    dtt: sp.csr_matrix


def radial_operators(n: int, h: float):
    """二阶精度，边界行用单侧差分"""
    d1 = sp.lil_matrix(sp.diags([-1.0, 1.0], [-1, 1], shape=(n, n)))
    d1[0, [0, 1, 2]] = [-3.0, 4.0, -1.0]
    d1[n - 1, [n - 3, n - 2, n - 1]] = [1.0, -4.0, 3.0]
    d2 = sp.lil_matrix(sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n)))
    d2[0, [0, 1, 2, 3]] = [2.0, -5.0, 4.0, -1.0]
    d2[n - 1, [n - 4, n - 3, n - 2, n - 1]] = [-1.0, 4.0, -5.0, 2.0]
    return d1.tocsr() / (2.0 * h), d2.tocsr() / h ** 2


def periodic_operators(n: int, h: float):
    d1 = sp.lil_matrix(sp.diags([-1.0, 1.0], [-1, 1], shape=(n, n)))
    d1[0, n - 1] = -1.0
    d1[n - 1, 0] = 1.0
    d2 = sp.lil_matrix(sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n)))
    d2[0, n - 1] = 1.0
    d2[n - 1, 0] = 1.0
    return d1.tocsr() / (2.0 * h), d2.tocsr() / h ** 2


@dataclass(frozen=True)
class AnnularGrid:
    """
    环形区域 r_inner ≤ r ≤ r_outer 上的 (log r, θ) 张量网格
    Tensor grid in (log r, theta) on an annulus
    """
    r_inner: float = 1.0
    r_outer: float = 1.0e3
    n_r: int = 192
    n_theta: int = 384

    def __post_init__(self):
        if not 0.0 < self.r_inner < self.r_outer:
            raise GridError(f"半径非法 / need 0 < r_inner < r_outer, got {self.r_inner}, {self.r_outer}")
        if self.n_r < 5:
            raise GridError(f"径向点数至少为5 / n_r must be at least 5, got {self.n_r}")
        if self.n_theta < 8 or self.n_theta % 2:
            raise GridError(f"角向点数须为不小于8的偶数 / n_theta must be even and >= 8, got {self.n_theta}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnnularGrid":
        return cls(float(data["r_inner"]), float(data["r_outer"]), int(data["n_r"]), int(data["n_theta"]))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @cached_property
    def s(self) -> np.ndarray:
        return np.linspace(np.log(self.r_inner), np.log(self.r_outer), self.n_r)

    @cached_property
    def r(self) -> np.ndarray:
        return np.exp(self.s)

    @cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def dtheta(self) -> float:
        return 2.0 * np.pi / self.n_theta

    @property
    def size(self) -> int:
        return self.n_r * self.n_theta

    @property
    def shape(self):
        return self.n_r, self.n_theta

    def mesh(self):
        """(R, TH)，形状 (n_r, n_theta)"""
        return np.meshgrid(self.r, self.theta, indexing="ij")

    def points(self) -> np.ndarray:
        """全部节点的笛卡尔坐标 (N, 2)"""
        rr, tt = self.mesh()
        return np.stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()], axis=1)

    def radius_of_nodes(self) -> np.ndarray:
        return np.repeat(self.r, self.n_theta)

    def ring(self, i: int) -> slice:
        """第 i 圈节点的全局编号范围"""
        return slice(i * self.n_theta, (i + 1) * self.n_theta)

    def refined(self) -> "AnnularGrid":
        """径向间距与角向间距都减半 / halves both spacings"""
        return AnnularGrid(self.r_inner, self.r_outer, 2 * (self.n_r - 1) + 1, 2 * self.n_theta)

    def radial_index(self, radius: float) -> int:
        return int(np.argmin(np.abs(self.r - radius)))

    @cached_property
    def operators(self) -> GridOperators:
        d1r, d2r = radial_operators(self.n_r, self.ds)
        d1t, d2t = periodic_operators(self.n_theta, self.dtheta)
        i_r = sp.identity(self.n_r, format="csr")
        i_t = sp.identity(self.n_theta, format="csr")
        return GridOperators(sp.kron(d1r, i_t, format="csr"), sp.kron(d2r, i_t, format="csr"),
                             sp.kron(i_r, d1t, format="csr"), sp.kron(i_r, d2t, format="csr"))

    def describe(self) -> str:
        return f"{self.n_r}×{self.n_theta}, r ∈ [{self.r_inner:g}, {self.r_outer:g}]"
