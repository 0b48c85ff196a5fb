"""
体积力场
Body force fields

ForceField 包装一个可被jax追踪的点函数 f(x) -> (f1, f2)，
并给出批量取值、雅可比矩阵与旋度。
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import jax
import jax.numpy as jnp
import numpy as np

from .types import ParameterError, as_points


@dataclass(frozen=True, eq=False)
class ForceField:
    """
    体积力场 Body force field

    support_radius: 力场在该半径外可忽略 (紧支或高斯尾) / negligible outside this radius
    """
    fn: Callable
    support_radius: float
    label: str = "force"

    @cached_property
    def _values(self):
        return jax.jit(jax.vmap(self.fn))

    @cached_property
    def _jacobian(self):
        return jax.jit(jax.vmap(jax.jacfwd(self.fn)))

    def values(self, points) -> np.ndarray:
        """(N,2) 力场取值"""
        return np.asarray(self._values(jnp.asarray(as_points(points))))

    def jacobian(self, points) -> np.ndarray:
        """(N,2,2)，jac[n, i, j] = ∂f_i/∂x_j"""
        return np.asarray(self._jacobian(jnp.asarray(as_points(points))))

    def curl(self, points) -> np.ndarray:
        jac = self.jacobian(points)
        return jac[:, 1, 0] - jac[:, 0, 1]

    def __call__(self, x):
        return self.fn(x)

    def scaled(self, factor: float) -> "ForceField":
        fn = self.fn
        return ForceField(lambda x: factor * fn(x), self.support_radius, f"{factor:g}*{self.label}")

    def __add__(self, other: "ForceField") -> "ForceField":
        return combine([self, other], [1.0, 1.0])

    def transformed(self, matrix) -> "ForceField":
        """群作用 (g·f)(x) = g f(gᵀx) / group action on force fields"""
        g = jnp.asarray(matrix, dtype=float)
        fn = self.fn
        return ForceField(lambda x: g @ fn(g.T @ x), self.support_radius, f"g·{self.label}")


def combine(forces: Sequence[ForceField], weights: Sequence[float]) -> ForceField:
    """线性组合 Σ wᵢ fᵢ"""
    fns = [f.fn for f in forces]
    weights = [float(w) for w in weights]

    def fn(x):
        total = jnp.zeros(2)
        for w, f in zip(weights, fns):
            total = total + w * f(x)
        return total

    radius = max(f.support_radius for f in forces)
    label = " + ".join(f"{w:g}*{f.label}" for w, f in zip(weights, forces))
    return ForceField(fn, radius, label)


def zero_force(support_radius: float = 1.0) -> ForceField:
    return ForceField(lambda x: jnp.zeros(2) * x[0], support_radius, "zero")


def gaussian_bump(center, vector, width: float = 1.0) -> ForceField:
    """
    高斯型局部力 vector·e^{−|x−c|²/w²}/(πw²)，积分为vector
    Gaussian bump whose integral equals ``vector``
    """
    c = jnp.asarray(center, dtype=float)
    v = jnp.asarray(vector, dtype=float)

    def fn(x):
        d = x - c
        return v * jnp.exp(-jnp.dot(d, d) / width ** 2) / (np.pi * width ** 2)

    radius = float(np.linalg.norm(np.asarray(center, dtype=float))) + 7.0 * width
    return ForceField(fn, radius, f"bump@{tuple(np.asarray(center, dtype=float))}")


def gaussian_lift(a1: float = 0.0, a2: float = 0.0, a3: float = 0.0) -> ForceField:
    """
    C₁提升基 e^{−|x|²}/π [a₁(x₁,−x₂) + a₂(x₂,x₁) + a₃(−x₂,x₁)]
    Lift basis whose first moments are (a₁, a₂, a₃)
    """
    def fn(x):
        basis = (a1 * jnp.array([x[0], -x[1]]) + a2 * jnp.array([x[1], x[0]])
                 + a3 * jnp.array([-x[1], x[0]]))
        return basis * jnp.exp(-jnp.dot(x, x)) / np.pi

    return ForceField(fn, 7.0, f"lift({a1:g},{a2:g},{a3:g})")


def gaussian_pair(separation: float = 2.0, strength: float = 1.0, width: float = 0.5) -> ForceField:
    """
    两个反向的切向高斯力，∫f = 0，∫x∧f = separation·strength
    Antiparallel pair with zero net force and a net torque
    """
    half = 0.5 * separation
    up = gaussian_bump((half, 0.0), (0.0, strength), width)
    down = gaussian_bump((-half, 0.0), (0.0, -strength), width)
    return combine([up, down], [1.0, 1.0])


def random_gaussian_mixture(rng: np.random.Generator, n_bumps: int = 4, spread: float = 1.5,
                            width_range=(0.4, 0.8)) -> ForceField:
    """随机高斯混合力场，用于对称性系综 / random Gaussian mixture for ensembles"""
    bumps = []
    for _ in range(n_bumps):
        center = rng.uniform(-spread, spread, size=2)
        vector = rng.normal(size=2)
        width = rng.uniform(*width_range)
        bumps.append(gaussian_bump(center, vector, width))
    return combine(bumps, [1.0] * n_bumps)


def parse_force_spec(spec: str) -> ForceField:
    """
    解析命令行力场描述
    Parse a CLI force description

    lift:a1,a2,a3 | pair:separation,strength | bump:cx,cy,vx,vy[,width] | delta:n,amplitude[,eps]
    """
    from ..solver.forcing import delta_forcing

    kind, _, args = spec.partition(":")
    try:
        values = [float(v) for v in args.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"无法解析力场参数 / cannot parse force spec '{spec}'") from None
    if kind == "lift" and len(values) == 3:
        return gaussian_lift(*values)
    if kind == "pair" and len(values) in (1, 2):
        return gaussian_pair(*values)
    if kind == "bump" and len(values) in (4, 5):
        width = values[4] if len(values) == 5 else 1.0
        return gaussian_bump(values[:2], values[2:4], width)
    if kind == "delta" and len(values) in (2, 3):
        eps = values[2] if len(values) == 3 else 0.1
        return delta_forcing(int(values[0]), values[1], eps)
    raise ParameterError(
        f"未知力场描述 / unknown force spec '{spec}'; expected lift:a1,a2,a3 | pair:sep,strength | "
        "bump:cx,cy,vx,vy[,w] | delta:n,amplitude[,eps]")

