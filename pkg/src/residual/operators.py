"""
方程算子作用于流场
Apply the Navier-Stokes, Stokes and Euler operators to a flow source
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..fields.types import FlowJet, ParameterError, as_points
from ..utils.logger import get_logger

logger = get_logger(__name__)

OPERATOR_NAMES = ("navier-stokes", "stokes", "euler")
_ALIASES = {"ns": "navier-stokes", "navier-stokes": "navier-stokes", "stokes": "stokes", "euler": "euler"}


@dataclass(frozen=True)
class OperatorKind:
    """
    NavierStokes(ν): Δu − ∇p − νu·∇u
    Stokes:          Δu − ∇p
    Euler:           −(u·∇u + ∇p)
    """
    name: str = "navier-stokes"
    nu: float = 1.0

    def __post_init__(self):
        if self.name not in OPERATOR_NAMES:
            raise ParameterError(f"未知算子 / unknown operator: {self.name}")

    @classmethod
    def navier_stokes(cls, nu: float = 1.0) -> "OperatorKind":
        return cls("navier-stokes", float(nu))

    @classmethod
    def stokes(cls) -> "OperatorKind":
        return cls("stokes", 0.0)

    @classmethod
    def euler(cls) -> "OperatorKind":
        return cls("euler", 1.0)

    @classmethod
    def from_string(cls, name: str, nu: float = 1.0) -> "OperatorKind":
        key = _ALIASES.get(name.strip().lower())
        if key is None:
            raise ParameterError(f"未知算子 / unknown operator '{name}', expected ns | stokes | euler")
        if key == "navier-stokes":
            return cls.navier_stokes(nu)
        return cls.stokes() if key == "stokes" else cls.euler()

    @property
    def needs_laplacian(self) -> bool:
        return self.name != "euler"


def fd_laplacian(source, points) -> np.ndarray:
    """
    四阶中心差分的 Δu，步长 h = max(1e-4, 1e-4·r)
    Fourth-order central-difference vector Laplacian
    """
    pts = as_points(points)
    h = np.maximum(1e-4, 1e-4 * np.hypot(pts[:, 0], pts[:, 1]))[:, None]
    centre = source.jet(pts).u
    total = np.zeros_like(centre)
    weights = {1.0: 16.0, 2.0: -1.0}
    for axis in range(2):
        shift = np.zeros((1, 2))
        shift[0, axis] = 1.0
        acc = -30.0 * centre
        for k, w in weights.items():
            acc = acc + w * (source.jet(pts + k * h * shift).u + source.jet(pts - k * h * shift).u)
        total += acc / (12.0 * h ** 2)
    return total


def laplacian_of(source, points) -> np.ndarray:
    """可用时取解析 Δu，否则差分"""
    has = getattr(source, "has_laplacian", hasattr(source, "laplacian_u"))
    if has:
        return source.laplacian_u(points)
    return fd_laplacian(source, points)


def _jet(source, points, strict: bool) -> FlowJet:
    if strict and hasattr(source, "validity_radius"):
        return source.jet(points, strict=True)
    return source.jet(points)


def apply_operator(op: OperatorKind, source, points, strict: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    返回 (f, div)，f 形状 (N,2)，div = ∇·u
    Returns the operator residual f and the divergence at each point
    """
    pts = as_points(points)
    jet = _jet(source, pts, strict)
    if op.name == "euler":
        return -(jet.convection + jet.grad_p), jet.divergence
    f = laplacian_of(source, pts) - jet.grad_p
    if op.name == "navier-stokes" and op.nu != 0.0:
        f = f - op.nu * jet.convection
    return f, jet.divergence


def advected_residual(source, advector, nu: float, points) -> np.ndarray:
    """
    Δu − ∇p − ν v·∇v，v 为另给的平流场
    Residual with a separately supplied advecting field v
    """
    pts = as_points(points)
    jet = source.jet(pts)
    adv = advector.jet(pts)
    return laplacian_of(source, pts) - jet.grad_p - nu * adv.convection
