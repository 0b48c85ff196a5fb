"""
圆周上的三个守恒量：通量、净力、净力矩
Contour invariants on a circle: flux, net force and net torque
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..fields.types import FlowJet
from ..residual.decay import richardson_extrapolate

MIN_QUAD = 64


@dataclass(frozen=True)
class InvariantTriple:
    flux: float
    force: np.ndarray
    torque: float
    radius: float = float("nan")

    def to_dict(self) -> Dict[str, float]:
        return {"radius": self.radius, "flux": self.flux, "force1": float(self.force[0]),
                "force2": float(self.force[1]), "torque": self.torque}

    def as_vector(self) -> np.ndarray:
        return np.array([self.flux, self.force[0], self.force[1], self.torque])

    def close_to(self, other: "InvariantTriple", rtol: float = 1e-8, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.as_vector(), other.as_vector(), rtol=rtol, atol=atol))


def stress_normal(jet: FlowJet, normals: np.ndarray, nu: float, viscous: bool = True) -> np.ndarray:
    """
    T·n，T = ∇u + ∇uᵀ − pI − νu⊗u (viscous=False 时 T = −pI − u⊗u)
    Normal stress including the convective part
    """
    pressure = -jet.p[:, None] * normals
    un = np.einsum('ni,ni->n', jet.u, normals)
    if not viscous:
        return pressure - jet.u * un[:, None]
    grad = jet.grad_u + np.transpose(jet.grad_u, (0, 2, 1))
    return np.einsum('nij,nj->ni', grad, normals) + pressure - nu * jet.u * un[:, None]


def contour_invariants(source, nu: float = 1.0, radius: float = 10.0, n_quad: int = 256,
                       viscous: bool = True) -> InvariantTriple:
    """
    Φ = ∮u·n, F = ∮Tn, M = ∮x∧Tn，圆周上的梯形公式
    Trapezoidal rule on the circle of the given radius
    """
    if n_quad < MIN_QUAD:
        raise ValueError(f"n_quad 至少为 {MIN_QUAD} / n_quad must be at least {MIN_QUAD}")
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    points = radius * normals
    jet = source.jet(points)
    weight = 2.0 * np.pi * radius / n_quad
    tn = stress_normal(jet, normals, nu, viscous)
    flux = weight * np.einsum('ni,ni->', jet.u, normals)
    force = weight * tn.sum(axis=0)
    torque = weight * np.sum(points[:, 0] * tn[:, 1] - points[:, 1] * tn[:, 0])
    return InvariantTriple(float(flux), force, float(torque), float(radius))


def invariants_at_radii(source, radii: Sequence[float], nu: float = 1.0, n_quad: int = 256,
                        viscous: bool = True) -> List[InvariantTriple]:
    return [contour_invariants(source, nu, r, n_quad, viscous) for r in radii]


def extrapolated_force(source, radii: Sequence[float], rate: float = 1.0 / 3.0, nu: float = 1.0,
                       n_quad: int = 1024) -> np.ndarray:
    """
    各半径上的净力按 F(R) = F∞ + cR^{−rate} 外推
    Net force extrapolated to infinite radius
    """
    triples = invariants_at_radii(source, radii, nu, n_quad)
    return richardson_extrapolate(radii, np.stack([t.force for t in triples]), rate)
