"""
尾流近似解 U_F
Wake approximate solution U_F

在旋转到 θ₀ = arg(−F) 的坐标系里，
ψ = x̄₁φ₀(x̄₂) + φ₁(x̄₂) + (3√3/π)(θ/3)，x̄ = z^{1/3}；
沿 θ = π 的切口跳跃由线性修正抵消，最后乘以 χ_w (5 ≤ r ≤ 10 过渡)。
"""
from dataclasses import dataclass
from typing import Tuple

import jax.numpy as jnp
import numpy as np

from ..fields.analytic import AnalyticField, SuperposedField
from ..fields.closed_forms import curl_of, guard_inside, pack
from ..fields.types import CutoffProfile, FieldKind, FlowJet, ParameterError, as_points
from .conformal import WAKE_EXPONENT
from .profiles import phi0, phi1, rho0, rho1

WAKE_BLEND = CutoffProfile(5.0, 10.0)
ARG_WEIGHT = 3.0 * np.sqrt(3.0) / np.pi


@dataclass(frozen=True)
class WakeParameters:
    """力 F 与尾流振幅 a = (9|F|/16)^{1/3}、方向 θ₀ = arg(−F)"""
    force: Tuple[float, float]
    a: float
    theta0: float

    @classmethod
    def from_force(cls, force) -> "WakeParameters":
        f1, f2 = (float(v) for v in force)
        norm = float(np.hypot(f1, f2))
        if norm == 0.0:
            raise ParameterError("尾流解要求 F ≠ 0 / wake field needs a nonzero force")
        return cls((f1, f2), (9.0 * norm / 16.0) ** (1.0 / 3.0), float(np.arctan2(-f2, -f1)))

    @classmethod
    def from_amplitude(cls, a: float, theta0: float = 0.0) -> "WakeParameters":
        if not a > 0.0:
            raise ParameterError(f"尾流振幅须为正 / wake amplitude must be positive, got {a}")
        norm = 16.0 * a ** 3 / 9.0
        return cls((-norm * float(np.cos(theta0)), -norm * float(np.sin(theta0))), float(a), float(theta0))

    @property
    def net_force(self) -> np.ndarray:
        """远场净力 −(16a³/9)(cos θ₀, sin θ₀)，即 F 本身"""
        return np.asarray(self.force)


def _conformal(xr):
    r = jnp.sqrt(jnp.dot(xr, xr))
    th = jnp.arctan2(xr[1], xr[0])
    rp = r ** WAKE_EXPONENT
    return r, th, rp * jnp.cos(th / 3.0), rp * jnp.sin(th / 3.0)


def _wake_stream(a, xr, terms):
    r, th, xb1, xb2 = _conformal(xr)
    psi = xb1 * phi0(a, xb2)
    if terms == "leading":
        return psi
    psi = psi + phi1(a, xb2) + ARG_WEIGHT * th / 3.0
    # θ = π 上的值，奇对称使切口跳跃为 2ψ(r, π)
    rp = r ** WAKE_EXPONENT
    yb1, yb2 = 0.5 * rp, 0.5 * np.sqrt(3.0) * rp
    psi_pi = yb1 * phi0(a, yb2) + phi1(a, yb2) + ARG_WEIGHT * np.pi / 3.0
    return psi - 2.0 * psi_pi * (th + np.pi) / (2.0 * np.pi)


def _wake_pressure(a, xr, terms):
    _, _, xb1, xb2 = _conformal(xr)
    p = rho0(a, xb2) / xb1 ** 4
    if terms == "leading":
        return p
    return p + rho1(a, xb2) / xb1 ** 5


def wake_state(params, x, chi, options):
    """params = (F1, F2)；chi 不使用，尾流有自己的过渡函数 χ_w"""
    terms = options.get("terms", "full")
    f1, f2 = params[0], params[1]
    a = (9.0 * jnp.sqrt(f1 ** 2 + f2 ** 2) / 16.0) ** (1.0 / 3.0)
    theta0 = jnp.arctan2(-f2, -f1)
    c, s = jnp.cos(theta0), jnp.sin(theta0)

    def to_wake_frame(y):
        return jnp.array([c * y[0] + s * y[1], -s * y[0] + c * y[1]])

    x = guard_inside(x, 0.5 * WAKE_BLEND.inner)

    def psi(y):
        return WAKE_BLEND(jnp.sqrt(jnp.dot(y, y))) * _wake_stream(a, to_wake_frame(y), terms)

    u = curl_of(psi, x)
    p = WAKE_BLEND(jnp.sqrt(jnp.dot(x, x))) * _wake_pressure(a, to_wake_frame(x), terms)
    return pack(u, p)


def wake_field(force, terms: str = "full") -> AnalyticField:
    f1, f2 = (float(v) for v in force)
    return AnalyticField.create(FieldKind.WAKE, options={"terms": terms}, F1=f1, F2=f2)


def eval_wake(force, x, terms: str = "full", strict: bool = True) -> FlowJet:
    """
    尾流解的值与导数；strict 时 r < 10 报 DomainError
    Wake field jet; r < 10 is outside the validity region when strict
    """
    return wake_field(force, terms).jet(x, strict=strict)


def double_wake(force, terms: str = "full") -> SuperposedField:
    """U_F + U_{−F}：两条方向相反的尾流，远场净力为零"""
    f1, f2 = (float(v) for v in force)
    return SuperposedField((wake_field((f1, f2), terms), wake_field((-f1, -f2), terms)))


def leading_wake_speed(a: float, theta0: float, points) -> np.ndarray:
    """
    首项尾流速度大小 (2a²/3) r^{−1/3} sech²(a r^{1/3} sin((θ−θ₀)/3))
    Speed of the leading wake profile, used as a fit model
    """
    pts = as_points(points)
    r = np.hypot(pts[:, 0], pts[:, 1])
    th = np.angle(np.exp(1j * (np.arctan2(pts[:, 1], pts[:, 0]) - theta0)))
    z = a * r ** WAKE_EXPONENT * np.sin(th / 3.0)
    return 2.0 * a ** 2 / 3.0 * r ** (-WAKE_EXPONENT) / np.cosh(np.clip(z, -300.0, 300.0)) ** 2
