"""
尾流剖面函数 φ₀, ρ₀, φ₁, ρ₁
Wake profile functions

全部写成jax.numpy表达式，可在流函数内部直接被自动微分；
|a x̄₂| ≥ 300 时改用渐近式，避免 cosh 溢出。
"""
from typing import NamedTuple

import jax.numpy as jnp
import numpy as np

from ..fields.types import ParameterError

SQRT3 = float(np.sqrt(3.0))
PROFILE_VARIANTS = ("derived", "printed")


class WakeProfiles(NamedTuple):
    phi0: np.ndarray
    rho0: np.ndarray
    phi1: np.ndarray
    rho1: np.ndarray


def _sech_parts(z):
    """返回 (tanh z, sech z, sech² z, log(2cosh z))"""
    safe = jnp.abs(z) < 300.0
    cosh = jnp.cosh(jnp.where(safe, z, 0.0))
    sech = jnp.where(safe, 1.0 / cosh, 0.0)
    log2cosh = jnp.where(safe, jnp.log(2.0 * cosh), jnp.abs(z))
    return jnp.tanh(z), sech, sech ** 2, log2cosh


def phi0(a, y):
    """φ₀ = −2a tanh(a y)"""
    return -2.0 * a * jnp.tanh(a * y)


def rho0(a, y, variant: str = "derived"):
    """ρ₀ = (4a²/27)[4ayT − 4log(2cosh ay) + (2ayT + 7S)S]，S = sech²(ay)"""
    z = a * y
    t, sech, s, log2cosh = _sech_parts(z)
    tail = s if variant == "derived" else sech
    return 4.0 * a ** 2 / 27.0 * (4.0 * z * t - 4.0 * log2cosh + (2.0 * z * t + 7.0 * s) * tail)


def phi1(a, y):
    """φ₁ = √3(2ay/3 − T − ayS)"""
    z = a * y
    t, _, s, _ = _sech_parts(z)
    return SQRT3 * (2.0 * z / 3.0 - t - z * s)


def rho1(a, y):
    """ρ₁ = (2√3a/27)(14S − 8ayTS + 6a²y²S²)"""
    z = a * y
    t, _, s, _ = _sech_parts(z)
    return 2.0 * SQRT3 * a / 27.0 * (14.0 * s - 8.0 * z * t * s + 6.0 * z ** 2 * s ** 2)


def wake_profiles(a: float, xbar2, variant: str = "derived") -> WakeProfiles:
    """
    四个剖面函数在 x̄₂ 处的值
    Values of the four profile functions at x̄₂
    """
    if not a > 0.0:
        raise ParameterError(f"尾流振幅须为正 / wake amplitude must be positive, got {a}")
    if variant not in PROFILE_VARIANTS:
        raise ParameterError(f"未知剖面版本 / unknown profile variant: {variant}")
    y = jnp.asarray(xbar2, dtype=float)
    return WakeProfiles(np.asarray(phi0(a, y)), np.asarray(rho0(a, y, variant)),
                        np.asarray(phi1(a, y)), np.asarray(rho1(a, y)))
