"""
二阶交叉修正项 ū₂, p̄₂
Second-order cross corrector ū₂, p̄₂

ū₂ 消去一阶Stokes项的非线性作用 νū₁·∇ū₁ 中衰减最慢的部分。
两种形式:
  displayed  按闭式公式逐项给出 (默认)
  stream     ū₂ = ∇∧(χψ₂)，ψ₂ = f(θ) + g(θ)log r，严格无散
"""
from dataclasses import dataclass

import jax.numpy as jnp
import numpy as np

from .closed_forms import curl_of, guard_inside, pack, polar
from .types import ParameterError

SIXTY_FOUR_PI2 = (8.0 * np.pi) ** 2


@dataclass(frozen=True)
class CrossAngles:
    """振幅与相位 amplitudes and phases"""
    amp1: float
    amp2: float
    theta1: float
    theta2: float


def cross_corrector_angles(a_vec, amplitude: str = "printed") -> CrossAngles:
    """
    由 A = (A₀, A₁, A₂, A₃) 计算 𝒜₁, 𝒜₂, θ₁, θ₂

    θ₁ 与 θ₂ 使 ∇∧(ū₁·∇ū₁) = 𝒜₁/(8π²r⁴)[2𝒜₂cos(2θ+θ₁) + 𝒜₁cos(4θ+θ₂)] 成立
    (amplitude="squared" 时精确成立)。
    """
    a0, a1, a2, a3 = (float(a) for a in a_vec)
    beta = np.arctan2(a2, a1)
    amp1 = float(np.hypot(a1, a2))
    if amplitude == "squared":
        radicand = 4.0 * a0 ** 2 + a3 ** 2
    elif amplitude == "printed":
        radicand = 4.0 * a0 ** 2 + a3
    else:
        raise ParameterError(f"未知的振幅形式 / unknown amplitude variant: {amplitude}")
    if radicand < 0.0:
        raise ParameterError(f"4A₀² + A₃ < 0，printed振幅无定义 / printed amplitude undefined for A={tuple(a_vec)}")
    theta1 = float(np.arctan2(-2.0 * a0, a3) - beta)
    theta2 = float(0.5 * np.pi - 2.0 * beta)
    return CrossAngles(amp1, float(np.sqrt(radicand)), theta1, theta2)


def _angles_traced(params, amplitude):
    """jax版本，供state函数使用"""
    a0, a1, a2, a3 = params[0], params[1], params[2], params[3]
    beta = jnp.arctan2(a2, a1)
    amp1 = jnp.sqrt(a1 ** 2 + a2 ** 2)
    radicand = 4.0 * a0 ** 2 + (a3 ** 2 if amplitude == "squared" else a3)
    amp2 = jnp.sqrt(jnp.maximum(radicand, 0.0))
    return amp1, amp2, jnp.arctan2(-2.0 * a0, a3) - beta, 0.5 * np.pi - 2.0 * beta


def cross_corrector_state(params, x, chi, options):
    """params = (A₀, A₁, A₂, A₃, ν)"""
    form = options.get("form", "displayed")
    amplitude = options.get("amplitude", "printed")
    nu = params[4]
    amp1, amp2, th1, th2 = _angles_traced(params, amplitude)
    lam = nu * amp1 * amp2 / SIXTY_FOUR_PI2
    quartic = nu * amp1 ** 2 / (6.0 * (16.0 * np.pi) ** 2)

    x = guard_inside(x, 0.5 * chi.inner)
    r, th = polar(x)
    log_r = jnp.log(r)
    cutoff = chi(r)

    if form == "stream":
        def psi(y):
            ry, ty = polar(y)
            return chi(ry) * (quartic * jnp.cos(4 * ty + th2)
                              + lam * jnp.cos(2 * ty + th1) * jnp.log(ry))

        f_prime = -4.0 * quartic * jnp.sin(4 * th + th2)
        g_prime = -2.0 * lam * jnp.sin(2 * th + th1)
        p = cutoff * ((-2.0 * f_prime + g_prime * (1.0 - 2.0 * log_r)) / r ** 2
                      - nu * (amp1 ** 2 + 2.0 * amp2 ** 2) / (SIXTY_FOUR_PI2 * r ** 2))
        return pack(curl_of(psi, x), p)

    e_r = x / r
    e_t = jnp.array([-x[1], x[0]]) / r
    u = (lam / r * (log_r * jnp.sin(2 * th + th1) * e_r + jnp.cos(2 * th + th1) * e_t)
         + nu * amp1 ** 2 / (6.0 * SIXTY_FOUR_PI2 * r) * jnp.sin(4 * th + th2) * e_r)
    p = (nu * amp1 * amp2 / (32.0 * np.pi ** 2 * r ** 2) * (2.0 * log_r - 1.0) * jnp.sin(2 * th + th1)
         + nu * amp1 ** 2 / (3.0 * SIXTY_FOUR_PI2 * r ** 2) * jnp.sin(4 * th + th2)
         - nu * (amp1 ** 2 + amp2 ** 2) / (SIXTY_FOUR_PI2 * r ** 2))
    return pack(cutoff * u, cutoff * p)
