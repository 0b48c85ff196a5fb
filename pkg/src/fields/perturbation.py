"""
小参数展开的逐阶迭代项
Perturbative iterates u₁, u₂, u₃ of the small-forcing expansion

leading 形式只给出各阶的闭式首项 (余项不可求值)；
stream 形式给出 ∇∧(χψₙ)，其中 ψ₂ = f₂ + g₂ log r，ψ₃ = f₃ + g₃ log r + h₃ log² r。
"""
import jax
import jax.numpy as jnp
import numpy as np

from .closed_forms import asym1_state, curl_of, guard_inside, pack, polar
from .types import ParameterError

PERTURB_ORDERS = (1, 2, 3)


def check_order(order: float) -> int:
    if order not in PERTURB_ORDERS:
        raise ParameterError(f"迭代阶数只能为1、2、3 / order must be 1, 2 or 3, got {order}")
    return int(order)


def _stream_terms(order, a, b, m, c21, c22):
    """返回 (f, g, h) 三个关于θ的函数"""
    eight_pi2 = (8.0 * np.pi) ** 2
    lam_a, lam_b = a * m / eight_pi2, b * m / eight_pi2

    def f2(t):
        return ((b ** 2 - a ** 2) * jnp.sin(4 * t) + 2.0 * a * b * jnp.cos(4 * t)) / (6.0 * (16.0 * np.pi) ** 2)

    def f2_prime(t):
        return 4.0 * ((b ** 2 - a ** 2) * jnp.cos(4 * t) - 2.0 * a * b * jnp.sin(4 * t)) / (6.0 * (16.0 * np.pi) ** 2)

    def g2(t):
        return lam_a * jnp.cos(2 * t) + lam_b * jnp.sin(2 * t)

    def g2_prime(t):
        return 2.0 * (-lam_a * jnp.sin(2 * t) + lam_b * jnp.cos(2 * t))

    if order == 2:
        return f2, g2, (lambda t: 0.0 * t)

    def h3(t):
        return m / (32.0 * np.pi) * g2_prime(t)

    def g3(t):
        return (m / (16.0 * np.pi) * f2_prime(t)
                + (a ** 2 + b ** 2 - 6.0 * m ** 2) / (3.0 * (16.0 * np.pi) ** 3) * (a * jnp.sin(2 * t) - b * jnp.cos(2 * t))
                + m / (2.0 * (4.0 * np.pi) ** 2) * (c21 * jnp.cos(2 * t) + c22 * jnp.sin(2 * t)))

    def f3(t):
        return ((b * (b ** 2 - 3.0 * a ** 2) * jnp.cos(6 * t) + a * (a ** 2 - 3.0 * b ** 2) * jnp.sin(6 * t))
                / (9.0 * (32.0 * np.pi) ** 3)
                + ((a * c22 + b * c21) * jnp.cos(4 * t) + (b * c22 - a * c21) * jnp.sin(4 * t))
                / (6.0 * (8.0 * np.pi) ** 2))

    return f3, g3, h3


def _leading(order, a, b, m, r, th):
    """返回首项的 (径向速度系数, 压力)"""
    log_r = jnp.log(r)
    if order == 2:
        angular = a * jnp.sin(2 * th) - b * jnp.cos(2 * th)
        return (m * log_r / (2.0 * (4.0 * np.pi) ** 2 * r) * angular,
                m * log_r / ((4.0 * np.pi) ** 2 * r ** 2) * angular)
    angular = a * jnp.cos(2 * th) + b * jnp.sin(2 * th)
    eight_pi3 = (8.0 * np.pi) ** 3
    with_torque = (m ** 2 * log_r ** 2 / (eight_pi3 * r) * angular,
                   2.0 * m ** 2 * log_r ** 2 / (eight_pi3 * r ** 2) * angular)
    coeff = -(a ** 2 + b ** 2) * log_r / (12.0 * eight_pi3)
    torque_free = (coeff / r * angular, coeff / r ** 2 * angular)
    return tuple(jnp.where(m != 0.0, w, z) for w, z in zip(with_torque, torque_free))


def perturb_state(params, x, chi, options):
    """params = (A, B, M, C21, C22)，阶数由 options["order"] 给出"""
    order = int(options.get("order", 1))
    a, b, m = params[0], params[1], params[2]
    if order == 1:
        return asym1_state(jnp.array([a, b, m]), x, chi, options)

    x = guard_inside(x, 0.5 * chi.inner)
    r, th = polar(x)
    u_r, p = _leading(order, a, b, m, r, th)

    if options.get("form", "leading") == "stream":
        f, g, h = _stream_terms(order, a, b, m, params[3], params[4])

        def psi(y):
            ry, ty = polar(y)
            log_ry = jnp.log(ry)
            return chi(ry) * (f(ty) + g(ty) * log_ry + h(ty) * log_ry ** 2)

        u = curl_of(psi, x)
        if order == 2:
            f_prime = jax.grad(f)(th)
            g_prime = jax.grad(g)(th)
            p = chi(r) / r ** 2 * ((1.0 - 2.0 * jnp.log(r)) * g_prime - 2.0 * f_prime
                                   - (a ** 2 + b ** 2 + 2.0 * m ** 2) / (8.0 * np.pi) ** 2)
        else:
            p = chi(r) * p
        return pack(u, p)

    return pack(chi(r) * u_r * x / r, chi(r) * p)
