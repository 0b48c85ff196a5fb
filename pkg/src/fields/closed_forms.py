"""
Stokes与Navier-Stokes的闭式解
Closed-form Stokes and Navier-Stokes fields

每个state函数的签名为 state(params, x, chi, options) -> [u1, u2, p]，
只用jax.numpy写成，导数全部由jax自动微分给出。
"""
import jax
import jax.numpy as jnp
import numpy as np

from .types import DomainError, ParameterError, Point

FOUR_PI = 4.0 * np.pi
EIGHT_PI = 8.0 * np.pi


# ---------------------------------------------------------------------------
# 公共工具 helpers
# ---------------------------------------------------------------------------

def curl_of(psi_fn, x):
    """u = ∇∧ψ = (−∂₂ψ, ∂₁ψ)"""
    g = jax.grad(psi_fn)(x)
    return jnp.array([-g[1], g[0]])


def guard_inside(x, radius):
    """
    把 |x| < radius 的点替换成 (radius, 0)。
    调用者保证该区域内场恒为零 (χ ≡ 0)，这样原点附近的log、1/r不会污染导数。
    """
    inside = jnp.dot(x, x) < radius ** 2
    return jnp.where(inside, jnp.array([radius, 0.0]), x)


def polar(x):
    r = jnp.sqrt(jnp.dot(x, x))
    return r, jnp.arctan2(x[1], x[0])


def cutoff_derivative(chi):
    return jax.grad(lambda r: chi(r))


def pack(u, p):
    return jnp.array([u[0], u[1], p])


# ---------------------------------------------------------------------------
# Stokes基本解 Stokes fundamental solution
# ---------------------------------------------------------------------------

def stokes_fundamental_tensors(x):
    """E = (1/4π)[log r I − x⊗x/r²], e = −x/(2πr²)"""
    r2 = jnp.dot(x, x)
    E = (0.5 * jnp.log(r2) * jnp.eye(2) - jnp.outer(x, x) / r2) / FOUR_PI
    e = -x / (2.0 * np.pi * r2)
    return E, e


def eval_stokes_fundamental(x: Point):
    """
    求Stokes基本解 (E, e)
    Evaluate the Stokes fundamental solution at a point
    """
    if x.r == 0.0:
        raise DomainError("Stokes基本解在原点奇异 / fundamental solution is singular at the origin")
    E, e = stokes_fundamental_tensors(jnp.asarray(x.as_array()))
    return np.asarray(E), np.asarray(e)


def stokes_fundamental_state(params, x, chi, options):
    E, e = stokes_fundamental_tensors(x)
    return pack(E @ params, jnp.dot(e, params))


# ---------------------------------------------------------------------------
# Stokes渐近展开项 S₀, S₁, S₂
# ---------------------------------------------------------------------------

def asym0_state(params, x, chi, options):
    """C₀·E₀，对数增长项"""
    x = guard_inside(x, 0.5 * chi.inner)

    def psi(y):
        r2 = jnp.dot(y, y)
        base = (0.5 * jnp.log(r2) - 1.0) / FOUR_PI
        return chi(jnp.sqrt(r2)) * base * (-params[0] * y[1] + params[1] * y[0])

    r2 = jnp.dot(x, x)
    p = -chi(jnp.sqrt(r2)) * jnp.dot(params, x) / (2.0 * np.pi * r2)
    return pack(curl_of(psi, x), p)


def asym1_state(params, x, chi, options):
    """C₁·E₁，E₁ = −1/(4πr)(cos2θ e_r, sin2θ e_r, e_θ)"""
    x = guard_inside(x, 0.5 * chi.inner)

    def psi(y):
        r2 = jnp.dot(y, y)
        sin2, cos2 = 2.0 * y[0] * y[1] / r2, (y[0] ** 2 - y[1] ** 2) / r2
        stream = params[0] * sin2 - params[1] * cos2 + params[2] * (1.0 - jnp.log(r2))
        return chi(jnp.sqrt(r2)) * stream / EIGHT_PI

    r2 = jnp.dot(x, x)
    sin2, cos2 = 2.0 * x[0] * x[1] / r2, (x[0] ** 2 - x[1] ** 2) / r2
    p = -chi(jnp.sqrt(r2)) * (params[0] * cos2 + params[1] * sin2) / (2.0 * np.pi * r2)
    return pack(curl_of(psi, x), p)


def asym2_state(params, x, chi, options):
    """A向量给出的S₂组合 S₂ combination of the A-vector"""
    x = guard_inside(x, 0.5 * chi.inner)
    a1, a2, a3, a4 = params[0], params[1], params[2], params[3]

    def psi(y):
        r, th = polar(y)
        stream = (-2.0 * a1 * jnp.sin(th) + 2.0 * a2 * jnp.cos(th)
                  - a3 * (jnp.sin(3 * th) + jnp.sin(th))
                  + a4 * (jnp.cos(3 * th) + jnp.cos(th)))
        return chi(r) * stream / (EIGHT_PI * r)

    r, th = polar(x)
    p = chi(r) * (a3 * jnp.cos(3 * th) + a4 * jnp.sin(3 * th)) / (np.pi * r ** 3)
    return pack(curl_of(psi, x), p)


def moments_to_a_vector(c2) -> np.ndarray:
    """
    由二阶矩C₂换算A向量
    Convert second-order moments C₂ to the A-vector of the order-2 term
    """
    c21, c22, c23, c24 = (float(c) for c in c2)
    return np.array([(c21 - c23) / 2.0, (c24 - c22) / 2.0, -c21, c22])


# ---------------------------------------------------------------------------
# 通量载体与调和涡 flux carrier and harmonic vortex
# ---------------------------------------------------------------------------

def flux_carrier_state(params, x, chi, options):
    """Φχ(r)/(2πr) e_r, p = Φχ′(r)/(2πr)"""
    x = guard_inside(x, 0.5 * chi.inner)
    r2 = jnp.dot(x, x)
    r = jnp.sqrt(r2)
    phi = params[0]
    u = phi * chi(r) * x / (2.0 * np.pi * r2)
    p = phi * cutoff_derivative(chi)(r) / (2.0 * np.pi * r)
    return pack(u, p)


def harmonic_vortex_state(params, x, chi, options):
    """u = −(M/4π)∇∧(χ log r), p = −½(Mχ/(4πr))²"""
    x = guard_inside(x, 0.5 * chi.inner)
    m = params[0]

    def psi(y):
        r2 = jnp.dot(y, y)
        return -m * chi(jnp.sqrt(r2)) * 0.5 * jnp.log(r2) / FOUR_PI

    r = jnp.sqrt(jnp.dot(x, x))
    p = -0.5 * (m * chi(r) / (FOUR_PI * r)) ** 2
    return pack(curl_of(psi, x), p)


# ---------------------------------------------------------------------------
# Hamel解与Euler解 Hamel and Euler fields
# ---------------------------------------------------------------------------

def hamel_state(params, x, chi, options):
    """u = −3/(2r) e_r + (A/(2√r) + μ/r) e_θ"""
    amp, mu = params[0], params[1]
    r = jnp.sqrt(jnp.dot(x, x))
    e_r = x / r
    e_t = jnp.array([-x[1], x[0]]) / r
    u = -1.5 / r * e_r + (amp / (2.0 * jnp.sqrt(r)) + mu / r) * e_t
    p = (-(2.25 + mu ** 2) / (2.0 * r ** 2) - amp ** 2 / (4.0 * r)
         - 2.0 * amp * mu / 3.0 * r ** -1.5)
    return pack(u, p)


def euler_profile(amp, lam, theta0, theta):
    """φ₀(θ) = A√(1 − λcos(θ−θ₀))"""
    return amp * jnp.sqrt(1.0 - lam * jnp.cos(theta - theta0))


def euler_state(params, x, chi, options):
    """ψ₀ = A√(r − λ x·n₀), p₀ = −A²/(4r)"""
    amp, lam, theta0 = params[0], params[1], params[2]
    n0 = jnp.array([jnp.cos(theta0), jnp.sin(theta0)])

    def psi(y):
        return amp * jnp.sqrt(jnp.sqrt(jnp.dot(y, y)) - lam * jnp.dot(y, n0))

    r = jnp.sqrt(jnp.dot(x, x))
    return pack(curl_of(psi, x), -amp ** 2 / (4.0 * r))


def check_euler_lambda(lam: float):
    if not abs(lam) < 1.0:
        raise ParameterError(f"Euler解要求 |λ| < 1 / Euler field needs |lambda| < 1, got {lam}")


def euler_net_force(amp: float, lam: float, theta0: float = 0.0) -> np.ndarray:
    """
    无粘Euler解的净力 (闭式)
    Closed-form net force of the inviscid Euler field

    F = −(π/2)A²(1 − √(1−λ²))/λ · (cosθ₀, sinθ₀)
    """
    check_euler_lambda(lam)
    if lam == 0.0:
        return np.zeros(2)
    magnitude = -0.5 * np.pi * amp ** 2 * (1.0 - np.sqrt(1.0 - lam ** 2)) / lam
    return magnitude * np.array([np.cos(theta0), np.sin(theta0)])


def euler_flux(lam: float) -> float:
    """修正项可解时所需的通量 Φ = −3π/√(1−λ²)"""
    check_euler_lambda(lam)
    return -3.0 * np.pi / np.sqrt(1.0 - lam ** 2)
