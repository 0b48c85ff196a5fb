"""
δ函数近似的点力分布
Forcing made of delta-function approximations on the circle of radius five
"""
import jax.numpy as jnp
import numpy as np

from ..fields.forcing import ForceField
from ..fields.types import ParameterError

DELTA_RING_RADIUS = 5.0


def delta_forcing(n: int, amplitude: float, eps: float = 0.1) -> ForceField:
    """
    f(x) = −𝓐 Σᵢ δ_ε(x − 5R_{2πi/n}e₁) R_{2πi/n}e₁，δ_ε = e^{−|x|²/ε}/(πε)
    n delta approximations pointing radially outwards on the circle of radius five
    """
    if n < 1:
        raise ParameterError(f"n 至少为1 / n must be at least 1, got {n}")
    if not eps > 0.0:
        raise ParameterError(f"ε 须为正 / eps must be positive, got {eps}")
    angles = 2.0 * np.pi * np.arange(n) / n
    directions = jnp.asarray(np.stack([np.cos(angles), np.sin(angles)], axis=1))
    centres = DELTA_RING_RADIUS * directions

    def fn(x):
        d = x[None, :] - centres
        weights = jnp.exp(-jnp.sum(d * d, axis=1) / eps) / (np.pi * eps)
        return -amplitude * weights @ directions

    support = DELTA_RING_RADIUS + 7.0 * float(np.sqrt(eps))
    return ForceField(fn, support, f"delta(n={n},A={amplitude:g},eps={eps:g})")
