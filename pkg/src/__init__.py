"""
planeflow: 平面定常Navier-Stokes解析解、不变量与数值实验
planeflow: closed forms, invariants and numerical experiments for steady planar Navier-Stokes flow
"""
import jax

# 全部解析导数在双精度下计算
jax.config.update("jax_enable_x64", True)
jax.config.update("jax_platform_name", "cpu")

__version__ = "0.1.0"
