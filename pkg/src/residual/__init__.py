"""
残差、衰减拟合与参照解模块
Residual operators, decay fits, the Euler correction ODE and the Stokes convolution reference
"""
from .operators import OperatorKind, advected_residual, apply_operator, fd_laplacian, laplacian_of
from .decay import (
    DecayFit, DecayFitError, RayResidual, fit_decay, fit_decay_samples, ray_points, ray_residual,
    richardson_extrapolate,
)
from .euler_ode import (
    EulerCorrection, EulerCorrectionError, correction_source, euler_identity, euler_ode_residual,
    solve_euler_correction,
)
from .convolution import (
    ConvolutionField, QuadratureError, QuadratureSpec, fit_first_moments, force_total, paradox_slope,
    stokes_convolution,
)

__all__ = [
    'OperatorKind', 'advected_residual', 'apply_operator', 'fd_laplacian', 'laplacian_of',
    'DecayFit', 'DecayFitError', 'RayResidual', 'fit_decay', 'fit_decay_samples', 'ray_points',
    'ray_residual', 'richardson_extrapolate',
    'EulerCorrection', 'EulerCorrectionError', 'correction_source', 'euler_identity',
    'euler_ode_residual', 'solve_euler_correction',
    'ConvolutionField', 'QuadratureError', 'QuadratureSpec', 'fit_first_moments', 'force_total',
    'paradox_slope', 'stokes_convolution',
]
