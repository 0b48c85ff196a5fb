"""
尾流渐近解模块
Conformal-coordinate wake ansatz
"""
from .conformal import (
    WAKE_EXPONENT, ConformalCoords, conformal_basis, conformal_map, from_conformal, to_conformal,
)
from .profiles import PROFILE_VARIANTS, WakeProfiles, wake_profiles
from .wake_field import (
    WAKE_BLEND, WakeParameters, double_wake, eval_wake, leading_wake_speed, wake_field, wake_state,
)
from .residual_orders import RAY_OFFSETS, default_rays, wake_basis, wake_residual_orders

__all__ = [
    'WAKE_EXPONENT', 'ConformalCoords', 'conformal_basis', 'conformal_map', 'from_conformal',
    'to_conformal', 'PROFILE_VARIANTS', 'WakeProfiles', 'wake_profiles',
    'WAKE_BLEND', 'WakeParameters', 'double_wake', 'eval_wake', 'leading_wake_speed', 'wake_field',
    'wake_state', 'RAY_OFFSETS', 'default_rays', 'wake_basis', 'wake_residual_orders',
]
