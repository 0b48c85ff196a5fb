"""
闭式流场模块
Closed-form flow fields
"""
from .types import (
    CutoffProfile, DomainError, FieldError, FieldKind, FlowJet, FlowSource, ParameterError,
    Point, PolarPoint, as_points, rotation_matrix,
)
from .closed_forms import (
    eval_stokes_fundamental, euler_flux, euler_net_force, euler_profile, moments_to_a_vector,
)
from .cross_corrector import CrossAngles, cross_corrector_angles
from .analytic import (
    AnalyticField, SuperposedField, eval_asym_term, eval_cross_corrector, eval_euler_leading,
    eval_flux_carrier, eval_hamel, eval_harmonic_vortex, eval_perturb_iterate, first_order_field,
    kind_spec, parse_assignments, stokes_asymptotic_field,
)
from .forcing import (
    ForceField, combine, gaussian_bump, gaussian_lift, gaussian_pair, parse_force_spec,
    random_gaussian_mixture, zero_force,
)

__all__ = [
    'CutoffProfile', 'DomainError', 'FieldError', 'FieldKind', 'FlowJet', 'FlowSource',
    'ParameterError', 'Point', 'PolarPoint', 'as_points', 'rotation_matrix',
    'eval_stokes_fundamental', 'euler_flux', 'euler_net_force', 'euler_profile', 'moments_to_a_vector',
    'CrossAngles', 'cross_corrector_angles',
    'AnalyticField', 'SuperposedField', 'eval_asym_term', 'eval_cross_corrector', 'eval_euler_leading',
    'eval_flux_carrier', 'eval_hamel', 'eval_harmonic_vortex', 'eval_perturb_iterate',
    'first_order_field', 'kind_spec', 'parse_assignments', 'stokes_asymptotic_field',
    'ForceField', 'combine', 'gaussian_bump', 'gaussian_lift', 'gaussian_pair', 'parse_force_spec',
    'random_gaussian_mixture', 'zero_force',
]
