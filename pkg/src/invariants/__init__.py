"""
守恒量、矩系数与对称性模块
Contour invariants, force moments and discrete symmetries
"""
from .contour import (
    InvariantTriple, contour_invariants, extrapolated_force, invariants_at_radii, stress_normal,
)
from .moments import (
    MomentCoefficients, MomentQuadrature, force_integral, moment_coeffs, moment_envelope,
    moment_integrands, torque_integral,
)
from .symmetry import (
    COEFFICIENT_NAMES, EXPECTED_TABLE, SymmetryKind, SymmetryRow, symmetrize, symmetry_table_check,
)

__all__ = [
    'InvariantTriple', 'contour_invariants', 'extrapolated_force', 'invariants_at_radii', 'stress_normal',
    'MomentCoefficients', 'MomentQuadrature', 'force_integral', 'moment_coeffs', 'moment_envelope',
    'moment_integrands', 'torque_integral',
    'COEFFICIENT_NAMES', 'EXPECTED_TABLE', 'SymmetryKind', 'SymmetryRow', 'symmetrize',
    'symmetry_table_check',
]
