"""
ψ–ω Newton求解器与参数延拓
Stream-function/vorticity Newton solver and continuation
"""
from .grid import AnnularGrid, GridError, GridOperators
from .boundary import BoundaryConditionSpec, PrescribedWall
from .forcing import DELTA_RING_RADIUS, delta_forcing
from .system import NavierStokesSystem, assemble_system
from .solution import GridSolution
from .newton import (
    NewtonOptions, NewtonResult, NewtonStatus, SolverDivergenceError, newton_solve, solve_or_raise,
)
from .manufactured import InjectedState, injected_state, manufactured_forcing, truncation_rates
from .continuation import (
    ContinuationPlan, SweepPoint, SweepResult, continuation_sweep, sweep_disagreement,
)

__all__ = [
    'AnnularGrid', 'GridError', 'GridOperators',
    'BoundaryConditionSpec', 'PrescribedWall',
    'DELTA_RING_RADIUS', 'delta_forcing',
    'NavierStokesSystem', 'assemble_system',
    'GridSolution',
    'NewtonOptions', 'NewtonResult', 'NewtonStatus', 'SolverDivergenceError', 'newton_solve', 'solve_or_raise',
    'InjectedState', 'injected_state', 'manufactured_forcing', 'truncation_rates',
    'ContinuationPlan', 'SweepPoint', 'SweepResult', 'continuation_sweep', 'sweep_disagreement',
]
