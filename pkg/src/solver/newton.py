"""
带回溯的阻尼Newton迭代
Damped Newton iteration with backtracking

不收敛以状态返回，不抛异常；调用方 (命令行) 决定如何处理。
"""
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
import psutil
from scipy.sparse.linalg import splu

from ..utils.config import Config
from ..utils.logger import get_logger
from .solution import GridSolution
from .system import NavierStokesSystem

logger = get_logger(__name__)


class NewtonStatus(str, Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    MAX_ITER = "max-iter"
    LINEAR_FAILURE = "linear-failure"
    STAGNATED = "stagnated"


@dataclass(frozen=True)
class NewtonOptions:
    tol: float = Config.SOLVER_TOL
    atol: float = Config.SOLVER_ATOL
    max_iter: int = Config.SOLVER_MAX_ITER
    damping: float = 1.0
    max_halvings: int = 8
    step_tol: float = 1e-12

    @classmethod
    def from_config(cls) -> "NewtonOptions":
        defaults = Config.get_solver_defaults()
        return cls(defaults["tol"], defaults["atol"], defaults["max_iter"])


@dataclass
class NewtonResult:
    solution: GridSolution
    status: NewtonStatus
    iterations: int
    residual_norms: List[float] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status is NewtonStatus.CONVERGED

    @property
    def final_residual(self) -> float:
        return self.residual_norms[-1] if self.residual_norms else float("nan")


class SolverDivergenceError(RuntimeError):
    """Newton未收敛；携带最后的结果 / carries the last NewtonResult"""

    def __init__(self, result: NewtonResult):
        super().__init__(f"Newton迭代未收敛 / Newton solve failed: {result.status.value} "
                         f"after {result.iterations} iterations (residual {result.final_residual:.3g})")
        self.result = result


def _memory_mb() -> float:
    return psutil.Process().memory_info().rss / 1024 / 1024


def newton_solve(system: NavierStokesSystem, seed: Optional[np.ndarray] = None,
                 options: Optional[NewtonOptions] = None, params: Optional[dict] = None) -> NewtonResult:
    """
    求解 F(X) = 0，收敛判据 ‖F‖ ≤ max(tol·‖F₀‖, atol)
    步长相对小于 step_tol 而残差未达标时返回 STAGNATED
    Solve the discrete system from a zero or warm-start seed
    """
    options = options or NewtonOptions()
    start = time.perf_counter()
    logger.debug(f"Newton开始: 未知量 {system.size}, 内存 {_memory_mb():.1f} MB")

    state = np.zeros(system.size) if seed is None else np.array(seed, dtype=float, copy=True)
    res = system.residual(state)
    norm = float(np.linalg.norm(res))
    target = max(options.tol * norm, options.atol)
    norms = [norm]
    status = NewtonStatus.MAX_ITER
    iterations = 0

    for iterations in range(1, options.max_iter + 1):
        if norm <= target:
            status = NewtonStatus.CONVERGED
            break
        try:
            lu = splu(system.jacobian(state).tocsc())
            delta = lu.solve(-res)
        except (RuntimeError, ValueError) as e:
            logger.warning(f"线性求解失败 / linear solve failed: {e}")
            status = NewtonStatus.LINEAR_FAILURE
            break
        if not np.all(np.isfinite(delta)):
            status = NewtonStatus.LINEAR_FAILURE
            break

        step, halvings = options.damping, 0
        while True:
            trial = state + step * delta
            trial_res = system.residual(trial)
            trial_norm = float(np.linalg.norm(trial_res))
            if np.isfinite(trial_norm) and trial_norm < (1.0 - 1e-4 * step) * norm:
                break
            if halvings >= options.max_halvings:
                break
            step *= 0.5
            halvings += 1

        logger.debug(f"Newton第{iterations}步: ‖F‖={trial_norm:.3e}, 步长={step:g}, 折半={halvings}")
        if not (np.isfinite(trial_norm) and trial_norm < norm):
            status = NewtonStatus.DIVERGED
            break
        small_step = step * np.linalg.norm(delta) <= options.step_tol * max(1.0, np.linalg.norm(trial))
        state, res, norm = trial, trial_res, trial_norm
        norms.append(norm)
        if small_step:
            status = NewtonStatus.CONVERGED if norm <= target else NewtonStatus.STAGNATED
            break
    else:
        if norm <= target:
            status = NewtonStatus.CONVERGED

    elapsed = time.perf_counter() - start
    logger.debug(f"Newton结束: {status.value}, {iterations} 次迭代, {elapsed:.2f}s, 内存 {_memory_mb():.1f} MB")
    forcing_values = None
    if system.forcing is not None:
        forcing_values = system.forcing.values(system.grid.points())
    solution = GridSolution.from_state(system.grid, state, flux=system.flux, nu=system.nu,
                                       params=dict(params or {}), status=status.value,
                                       forcing_values=forcing_values)
    return NewtonResult(solution, status, iterations, norms, elapsed)


def solve_or_raise(system: NavierStokesSystem, seed: Optional[np.ndarray] = None,
                   options: Optional[NewtonOptions] = None, params: Optional[dict] = None) -> NewtonResult:
    result = newton_solve(system, seed, options, params)
    if not result.converged:
        raise SolverDivergenceError(result)
    return result
