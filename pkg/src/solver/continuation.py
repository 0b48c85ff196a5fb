"""
参数延拓扫描
Parametric continuation sweeps

param1-first: 先在 param2 = param2[0] 上沿 param1 延拓出主链，
再以主链上每个解为起点沿 param2 延拓 (各分支链互相独立，可并发)。
param2-first 反之；both 两种顺序都做并分别记录。
"""
import concurrent.futures
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..fields.types import ParameterError
from ..utils.logger import get_logger
from .boundary import BoundaryConditionSpec
from .forcing import delta_forcing
from .grid import AnnularGrid
from .newton import NewtonOptions, NewtonStatus, newton_solve
from .solution import GridSolution
from .system import NavierStokesSystem

logger = get_logger(__name__)

SWEEP_MODES = ("force", "strain", "delta")
SWEEP_ORDERS = ("param1-first", "param2-first", "both")

ParamPoint = Tuple[float, float]


@dataclass(frozen=True)
class ContinuationPlan:
    """
    force: (𝓕, 𝓜)，strain: (𝓐, 𝓜)，delta: (𝓐, ·) 配合 delta_n 个δ近似
    """
    mode: str = "force"
    param1: Tuple[float, ...] = (0.0,)
    param2: Tuple[float, ...] = (0.0,)
    order: str = "param1-first"
    grid: AnnularGrid = field(default_factory=AnnularGrid)
    inner: str = "body"
    outer: str = "open"
    nu: float = 1.0
    delta_n: int = 1
    delta_eps: float = 0.1
    newton: NewtonOptions = field(default_factory=NewtonOptions)

    def __post_init__(self):
        if self.mode not in SWEEP_MODES:
            raise ParameterError(f"未知扫描模式 / unknown sweep mode: {self.mode}")
        if self.order not in SWEEP_ORDERS:
            raise ParameterError(f"未知扫描顺序 / unknown sweep order: {self.order}")
        if not self.param1 or not self.param2:
            raise ParameterError("参数列表不能为空 / parameter lists must not be empty")

    @staticmethod
    def values(start: float, stop: float, steps: int) -> Tuple[float, ...]:
        """包含端点的等距取值 / evenly spaced values including both ends"""
        if steps < 1:
            return (float(start),)
        return tuple(float(v) for v in np.linspace(start, stop, steps + 1))

    @property
    def orders(self) -> List[str]:
        return ["param1-first", "param2-first"] if self.order == "both" else [self.order]

    def boundary(self, p1: float, p2: float) -> BoundaryConditionSpec:
        if self.mode == "delta":
            return BoundaryConditionSpec(inner="regular", outer=self.outer)
        return BoundaryConditionSpec.from_parameters(self.mode, p1, p2, inner=self.inner, outer=self.outer)

    def system_for(self, p1: float, p2: float) -> NavierStokesSystem:
        forcing = delta_forcing(self.delta_n, p1, self.delta_eps) if self.mode == "delta" else None
        return NavierStokesSystem(self.grid, self.boundary(p1, p2), forcing=forcing, nu=self.nu)

    def chains(self, order: str) -> Tuple[List[ParamPoint], List[List[ParamPoint]]]:
        """返回 (主链, 分支链列表)；分支链第一个点即主链上的点"""
        if order == "param1-first":
            trunk = [(p1, self.param2[0]) for p1 in self.param1]
            branches = [[(p1, p2) for p2 in self.param2] for p1 in self.param1]
        else:
            trunk = [(self.param1[0], p2) for p2 in self.param2]
            branches = [[(p1, p2) for p1 in self.param1] for p2 in self.param2]
        return trunk, branches

    def to_dict(self) -> Dict[str, object]:
        return {"mode": self.mode, "param1": list(self.param1), "param2": list(self.param2),
                "order": self.order, "grid": self.grid.to_dict(), "inner": self.inner,
                "outer": self.outer, "nu": self.nu, "delta_n": self.delta_n, "delta_eps": self.delta_eps}


@dataclass
class SweepPoint:
    param1: float
    param2: float
    status: str
    iterations: int
    residual: float
    solution: Optional[GridSolution] = None

    @property
    def converged(self) -> bool:
        return self.status == NewtonStatus.CONVERGED.value


@dataclass
class SweepResult:
    order: str
    points: Dict[ParamPoint, SweepPoint] = field(default_factory=dict)

    def status_map(self) -> Dict[ParamPoint, str]:
        return {key: pt.status for key, pt in self.points.items()}

    def converged_solutions(self) -> List[SweepPoint]:
        return [pt for pt in self.points.values() if pt.converged and pt.solution is not None]

    def to_frame(self) -> pd.DataFrame:
        rows = [{"order": self.order, "param1": pt.param1, "param2": pt.param2, "status": pt.status,
                 "iterations": pt.iterations, "residual": pt.residual}
                for pt in sorted(self.points.values(), key=lambda p: (p.param1, p.param2))]
        return pd.DataFrame(rows)


def _run_chain(plan: ContinuationPlan, chain: Sequence[ParamPoint], seed: Optional[GridSolution],
               keep: bool, on_point: Optional[Callable[[SweepPoint], None]]) -> List[SweepPoint]:
    """沿链逐点求解，每点以最近一个收敛解为初值"""
    results = []
    last_good = seed
    for p1, p2 in chain:
        system = plan.system_for(p1, p2)
        start = None if last_good is None else last_good.state()
        params = {"mode": plan.mode, "param1": p1, "param2": p2}
        result = newton_solve(system, start, plan.newton, params)
        point = SweepPoint(p1, p2, result.status.value, result.iterations, result.final_residual,
                           result.solution if keep else None)
        if result.converged:
            last_good = result.solution
        else:
            logger.warning(f"扫描点未收敛 / point did not converge: ({p1:g}, {p2:g}) -> {result.status.value}")
        results.append(point)
        if on_point is not None:
            on_point(point)
    return results


def continuation_sweep(plan: ContinuationPlan, jobs: int = 1, keep_solutions: bool = True,
                       on_point: Optional[Callable[[SweepPoint], None]] = None) -> Dict[str, SweepResult]:
    """
    按计划执行延拓扫描，返回每种顺序的结果
    Execute the plan; one SweepResult per sweep order
    """
    outcomes = {}
    for order in plan.orders:
        trunk, branches = plan.chains(order)
        logger.info(f"延拓扫描 {order}: 主链 {len(trunk)} 点, 分支 {len(branches)} 条, jobs={jobs}")
        sweep = SweepResult(order)
        trunk_points = _run_chain(plan, trunk, None, True, on_point)
        for pt in trunk_points:
            sweep.points[(pt.param1, pt.param2)] = pt

        def branch(index: int) -> List[SweepPoint]:
            seed_point = trunk_points[index]
            seed = seed_point.solution if seed_point.converged else None
            return _run_chain(plan, branches[index][1:], seed, keep_solutions, on_point)

        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
            for chain_points in executor.map(branch, range(len(branches))):
                for pt in chain_points:
                    sweep.points[(pt.param1, pt.param2)] = pt

        if not keep_solutions:
            for pt in trunk_points:
                pt.solution = None
        outcomes[order] = sweep
    return outcomes


def sweep_disagreement(a: SweepResult, b: SweepResult) -> List[Tuple[float, float, str, str]]:
    """两种扫描顺序下状态不同的参数点 / parameter points whose status differs between two sweeps"""
    status_a, status_b = a.status_map(), b.status_map()
    return [(key[0], key[1], status_a[key], status_b[key])
            for key in sorted(set(status_a) & set(status_b)) if status_a[key] != status_b[key]]
