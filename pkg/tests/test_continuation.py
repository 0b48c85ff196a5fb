import threading

import pytest

from src.fields import ParameterError
from src.solver import (
    AnnularGrid, ContinuationPlan, NewtonOptions, SweepPoint, continuation_sweep, sweep_disagreement,
)
from src.solver.continuation import SweepResult

TINY_GRID = AnnularGrid(1.0, 20.0, 9, 16)
QUICK = NewtonOptions(tol=1e-9, atol=1e-11, max_iter=20)


def test_values_include_both_ends():
    assert ContinuationPlan.values(0.0, 1.0, 2) == (0.0, 0.5, 1.0)
    assert ContinuationPlan.values(3.0, 9.0, 0) == (3.0,)


def test_chains_param1_first():
    plan = ContinuationPlan(param1=(0.0, 1.0), param2=(0.0, 2.0, 4.0))
    trunk, branches = plan.chains("param1-first")
    assert trunk == [(0.0, 0.0), (1.0, 0.0)]
    assert branches[1] == [(1.0, 0.0), (1.0, 2.0), (1.0, 4.0)]
    trunk, branches = plan.chains("param2-first")
    assert trunk == [(0.0, 0.0), (0.0, 2.0), (0.0, 4.0)]
    assert len(branches) == 3 and branches[2][-1] == (1.0, 4.0)


@pytest.mark.parametrize("kwargs", [{"mode": "shear"}, {"order": "diagonal"}, {"param1": ()}])
def test_plan_validation(kwargs):
    with pytest.raises(ParameterError):
        ContinuationPlan(**kwargs)


def test_delta_mode_uses_regular_inner_boundary():
    plan = ContinuationPlan(mode="delta", param1=(0.5,), grid=TINY_GRID, delta_n=3)
    assert plan.boundary(0.5, 0.0).inner == "regular"
    assert plan.system_for(0.5, 0.0).forcing.label.startswith("delta(n=3")
    assert plan.orders == ["param1-first"]
    assert ContinuationPlan(order="both").orders == ["param1-first", "param2-first"]


def test_sweep_both_orders():
    plan = ContinuationPlan(mode="force", param1=(0.0, 0.25), param2=(0.0, 0.25), order="both",
                            grid=TINY_GRID, newton=QUICK)
    seen = []
    lock = threading.Lock()

    def record(point: SweepPoint):
        with lock:
            seen.append((point.param1, point.param2))

    results = continuation_sweep(plan, jobs=2, on_point=record)
    assert set(results) == {"param1-first", "param2-first"}
    assert len(seen) == 8
    for sweep in results.values():
        assert len(sweep.points) == 4
        assert all(pt.converged for pt in sweep.points.values())
        frame = sweep.to_frame()
        assert list(frame[["param1", "param2"]].itertuples(index=False, name=None)) == [
            (0.0, 0.0), (0.0, 0.25), (0.25, 0.0), (0.25, 0.25)]
    assert sweep_disagreement(results["param1-first"], results["param2-first"]) == []


def test_sweep_can_drop_solutions():
    plan = ContinuationPlan(mode="strain", param1=(0.0, 0.2), param2=(0.0,), grid=TINY_GRID, newton=QUICK)
    sweep = continuation_sweep(plan, keep_solutions=False)["param1-first"]
    assert all(pt.solution is None for pt in sweep.points.values())
    assert sweep.converged_solutions() == []


def test_disagreement_lists_status_changes():
    a = SweepResult("param1-first", {(0.0, 0.0): SweepPoint(0.0, 0.0, "converged", 1, 0.0),
                                     (1.0, 0.0): SweepPoint(1.0, 0.0, "diverged", 3, 1.0)})
    b = SweepResult("param2-first", {(0.0, 0.0): SweepPoint(0.0, 0.0, "converged", 1, 0.0),
                                     (1.0, 0.0): SweepPoint(1.0, 0.0, "converged", 4, 1e-12)})
    assert sweep_disagreement(a, b) == [(1.0, 0.0, "diverged", "converged")]
