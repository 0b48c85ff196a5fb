import numpy as np
import pytest

from src.analysis import harmonic_fit, log_radii, ray_profile
from src.fields import DomainError, ParameterError
from src.invariants import contour_invariants, force_integral, invariants_at_radii
from src.solver import (
    AnnularGrid, BoundaryConditionSpec, GridError, GridSolution, NavierStokesSystem, NewtonOptions,
    NewtonStatus, SolverDivergenceError, assemble_system, delta_forcing, injected_state, newton_solve,
    solve_or_raise, truncation_rates,
)


@pytest.mark.parametrize("args", [(2.0, 1.0, 17, 32), (1.0, 10.0, 4, 32), (1.0, 10.0, 17, 9), (1.0, 10.0, 17, 6)])
def test_grid_validation(args):
    with pytest.raises(GridError):
        AnnularGrid(*args)


def test_grid_geometry(coarse_grid):
    assert coarse_grid.points().shape == (17 * 32, 2)
    assert coarse_grid.r[[0, -1]] == pytest.approx([1.0, 20.0])
    fine = coarse_grid.refined()
    assert fine.shape == (33, 64)
    np.testing.assert_allclose(fine.r[::2], coarse_grid.r)
    assert AnnularGrid.from_dict(coarse_grid.to_dict()) == coarse_grid


def test_difference_operators(coarse_grid):
    ops = coarse_grid.operators
    s = np.repeat(coarse_grid.s, coarse_grid.n_theta)
    np.testing.assert_allclose(ops.ds @ s ** 2, 2 * s, atol=1e-12)
    np.testing.assert_allclose(ops.dss @ s ** 2, 2.0, atol=1e-10)
    th = np.tile(coarse_grid.theta, coarse_grid.n_r)
    np.testing.assert_allclose(ops.dtt @ np.cos(th), -np.cos(th), atol=coarse_grid.dtheta ** 2 / 6)


def test_boundary_parameterisations():
    force = BoundaryConditionSpec.from_parameters("force", 2.0, 3.0)
    assert force.c0 == (-2.0, 0.0) and force.c1 == (0.0, 0.0, -3.0)
    strain = BoundaryConditionSpec.from_parameters("strain", 2.0, 3.0, inner="regular")
    assert strain.c0 == (0.0, 0.0) and strain.c1 == (-2.0, 0.0, -3.0)
    assert strain.inner == "regular"
    assert BoundaryConditionSpec().is_homogeneous
    with pytest.raises(ParameterError):
        BoundaryConditionSpec.from_parameters("shear", 1.0, 0.0)
    with pytest.raises(ParameterError):
        BoundaryConditionSpec(inner="slip")


def test_jacobian_is_exact_derivative(rng):
    grid = AnnularGrid(1.0, 10.0, 6, 8)
    bc = BoundaryConditionSpec.from_parameters("force", 1.0, 0.5)
    system = NavierStokesSystem(grid, bc, flux=0.7)
    state = rng.normal(size=system.size)
    direction = rng.normal(size=system.size)
    eps = 1e-3
    central = (system.residual(state + eps * direction) - system.residual(state - eps * direction)) / (2 * eps)
    np.testing.assert_allclose(system.jacobian(state) @ direction, central, rtol=1e-8, atol=1e-8)
    res, jac = assemble_system(grid, bc, state, flux=0.7)
    np.testing.assert_allclose(res, system.residual(state))
    assert jac.shape == (system.size, system.size)


def test_zero_data_gives_zero_solution(coarse_grid):
    result = newton_solve(NavierStokesSystem(coarse_grid))
    assert result.converged
    assert result.iterations == 1
    assert not np.any(result.solution.psi)


def test_small_force_solve(coarse_grid, quick_newton):
    bc = BoundaryConditionSpec.from_parameters("force", 0.5, 0.2)
    result = newton_solve(NavierStokesSystem(coarse_grid, bc), options=quick_newton, params={"F": 0.5})
    assert result.status is NewtonStatus.CONVERGED
    assert result.residual_norms[-1] < result.residual_norms[0]
    solution = result.solution
    assert solution.params == {"F": 0.5}
    assert solution.pressure()[-1].mean() == pytest.approx(0.0, abs=1e-12)

    u_wall = solution.velocity()[0]
    th = coarse_grid.theta
    radial = u_wall[:, 0] * np.cos(th) + u_wall[:, 1] * np.sin(th)
    expected = bc.velocity(th)
    expected_radial = expected[:, 0] * np.cos(th) + expected[:, 1] * np.sin(th)
    np.testing.assert_allclose(radial, expected_radial, atol=0.02 * np.abs(expected).max())


def test_stokes_limit_is_linear(coarse_grid, quick_newton):
    bc = BoundaryConditionSpec.from_parameters("strain", 0.3, 0.0)
    result = newton_solve(NavierStokesSystem(coarse_grid, bc, nu=0.0), options=quick_newton)
    assert result.converged
    assert result.iterations <= 3


def test_unconverged_solve_raises(coarse_grid):
    bc = BoundaryConditionSpec.from_parameters("force", 2.0, 0.0)
    with pytest.raises(SolverDivergenceError) as info:
        solve_or_raise(NavierStokesSystem(coarse_grid, bc), options=NewtonOptions(tol=1e-14, atol=1e-300, max_iter=1))
    assert not info.value.result.converged


def test_solution_persistence(tmp_path, coarse_grid, quick_newton):
    bc = BoundaryConditionSpec.from_parameters("force", 0.3, 0.0)
    solution = newton_solve(NavierStokesSystem(coarse_grid, bc), options=quick_newton,
                            params={"mode": "force"}).solution
    path = solution.to_npz(tmp_path / "solution.npz")
    loaded = GridSolution.from_npz(path)
    assert loaded.grid == coarse_grid
    np.testing.assert_array_equal(loaded.psi, solution.psi)
    assert loaded.params == {"mode": "force"}
    pts = np.array([[3.0, 4.0], [-7.0, 1.0]])
    np.testing.assert_allclose(loaded.jet(pts).u, solution.jet(pts).u)
    with pytest.raises(DomainError):
        loaded.jet([[0.5, 0.0]])
    frame = solution.to_frame()
    assert len(frame) == coarse_grid.size
    assert solution.to_csv(tmp_path / "solution.csv").exists()


def test_solution_interpolates_injected_vortex():
    grid = AnnularGrid(1.0, 20.0, 33, 64)
    injected = injected_state("harmonic-vortex", grid, M=2.0, core=0.0)
    solution = GridSolution.from_state(grid, injected.state)
    jet = solution.jet([[0.0, 5.0]])
    np.testing.assert_allclose(jet.u[0], [2.0 / (4 * np.pi * 5.0), 0.0], rtol=1e-3, atol=1e-6)


@pytest.mark.parametrize("kind", ["hamel", "harmonic-vortex"])
def test_truncation_error_is_second_order(kind, coarse_grid):
    norms, rates = truncation_rates(kind, coarse_grid, levels=3)
    assert len(norms) == 3
    assert all(1.7 <= rate <= 2.3 for rate in rates)


def test_injection_rejects_unknown_kind(coarse_grid):
    with pytest.raises(ParameterError):
        injected_state("wake", coarse_grid)


def test_open_outer_rows_leave_no_null_direction():
    grid = AnnularGrid(1.0, 10.0, 9, 8)
    for outer in ("open", "dirichlet"):
        bc = BoundaryConditionSpec.from_parameters("force", 0.0, 2.0, outer=outer)
        jac = NavierStokesSystem(grid, bc).jacobian(np.zeros(2 * grid.size)).toarray()
        sigma = np.linalg.svd(jac, compute_uv=False)
        assert sigma.min() > 1e-8 * sigma.max(), outer


def test_pure_torque_solve_is_the_exact_vortex(quick_newton):
    grid = AnnularGrid(1.0, 1e3, 65, 64)
    torque = 30.0 * np.pi
    bc = BoundaryConditionSpec.from_parameters("force", 0.0, torque)
    result = newton_solve(NavierStokesSystem(grid, bc), options=quick_newton)
    assert result.converged
    slope = torque / (4.0 * np.pi)
    np.testing.assert_allclose(result.solution.psi, np.repeat(slope * grid.s[:, None], grid.n_theta, axis=1),
                               atol=1e-7 * slope * grid.s[-1])
    np.testing.assert_allclose(result.solution.omega, 0.0, atol=1e-7)


@pytest.mark.parametrize("outer", ["open", "dirichlet"])
def test_force_solution_is_reflection_symmetric(outer, quick_newton):
    grid = AnnularGrid(1.0, 200.0, 49, 64)
    bc = BoundaryConditionSpec.from_parameters("force", np.pi, 0.0, outer=outer)
    solution = newton_solve(NavierStokesSystem(grid, bc), options=quick_newton).solution
    mirror = (-np.arange(grid.n_theta)) % grid.n_theta
    scale = np.abs(solution.psi).max()
    np.testing.assert_allclose(solution.psi[:, mirror], -solution.psi, atol=1e-8 * scale)
    np.testing.assert_allclose(solution.omega[:, mirror], -solution.omega, atol=1e-8 * np.abs(solution.omega).max())
    triple = contour_invariants(solution, radius=20.0)
    assert abs(triple.torque) <= 1e-6 * np.linalg.norm(triple.force)
    assert abs(triple.force[1]) <= 1e-6 * abs(triple.force[0])


class SluggishSystem(NavierStokesSystem):
    """雅可比放大1000倍：每步只走精确步长的千分之一"""

    def jacobian(self, state):
        return 1e3 * super().jacobian(state)


def test_small_step_above_target_is_not_convergence(coarse_grid):
    bc = BoundaryConditionSpec.from_parameters("force", 0.5, 0.2)
    options = NewtonOptions(tol=1e-9, atol=1e-12, max_iter=20, step_tol=1.0)
    result = newton_solve(SluggishSystem(coarse_grid, bc, nu=0.0), options=options)
    assert result.status is NewtonStatus.STAGNATED
    assert not result.converged
    assert result.solution.status == "stagnated"
    assert result.final_residual == pytest.approx(0.999 * result.residual_norms[0], rel=1e-6)
    with pytest.raises(SolverDivergenceError):
        solve_or_raise(SluggishSystem(coarse_grid, bc, nu=0.0), options=options)

    exact = newton_solve(NavierStokesSystem(coarse_grid, bc, nu=0.0), options=options)
    assert exact.status is NewtonStatus.CONVERGED
    assert exact.final_residual <= 1e-9 * exact.residual_norms[0]


@pytest.mark.slow
def test_forcing_run_conserves_force_and_ignores_hole_size(quick_newton):
    force = delta_forcing(1, 1.0, eps=1.0)
    expected = force_integral(force)
    scale = np.linalg.norm(expected)
    measured, exponents = [], []
    for r_inner in (0.05, 0.1):
        grid = AnnularGrid(r_inner, 1e3, 193, 192)
        system = NavierStokesSystem(grid, BoundaryConditionSpec(inner="regular"), forcing=force)
        result = newton_solve(system, options=quick_newton)
        assert result.converged, r_inner
        near, far = invariants_at_radii(result.solution, [30.0, 80.0], n_quad=512)
        assert np.linalg.norm(near.force - far.force) <= 0.05 * scale
        measured.append(far.force)
        exponents.append(ray_profile(result.solution, log_radii((20.0, 100.0), 12)).decay().exponent)
    np.testing.assert_allclose(measured[0], expected, atol=0.05 * scale)
    np.testing.assert_allclose(measured[1], measured[0], atol=0.02 * scale)
    assert exponents[1] == pytest.approx(exponents[0], abs=0.05)


@pytest.fixture(scope="module")
def desk_grid():
    return AnnularGrid(1.0, 1e3, 192, 384)


@pytest.mark.slow
def test_desk_force_run_has_a_single_wake(desk_grid):
    bc = BoundaryConditionSpec.from_parameters("force", 2.0 * np.pi, 0.0)
    result = newton_solve(NavierStokesSystem(desk_grid, bc))
    assert result.converged
    profile = ray_profile(result.solution, log_radii((30.0, 300.0), 16))
    assert -0.45 <= profile.decay().exponent <= -0.25
    assert profile.angle_stats()[1] < 0.2


@pytest.mark.slow
def test_desk_torque_run_is_harmonic(desk_grid):
    torque = 30.0 * np.pi
    bc = BoundaryConditionSpec.from_parameters("force", 0.0, torque)
    result = newton_solve(NavierStokesSystem(desk_grid, bc))
    assert result.converged
    fit = harmonic_fit(result.solution, (30.0, 300.0))
    assert fit.mu > 0.0
    assert fit.mu == pytest.approx(torque / (4.0 * np.pi), rel=1e-3)
    assert fit.relative < 0.1
    exponent = ray_profile(result.solution, log_radii((30.0, 300.0), 16)).decay().exponent
    assert -1.15 <= exponent <= -0.85


def test_boundary_velocity_has_zero_flux():
    bc = BoundaryConditionSpec((0.3, -1.2), (0.5, 0.7, 2.0))
    theta = 2.0 * np.pi * np.arange(256) / 256
    normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    flux = np.sum(np.einsum("ni,ni->n", bc.velocity(theta), normals)) * 2.0 * np.pi / theta.size
    assert flux == pytest.approx(0.0, abs=1e-14)


def test_body_run_invariants_do_not_depend_on_radius(quick_newton):
    grid = AnnularGrid(1.0, 200.0, 49, 64)
    bc = BoundaryConditionSpec.from_parameters("force", np.pi, 0.0)
    solution = newton_solve(NavierStokesSystem(grid, bc), options=quick_newton).solution
    near, far = invariants_at_radii(solution, [10.0, 40.0])
    scale = np.linalg.norm(near.force)
    assert scale > 0.0
    assert np.linalg.norm(near.force - far.force) <= 0.05 * scale
    assert abs(near.flux) <= 1e-4 * scale and abs(far.flux) <= 1e-4 * scale
