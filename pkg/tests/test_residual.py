import numpy as np
import pytest

from src.fields import AnalyticField, FieldKind, ParameterError
from src.residual import (
    DecayFitError, OperatorKind, euler_identity, euler_ode_residual, fd_laplacian, fit_decay,
    fit_decay_samples, laplacian_of, ray_points, ray_residual, richardson_extrapolate,
    solve_euler_correction,
)


def test_fit_recovers_power_law():
    radii = np.geomspace(10.0, 1e3, 20)
    fit = fit_decay(radii, 3.0 * radii ** -2.0)
    assert fit.exponent == pytest.approx(-2.0)
    assert fit.prefactor == pytest.approx(3.0)
    assert fit.rms_log_residual < 1e-12
    assert fit.window == pytest.approx((10.0, 1e3))
    np.testing.assert_allclose(fit.predict([100.0]), [3e-4])


def test_fit_accepts_sample_pairs():
    radii = np.geomspace(1.0, 100.0, 10)
    fit = fit_decay_samples(list(zip(radii, radii ** -0.5)))
    assert fit.exponent == pytest.approx(-0.5)
    assert fit.n_samples == 10


@pytest.mark.parametrize("radii,values", [
    (np.geomspace(1, 10, 5), np.ones(5)),
    (np.geomspace(1, 10, 10), np.r_[np.ones(9), 0.0]),
    (np.geomspace(1, 10, 10), np.r_[np.ones(9), np.nan]),
    (np.geomspace(1, 10, 10), np.ones(9)),
    (np.full(10, 5.0), np.ones(10)),
])
def test_fit_rejects_bad_input(radii, values):
    with pytest.raises(DecayFitError):
        fit_decay(radii, values)


def test_richardson_removes_slow_tail():
    radii = np.array([1e3, 1e4, 3e4])
    values = np.stack([5.0 + 2.0 * radii ** (-1.0 / 3.0), -1.0 + 0.5 * radii ** (-1.0 / 3.0)], axis=1)
    np.testing.assert_allclose(richardson_extrapolate(radii, values, 1.0 / 3.0), [5.0, -1.0])
    scalar = richardson_extrapolate(radii, values[:, 0], 1.0 / 3.0)
    assert scalar.shape == (1,)
    with pytest.raises(DecayFitError):
        richardson_extrapolate([1e3], [1.0], 1.0)


def test_ray_points_window():
    pts = ray_points(np.pi / 2, (1.0, 100.0), 8)
    np.testing.assert_allclose(np.hypot(pts[:, 0], pts[:, 1])[[0, -1]], [1.0, 100.0])
    np.testing.assert_allclose(pts[:, 0], 0.0, atol=1e-12)
    with pytest.raises(DecayFitError):
        ray_points(0.0, (10.0, 1.0))


def test_operator_names():
    assert OperatorKind.from_string("NS", 2.0) == OperatorKind.navier_stokes(2.0)
    assert OperatorKind.from_string("stokes").nu == 0.0
    assert not OperatorKind.from_string("euler").needs_laplacian
    with pytest.raises(ParameterError):
        OperatorKind.from_string("oseen")


def test_hamel_stokes_residual_is_its_convection(hamel):
    """Hamel解精确满足NS，故Stokes残差等于 u·∇u ~ r^{-2}"""
    ray = ray_residual(hamel, OperatorKind.stokes(), 0.7, (1e2, 1e4), 16)
    assert ray.fits["magnitude"].exponent == pytest.approx(-2.0, abs=0.1)
    assert set(ray.to_frame().columns) == {"r", "f_par", "f_perp", "div"}


def test_finite_difference_laplacian_matches_analytic(hamel):
    pts = np.array([[5.0, 1.0], [-20.0, 7.0], [3.0, -40.0]])
    np.testing.assert_allclose(fd_laplacian(hamel, pts), hamel.laplacian_u(pts), rtol=1e-5, atol=1e-12)
    np.testing.assert_allclose(laplacian_of(hamel, pts), hamel.laplacian_u(pts))


def test_euler_profile_solves_its_ode():
    theta = np.linspace(0.0, 2.0 * np.pi, 33)
    np.testing.assert_allclose(euler_ode_residual(1.0, 0.5, 0.3, theta), 0.0, atol=1e-12)
    np.testing.assert_allclose(euler_ode_residual(1.0, 0.5, 0.3, theta, scale=1.1), 0.21, atol=1e-12)
    np.testing.assert_allclose(euler_identity(2.0, 0.6, 0.0, theta), 16.0 * 0.64, rtol=1e-12)


@pytest.mark.parametrize("lam,mu", [(0.0, 0.5), (0.3, 0.0), (0.3, 2.0), (0.6, 0.5)])
def test_euler_correction_integral(lam, mu):
    corr = solve_euler_correction(1.0, lam, mu)
    assert corr.integral_error / corr.expected_integral < 1e-6
    assert corr.flux == pytest.approx(-corr.integral)
    assert corr.mean == pytest.approx(corr.integral / (2 * np.pi))


@pytest.mark.parametrize("n_modes", [16, 65])
def test_euler_correction_mode_count(n_modes):
    with pytest.raises(ParameterError):
        solve_euler_correction(1.0, 0.3, 0.5, n_modes=n_modes)


def test_stokes_fundamental_field_decays_logarithmically():
    field = AnalyticField.create(FieldKind.STOKES_FUNDAMENTAL, F1=1.0, F2=0.0)
    jet = field.jet([[0.0, 1e2], [0.0, 1e3]])
    assert jet.u[1, 0] - jet.u[0, 0] == pytest.approx(np.log(10.0) / (4 * np.pi))
