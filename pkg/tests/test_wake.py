import numpy as np
import pytest

from src.fields import DomainError, ParameterError, Point, rotation_matrix
from src.wake import (
    ConformalCoords, WakeParameters, conformal_basis, conformal_map, default_rays, eval_wake,
    from_conformal, leading_wake_speed, to_conformal, wake_field, wake_profiles, wake_residual_orders,
)

UNIT_FORCE = (-16.0 / 9.0, 0.0)


def test_parameters_from_force():
    params = WakeParameters.from_force(UNIT_FORCE)
    assert params.a == pytest.approx(1.0)
    assert params.theta0 == pytest.approx(0.0)
    np.testing.assert_allclose(params.net_force, UNIT_FORCE)


def test_parameters_from_amplitude():
    params = WakeParameters.from_amplitude(1.5, 0.5)
    again = WakeParameters.from_force(params.force)
    assert again.a == pytest.approx(1.5)
    assert again.theta0 == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        WakeParameters.from_amplitude(0.0)
    with pytest.raises(ParameterError):
        WakeParameters.from_force((0.0, 0.0))


def test_conformal_map_on_positive_axis():
    coords = to_conformal(Point(8.0, 0.0))
    assert (coords.xbar1, coords.xbar2) == pytest.approx((2.0, 0.0))
    assert coords.scale_factor == pytest.approx(12.0)
    np.testing.assert_allclose(conformal_map(np.array([[8.0, 0.0]])), [[2.0, 0.0]])
    back = from_conformal(coords)
    assert (back.x1, back.x2) == pytest.approx((8.0, 0.0))


def test_conformal_map_rejects_bad_input():
    with pytest.raises(DomainError):
        to_conformal(Point(0.0, 0.0))
    with pytest.raises(ParameterError):
        to_conformal(Point(1.0, 0.0), p=1.5)
    with pytest.raises(DomainError):
        from_conformal(ConformalCoords(-1.0, 0.0))


def test_conformal_basis_on_axis():
    e1, e2 = conformal_basis(np.array([[5.0, 0.0]]))
    np.testing.assert_allclose(e1, [[1.0, 0.0]])
    np.testing.assert_allclose(e2, [[0.0, 1.0]])


def test_profiles_are_finite_far_from_axis():
    values = wake_profiles(1.0, np.array([0.0, 1.0, 1e4, -1e4]))
    for series in values:
        assert np.all(np.isfinite(series))
    assert values.phi0[0] == pytest.approx(0.0)
    assert values.rho0[0] == pytest.approx(4.0 / 27.0 * (7.0 - 4.0 * np.log(2.0)))
    with pytest.raises(ParameterError):
        wake_profiles(-1.0, [0.0])
    with pytest.raises(ParameterError):
        wake_profiles(1.0, [0.0], variant="other")


def test_leading_speed_on_centre_line():
    speed = leading_wake_speed(1.0, 0.0, [[1e3, 0.0]])
    assert speed[0] == pytest.approx(2.0 / 3.0 / 10.0)


def test_leading_terms_match_speed_model():
    pts = np.array([[1e4, 0.0], [1e4 * np.cos(0.02), 1e4 * np.sin(0.02)]])
    speed = eval_wake(UNIT_FORCE, pts, terms="leading").speed
    np.testing.assert_allclose(speed, leading_wake_speed(1.0, 0.0, pts), rtol=0.02)


def test_wake_strict_region():
    with pytest.raises(DomainError):
        eval_wake(UNIT_FORCE, [[5.0, 0.0]])
    assert eval_wake(UNIT_FORCE, [[5.0, 0.0]], strict=False).speed[0] == pytest.approx(0.0, abs=1e-12)
    assert wake_field(UNIT_FORCE, "leading").option_dict == {"terms": "leading"}


def test_default_rays_straddle_wake_axis():
    rays = default_rays((0.0, -1.0))
    theta0 = np.pi / 2
    assert len(rays) == 8
    assert min(rays) == pytest.approx(theta0 - 0.3)
    assert max(rays) == pytest.approx(theta0 + 0.3)


@pytest.mark.slow
def test_residual_orders_inside_wake():
    rays = wake_residual_orders(UNIT_FORCE, rays=[0.05, -0.2], n_samples=16)
    for ray in rays:
        assert ray.fits["parallel"].exponent <= -7.0 / 3.0 + 0.15
        assert ray.fits["perpendicular"].exponent <= -8.0 / 3.0 + 0.15


@pytest.mark.parametrize("angle", [0.8, -2.3])
def test_wake_is_rotation_equivariant(rng, angle):
    r = np.exp(rng.uniform(np.log(20.0), np.log(1e4), 100))
    th = rng.uniform(-np.pi, np.pi, 100)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    rot = rotation_matrix(angle)
    force = 1.3 * np.array(UNIT_FORCE)
    turned = eval_wake(rot @ force, pts @ rot.T)
    expected = eval_wake(force, pts).rotated(angle)
    scale = np.abs(expected.u).max()
    np.testing.assert_allclose(turned.u, expected.u, atol=1e-12 * scale)
    np.testing.assert_allclose(turned.grad_u, expected.grad_u, atol=1e-12 * np.abs(expected.grad_u).max())
    np.testing.assert_allclose(turned.p, expected.p, atol=1e-12 * np.abs(expected.p).max())
