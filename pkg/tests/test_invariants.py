import numpy as np
import pytest

from src.fields import (
    AnalyticField, FieldKind, ParameterError, euler_net_force, gaussian_bump, gaussian_lift,
    gaussian_pair, parse_force_spec,
)
from src.invariants import (
    MomentQuadrature, contour_invariants, force_integral, invariants_at_radii, moment_coeffs,
    moment_envelope, torque_integral,
)
from src.solver import delta_forcing


def test_hamel_flux(hamel):
    triple = contour_invariants(hamel, 1.0, 50.0)
    assert triple.flux == pytest.approx(-3.0 * np.pi, abs=1e-10)
    assert triple.radius == 50.0


def test_hamel_invariants_do_not_depend_on_radius(hamel):
    inner, outer = invariants_at_radii(hamel, [10.0, 100.0])
    assert inner.close_to(outer, rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("m", [1.0, -2.5])
def test_harmonic_vortex_torque(m):
    field = AnalyticField.create(FieldKind.HARMONIC_VORTEX, M=m)
    triple = contour_invariants(field, 1.0, 10.0)
    assert triple.torque == pytest.approx(m, rel=1e-10)
    assert triple.flux == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(triple.force, 0.0, atol=1e-12)


@pytest.mark.parametrize("lam", [0.3, 0.6])
def test_euler_net_force_on_contour(lam):
    field = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.0)
    measured = contour_invariants(field, 1.0, 1e3, n_quad=2048, viscous=False).force
    expected = euler_net_force(1.0, lam, 0.0)
    assert np.linalg.norm(measured - expected) / np.linalg.norm(expected) < 5e-3


def test_contour_needs_enough_nodes(hamel):
    with pytest.raises(ValueError):
        contour_invariants(hamel, radius=10.0, n_quad=16)


def test_triple_serialises(hamel):
    row = contour_invariants(hamel, radius=10.0).to_dict()
    assert set(row) == {"radius", "flux", "force1", "force2", "torque"}


def test_lift_basis_moments():
    moments = moment_coeffs(gaussian_lift(0.7, -0.4, 1.1))
    np.testing.assert_allclose(moments.as_vector(), [0, 0, 0.7, -0.4, 1.1, 0, 0, 0, 0], atol=1e-10)
    assert moments.torque == pytest.approx(1.1)
    assert list(moments.to_dict()) == ["C01", "C02", "C11", "C12", "C13", "C21", "C22", "C23", "C24"]


def test_bump_integral_and_pair_torque():
    np.testing.assert_allclose(force_integral(gaussian_bump((0.5, -1.0), (2.0, 1.0), 0.6)), [2.0, 1.0], rtol=1e-8)
    pair = gaussian_pair(2.0, 1.0, 0.5)
    np.testing.assert_allclose(force_integral(pair), [0.0, 0.0], atol=1e-10)
    assert torque_integral(pair) == pytest.approx(2.0, rel=1e-8)


def test_moment_envelope_positive():
    assert moment_envelope(gaussian_bump((0.0, 0.0), (1.0, 0.0)), MomentQuadrature(64, 128)) > 1.0


def test_delta_forcing_integral():
    np.testing.assert_allclose(force_integral(delta_forcing(1, 0.5)), [-0.5, 0.0], rtol=1e-6, atol=1e-10)
    np.testing.assert_allclose(force_integral(delta_forcing(2, 0.5)), [0.0, 0.0], atol=1e-10)
    with pytest.raises(ParameterError):
        delta_forcing(0, 1.0)
    with pytest.raises(ParameterError):
        delta_forcing(2, 1.0, eps=0.0)


def test_force_spec_parsing():
    np.testing.assert_allclose(force_integral(parse_force_spec("bump:0,0,1,0,0.5")), [1.0, 0.0], rtol=1e-8)
    assert parse_force_spec("delta:3,1.0").label == "delta(n=3,A=1,eps=0.1)"
    assert parse_force_spec("lift:0.7,-0.4,1.1").label == "lift(0.7,-0.4,1.1)"
    for bad in ("lift:1,2", "spiral:1", "bump:a,b,c,d"):
        with pytest.raises(ParameterError):
            parse_force_spec(bad)
