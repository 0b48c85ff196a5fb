import numpy as np
import pytest

from src.fields import (
    AnalyticField, CutoffProfile, DomainError, FieldKind, ParameterError, Point, as_points,
    eval_asym_term, eval_hamel, euler_flux, euler_net_force, moments_to_a_vector, parse_assignments,
    rotation_matrix,
)
from src.residual import OperatorKind, apply_operator


def max_residual(op, field, points):
    f, div = apply_operator(op, field, points)
    return max(np.abs(f).max(), np.abs(div).max())


@pytest.mark.parametrize("amp,mu", [(1.0, 0.0), (0.5, 2.0), (-2.0, -1.0)])
def test_hamel_is_exact_navier_stokes(far_points, amp, mu):
    field = AnalyticField.create(FieldKind.HAMEL, A=amp, mu=mu)
    assert max_residual(OperatorKind.navier_stokes(1.0), field, far_points) < 1e-10


@pytest.mark.parametrize("m", [1.0, -3.0])
def test_harmonic_vortex_is_exact_outside_cutoff(far_points, m):
    field = AnalyticField.create(FieldKind.HARMONIC_VORTEX, M=m)
    assert max_residual(OperatorKind.navier_stokes(1.0), field, far_points) < 1e-10


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.6, 0.9])
def test_euler_leading_is_exact_euler(far_points, lam):
    field = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.4)
    assert max_residual(OperatorKind.euler(), field, far_points) < 1e-10


@pytest.mark.parametrize("kind,params", [
    ("stokes-fundamental", "F1=1,F2=-0.5"),
    ("asym0", "C01=0.3,C02=-1"),
    ("asym1", "C11=1,C12=0.2,C13=-0.7"),
    ("asym2", "A1=0.1,A2=0.4,A3=-0.2,A4=1"),
])
def test_stokes_terms_solve_stokes(far_points, kind, params):
    field = AnalyticField.from_strings(kind, params)
    f, div = apply_operator(OperatorKind.stokes(), field, far_points)
    scale = np.abs(field.jet(far_points).u).max()
    assert np.abs(f).max() < 1e-10 * max(scale, 1.0)
    assert np.abs(div).max() < 1e-10


def test_hamel_matches_polar_form():
    r, th = 9.0, 0.7
    jet = eval_hamel(2.0, 0.5, [[r * np.cos(th), r * np.sin(th)]])
    e_r = np.array([np.cos(th), np.sin(th)])
    e_t = np.array([-np.sin(th), np.cos(th)])
    expected = -1.5 / r * e_r + (2.0 / (2.0 * np.sqrt(r)) + 0.5 / r) * e_t
    np.testing.assert_allclose(jet.u[0], expected, rtol=1e-13)
    p = -(2.25 + 0.25) / (2 * r ** 2) - 4.0 / (4 * r) - 2 * 2.0 * 0.5 / 3 * r ** -1.5
    assert jet.p[0] == pytest.approx(p, rel=1e-13)


def test_rotation_covariance_of_hamel(hamel, rng):
    pts = rng.uniform(-20, 20, size=(20, 2))
    angle = 0.9
    rot = rotation_matrix(angle)
    rotated_field = hamel.jet(pts @ rot.T)
    expected = hamel.jet(pts).rotated(angle)
    np.testing.assert_allclose(rotated_field.u, expected.u, atol=1e-13)
    np.testing.assert_allclose(rotated_field.grad_u, expected.grad_u, atol=1e-13)
    np.testing.assert_allclose(rotated_field.p, expected.p, atol=1e-13)


def test_flow_jet_frame_columns(hamel):
    pts = np.array([[3.0, 4.0], [-5.0, 1.0]])
    frame = hamel.jet(pts).to_frame(pts)
    assert list(frame.columns[:5]) == ["x1", "x2", "u1", "u2", "p"]
    assert len(frame) == 2


def test_cutoff_profile_values():
    chi = CutoffProfile()
    np.testing.assert_allclose(chi.value([0.5, 1.0, 1.5, 2.0, 3.0]), [0.0, 0.0, 0.5, 1.0, 1.0], atol=1e-15)
    assert chi.derivative(1.5) == pytest.approx(30 * 0.0625)
    with pytest.raises(ParameterError):
        CutoffProfile(2.0, 1.0)


def test_origin_is_outside_domain(hamel):
    with pytest.raises(DomainError):
        hamel.jet([[0.0, 0.0]])
    with pytest.raises(DomainError):
        Point(0.0, 0.0).to_polar()


def test_strict_evaluation_enforces_validity_radius():
    wake = AnalyticField.create(FieldKind.WAKE, F1=-16.0 / 9.0, F2=0.0)
    with pytest.raises(DomainError):
        wake.jet([[5.0, 0.0]], strict=True)
    assert wake.jet([[5.0, 0.0]]).u.shape == (1, 2)
    with pytest.raises(DomainError):
        eval_asym_term(1, [1.0, 0.0, 0.0], [[1.5, 0.0]])


@pytest.mark.parametrize("build", [
    lambda: AnalyticField.create(FieldKind.HAMEL, B=1.0),
    lambda: AnalyticField.create(FieldKind.EULER_LEADING, lam=1.0),
    lambda: AnalyticField.create(FieldKind.WAKE, F1=0.0, F2=0.0),
    lambda: AnalyticField.from_strings("no-such-field"),
    lambda: AnalyticField.from_strings("wake", "F1=1", "terms=half"),
    lambda: eval_asym_term(3, [1.0], [[5.0, 0.0]]),
    lambda: eval_asym_term(1, [1.0, 2.0], [[5.0, 0.0]]),
])
def test_invalid_parameters_raise(build):
    with pytest.raises(ParameterError):
        build()


def test_as_points_accepts_points_and_arrays():
    assert as_points(Point(1.0, 2.0)).shape == (1, 2)
    assert as_points([Point(1.0, 2.0), Point(3.0, 4.0)]).shape == (2, 2)
    with pytest.raises(ValueError):
        as_points(np.zeros((3, 3)))


def test_parse_assignments():
    assert parse_assignments("A=1, mu=-0.5") == {"A": 1.0, "mu": -0.5}
    assert parse_assignments("terms=leading", numeric=False) == {"terms": "leading"}
    with pytest.raises(ParameterError):
        parse_assignments("A")
    with pytest.raises(ParameterError):
        parse_assignments("A=x")


def test_moments_to_a_vector():
    np.testing.assert_allclose(moments_to_a_vector([1.0, 2.0, 3.0, 4.0]), [-1.0, 1.0, -1.0, 2.0])


def test_euler_closed_forms():
    np.testing.assert_allclose(euler_net_force(1.0, 0.0), [0.0, 0.0])
    lam = 0.6
    expected = -0.5 * np.pi * (1 - np.sqrt(1 - lam ** 2)) / lam
    np.testing.assert_allclose(euler_net_force(1.0, lam, np.pi / 2), [0.0, expected], atol=1e-15)
    assert euler_flux(0.0) == pytest.approx(-3 * np.pi)
    with pytest.raises(ParameterError):
        euler_flux(1.0)


def test_flux_carrier_carries_flux():
    field = AnalyticField.create(FieldKind.FLUX_CARRIER, phi=2.5)
    th = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    pts = 3.0 * np.stack([np.cos(th), np.sin(th)], axis=1)
    flux = np.mean(np.einsum("ni,ni->n", field.jet(pts).u, pts / 3.0)) * 2 * np.pi * 3.0
    assert flux == pytest.approx(2.5, rel=1e-12)


@pytest.mark.parametrize("lam,angle", [(0.3, 1.1), (0.6, -2.5)])
def test_euler_leading_is_rotation_equivariant(far_points, lam, angle):
    rot = rotation_matrix(angle)
    base = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.4)
    turned = AnalyticField.create(FieldKind.EULER_LEADING, A=1.0, lam=lam, theta0=0.4 + angle)
    expected = base.jet(far_points).rotated(angle)
    actual = turned.jet(far_points @ rot.T)
    np.testing.assert_allclose(actual.u, expected.u, atol=1e-12 * np.abs(expected.u).max())
    np.testing.assert_allclose(actual.grad_u, expected.grad_u, atol=1e-12 * np.abs(expected.grad_u).max())
    np.testing.assert_allclose(actual.p, expected.p, atol=1e-12 * np.abs(expected.p).max())
