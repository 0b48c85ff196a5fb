import numpy as np
import pytest

from src.fields import (
    AnalyticField, DomainError, FieldKind, ParameterError, cross_corrector_angles, eval_cross_corrector,
    eval_perturb_iterate, first_order_field,
)
from src.residual import advected_residual, fit_decay, ray_points

A_VEC = (0.4, 1.0, 0.5, -0.8)


def stream_corrector(a_vec=A_VEC, nu=1.0):
    return AnalyticField.create(FieldKind.CROSS_CORRECTOR, options={"form": "stream", "amplitude": "squared"},
                                A0=a_vec[0], A1=a_vec[1], A2=a_vec[2], A3=a_vec[3], nu=nu)


def test_angles_squared_amplitude():
    angles = cross_corrector_angles(A_VEC, "squared")
    assert angles.amp1 == pytest.approx(np.hypot(1.0, 0.5))
    assert angles.amp2 == pytest.approx(np.sqrt(4 * 0.16 + 0.64))
    beta = np.arctan2(0.5, 1.0)
    assert angles.theta1 == pytest.approx(np.arctan2(-0.8, -0.8) - beta)
    assert angles.theta2 == pytest.approx(np.pi / 2 - 2 * beta)


def test_printed_amplitude_needs_nonnegative_radicand():
    assert cross_corrector_angles((1.0, 1.0, 0.0, 0.5)).amp2 == pytest.approx(np.sqrt(4.5))
    with pytest.raises(ParameterError):
        cross_corrector_angles((0.1, 1.0, 0.0, -1.0))
    with pytest.raises(ParameterError):
        AnalyticField.create(FieldKind.CROSS_CORRECTOR, A0=0.1, A1=1.0, A3=-1.0)
    with pytest.raises(ParameterError):
        cross_corrector_angles(A_VEC, "cubed")


def test_stream_form_is_divergence_free(far_points):
    jet = stream_corrector().jet(far_points)
    assert np.abs(jet.divergence).max() < 1e-12


def test_displayed_form_requires_two_inner_radii():
    with pytest.raises(DomainError):
        eval_cross_corrector((0.0, 1.0, 0.0, 1.0), 1.0, [[1.5, 0.0]])
    jet = eval_cross_corrector((0.0, 1.0, 0.0, 1.0), 1.0, [[3.0, 4.0]])
    assert np.all(np.isfinite(jet.u))


@pytest.mark.parametrize("theta", [0.1, 2.0, 4.2])
def test_corrector_cancels_slowest_nonlinear_term(theta):
    pts = ray_points(theta, (1e2, 1e4), 16)
    residual = np.linalg.norm(advected_residual(stream_corrector(), first_order_field(A_VEC), 1.0, pts), axis=1)
    assert fit_decay(np.hypot(pts[:, 0], pts[:, 1]), residual).exponent <= -3.5


def test_first_order_iterate_matches_asymptotic_term():
    pts = np.array([[5.0, 1.0], [-3.0, 7.0]])
    iterate = eval_perturb_iterate(1, 0.3, -0.2, 0.7, pts)
    direct = AnalyticField.create(FieldKind.ASYM_TERM1, C11=0.3, C12=-0.2, C13=0.7).jet(pts)
    np.testing.assert_allclose(iterate.u, direct.u, atol=1e-15)


def test_perturb_iterate_order_is_checked():
    with pytest.raises(ParameterError):
        eval_perturb_iterate(4, 1.0, 0.0, 0.0, [[5.0, 0.0]])
