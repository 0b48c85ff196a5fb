import numpy as np
import pytest

from src.fields import gaussian_bump, gaussian_lift, stokes_asymptotic_field
from src.invariants import moment_coeffs
from src.residual import (
    ConvolutionField, QuadratureError, QuadratureSpec, fit_decay, fit_first_moments, force_total,
    paradox_slope, stokes_convolution,
)

LIFT = (0.7, -0.4, 1.1)


def test_force_total_of_bump():
    bump = gaussian_bump((0.3, 0.2), (1.0, -0.5), 0.7)
    np.testing.assert_allclose(force_total(bump), [1.0, -0.5], rtol=1e-8)


def test_convolution_matches_first_asymptotic_terms():
    lift = gaussian_lift(*LIFT)
    moments = moment_coeffs(lift)
    asym = stokes_asymptotic_field(moments.c0, moments.c1)
    radii = np.geomspace(1e2, 1e3, 10)
    pts = np.stack([radii * np.cos(1.9), radii * np.sin(1.9)], axis=1)
    remainder = np.linalg.norm(stokes_convolution(lift, pts).u - asym.jet(pts).u, axis=1)
    assert fit_decay(radii, remainder).exponent <= -1.4


def test_first_moments_recovered_from_far_field():
    np.testing.assert_allclose(fit_first_moments(gaussian_lift(*LIFT)), LIFT, rtol=1e-2, atol=1e-3)


def test_paradox_slope():
    bump = gaussian_bump((0.3, 0.2), (1.0, -0.5), 0.7)
    expected = np.hypot(1.0, -0.5) / (4 * np.pi)
    assert paradox_slope(bump) == pytest.approx(expected, rel=0.05)


def test_coarse_quadrature_is_rejected():
    with pytest.raises(QuadratureError) as info:
        stokes_convolution(gaussian_lift(*LIFT), [[20.0, 0.0]], QuadratureSpec(n_radial=2, n_angular=4))
    assert info.value.estimate > 0.0


def test_convolution_field_inside_support():
    field = ConvolutionField(gaussian_bump((0.0, 0.0), (0.0, 1.0), 1.0))
    jet = field.jet([[0.5, 0.0], [0.0, 0.0]])
    assert np.all(np.isfinite(jet.u))
    assert abs(jet.u[1, 0]) < 1e-8
    assert jet.u[1, 1] == pytest.approx(-(np.euler_gamma + 1.0) / (8 * np.pi), rel=1e-4)
