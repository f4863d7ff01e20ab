import cmath
import math

import numpy as np
import pytest

from closed_forms import b2_qq, b2_qqbar, c2_qqqbar, eigenvectors_closed
from hopf_core import (
    DegenerateSpectrumError,
    FiniteDifferenceMultilinear,
    NotCriticalError,
    classify_hopf,
    gauge_transform,
    hopf_class_from_l1,
    hopf_frame,
    l1_numeric,
    lyapunov_coefficient,
    multilinear_B,
    multilinear_C,
    transversality,
    transversality_finite_difference,
)
from models import HopfClass
from numeric_core import NumericalError, hermitian_inner
from stability import critical_params
from tests.conftest import L1_REFERENCE, random_points


def test_frame_eigenvectors(watt_point):
    frame = hopf_frame(watt_point)
    omega0 = math.sqrt(1.5)
    assert frame.omega0 == pytest.approx(omega0)
    np.testing.assert_allclose(frame.A @ frame.q, 1j * omega0 * frame.q, atol=1e-12)
    np.testing.assert_allclose(frame.A.T @ frame.p, -1j * omega0 * frame.p, atol=1e-12)
    assert frame.q[0] == pytest.approx(-1j)
    assert hermitian_inner(frame.p, frame.q) == pytest.approx(1.0)


def test_frame_matches_closed_form_eigenvectors(hexagonal_point):
    frame = hopf_frame(hexagonal_point)
    q, p = eigenvectors_closed(*hexagonal_point.point())
    np.testing.assert_allclose(frame.q, q, atol=1e-10)
    np.testing.assert_allclose(frame.p, p, atol=1e-10)


def test_frame_requires_critical_damping(watt_point):
    with pytest.raises(NotCriticalError):
        hopf_frame(watt_point.with_epsilon(1.1 * watt_point.epsilon))


def test_frame_rejects_a_vanishing_real_eigenvalue():
    # eps_c is proportional to alpha, so a tiny gain pushes -eps_c onto the imaginary axis
    params = critical_params(0.5, 1e-13)
    with pytest.raises(DegenerateSpectrumError):
        hopf_frame(params)


def test_frame_failures_are_numerical_errors():
    assert issubclass(DegenerateSpectrumError, NumericalError)
    assert issubclass(NotCriticalError, NumericalError)


@pytest.mark.parametrize("point, expected", list(L1_REFERENCE.items()))
def test_l1_reference_values(point, expected):
    assert l1_numeric(*point) == pytest.approx(expected, rel=1e-9)


def test_watt_g21_and_its_parts(watt_point):
    report = lyapunov_coefficient(watt_point)
    assert report.g21.real == pytest.approx(-0.6578132796134472, rel=1e-10)
    assert report.g21.imag == pytest.approx(-1.3402189471397805, rel=1e-10)
    assert report.cubic_part == pytest.approx(-0.6187184335382291, rel=1e-10)
    assert report.h11_part == pytest.approx(0.5745242597140691, rel=1e-10)
    assert report.h20_part == pytest.approx(-0.613619105789287, rel=1e-10)
    assert report.cubic_part + report.h11_part + report.h20_part == pytest.approx(report.g21.real)
    assert report.classification is HopfClass.SUPERCRITICAL
    assert report.h20_residual < 1e-12
    assert report.solvability_residual < 1e-10


def test_parts_at_hexagonal_points():
    report = lyapunov_coefficient(critical_params(0.3, 2.0, 0.5, 0.4))
    assert report.cubic_part == pytest.approx(-0.662203203355242, rel=1e-9)
    assert report.h11_part == pytest.approx(0.6531339954669375, rel=1e-9)
    assert report.h20_part == pytest.approx(-0.5684165767512367, rel=1e-9)

    report = lyapunov_coefficient(critical_params(0.8, 0.7, 1.3, 0.2))
    assert report.cubic_part == pytest.approx(-0.6236297069151837, rel=1e-9)
    assert report.h11_part == pytest.approx(-0.40983453812458454, rel=1e-9)
    assert report.h20_part == pytest.approx(0.06936916232516008, rel=1e-9)


def test_h11_is_real(hexagonal_point):
    report = lyapunov_coefficient(hexagonal_point)
    assert np.max(np.abs(report.h11.imag)) < 1e-12


def test_closed_form_multilinear_components(hexagonal_point):
    frame = hopf_frame(hexagonal_point)
    q, q_bar = frame.q, np.conj(frame.q)
    point = hexagonal_point.point()
    assert multilinear_B(q, q, hexagonal_point)[1] == pytest.approx(b2_qq(*point), rel=1e-10)
    assert multilinear_B(q, q_bar, hexagonal_point)[1] == pytest.approx(b2_qqbar(*point), rel=1e-10)
    assert multilinear_C(q, q, q_bar, hexagonal_point)[1] == pytest.approx(c2_qqqbar(*point), rel=1e-10)


def test_finite_difference_forms_agree_with_closed_forms(hexagonal_point):
    forms = FiniteDifferenceMultilinear(hexagonal_point)
    frame = hopf_frame(hexagonal_point)
    q, q_bar = frame.q, np.conj(frame.q)
    np.testing.assert_allclose(forms.B(q, q), multilinear_B(q, q, hexagonal_point), rtol=1e-6, atol=1e-7)
    np.testing.assert_allclose(
        forms.C(q, q, q_bar), multilinear_C(q, q, q_bar, hexagonal_point), rtol=1e-5, atol=1e-5
    )
    closed = lyapunov_coefficient(frame)
    numeric = lyapunov_coefficient(frame, forms=forms)
    assert numeric.l1 == pytest.approx(closed.l1, rel=1e-4)


def test_finite_difference_forms_at_random_points():
    rng = np.random.default_rng(11)
    for point in random_points(rng, 50):
        params = critical_params(*point)
        forms = FiniteDifferenceMultilinear(params)
        u, v, w = (rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(3))
        u, v, w = u / np.linalg.norm(u), v / np.linalg.norm(v), w / np.linalg.norm(w)
        closed_b = multilinear_B(u, v, params)
        closed_c = multilinear_C(u, v, w, params)
        assert np.linalg.norm(forms.B(u, v) - closed_b) <= 1e-5 * max(1.0, np.linalg.norm(closed_b)), point
        assert np.linalg.norm(forms.C(u, v, w) - closed_c) <= 1e-4 * max(1.0, np.linalg.norm(closed_c)), point


def test_l1_is_invariant_under_unit_gauge(hexagonal_point):
    frame = hopf_frame(hexagonal_point)
    rotated = gauge_transform(frame, cmath.exp(0.7j))
    assert hermitian_inner(rotated.p, rotated.q) == pytest.approx(1.0)
    assert lyapunov_coefficient(rotated).l1 == pytest.approx(lyapunov_coefficient(frame).l1, rel=1e-12)


def test_g21_scales_with_the_squared_gauge_modulus(hexagonal_point):
    frame = hopf_frame(hexagonal_point)
    scale = 2.0 * cmath.exp(0.3j)
    scaled = gauge_transform(frame, scale)
    assert hermitian_inner(scaled.p, scaled.q) == pytest.approx(1.0)
    original = lyapunov_coefficient(frame)
    report = lyapunov_coefficient(scaled)
    assert report.g21 == pytest.approx(abs(scale) ** 2 * original.g21, rel=1e-10)
    assert report.l1 == pytest.approx(4.0 * original.l1, rel=1e-10)
    assert report.classification is original.classification


def test_gauge_scale_must_be_nonzero(watt_point):
    with pytest.raises(ValueError):
        gauge_transform(hopf_frame(watt_point), 0.0)


def test_transversality_at_watt_point(watt_point):
    assert transversality(watt_point) == pytest.approx(-0.375, rel=1e-12)
    assert transversality_finite_difference(watt_point) == pytest.approx(-0.375, rel=1e-6)


@pytest.mark.parametrize(
    "l1, expected",
    [(-0.2, HopfClass.SUPERCRITICAL), (0.2, HopfClass.SUBCRITICAL), (1e-10, HopfClass.DEGENERATE)],
)
def test_hopf_class_from_l1(l1, expected):
    assert hopf_class_from_l1(l1) is expected


def test_classify_hopf_subcritical_point():
    assert classify_hopf(critical_params(0.95, 0.136)) is HopfClass.SUBCRITICAL
    assert classify_hopf(critical_params(0.5, 1.0)) is HopfClass.SUPERCRITICAL
