import math

import numpy as np
import pytest

from closed_form_tables import G2_PRINTED_ERRATA, R_TERMS, SEVEN_VARIABLES
from closed_forms import (
    G1,
    G2,
    R_numerator,
    closed_form_value,
    evaluate_terms,
    frequencies,
    g1_root,
    g2_as_printed,
    l1_closed,
    l1_closed_as_printed,
    part_real_cubic,
    part_real_h11,
    part_real_h20,
    transversality_closed,
    xi_printed,
)
from governor_model import derived_frequencies
from hopf_core import lyapunov_coefficient
from models import FormulaId
from stability import critical_params
from tests.conftest import L1_REFERENCE, random_points


L1_CLOSED_CASES = list(L1_REFERENCE.items()) + [((0.5, math.sqrt(3.0), 0.0, 0.0), -0.3520833333333334)]


@pytest.mark.parametrize("point, expected", L1_CLOSED_CASES)
def test_l1_closed_reference_values(point, expected):
    assert l1_closed(*point) == pytest.approx(expected, rel=1e-9)


def test_printed_denominator_is_one_power_of_omega0_short():
    point = (0.3, 2.0, 0.5, 0.4)
    omega0 = frequencies(*point)["omega0"]
    assert l1_closed_as_printed(*point) == pytest.approx(omega0 * l1_closed(*point))


def test_l1_closed_is_vectorised():
    betas = np.array([0.3, 0.5, 0.8])
    alphas = np.array([2.0, 1.0, 0.7])
    values = l1_closed(betas, alphas, 0.5, 0.2)
    expected = [l1_closed(b, a, 0.5, 0.2) for b, a in zip(betas, alphas)]
    np.testing.assert_allclose(values, expected, rtol=1e-12)


def test_special_numerators_at_watt_point():
    assert G1(0.5, 1.0, 0.0) == pytest.approx(-2.015625)
    assert G2(0.5, 1.0, 0.0) == pytest.approx(-0.4035801887512207, rel=1e-12)


@pytest.mark.parametrize(
    "beta, alpha, rho, expected",
    [(0.5, 1.0, 0.4, -4.566751602196284), (0.7, 3.0, 1.2, -632.7063845648742)],
)
def test_g2_values(beta, alpha, rho, expected):
    assert G2(beta, alpha, rho) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("beta, alpha, rho", [(0.5, 1.0, 0.4), (0.7, 3.0, 1.2), (0.2, 0.3, 0.0)])
def test_g2_is_a_positive_multiple_of_the_general_numerator(beta, alpha, rho):
    s = math.sqrt(1.0 - beta * beta)
    q, p = rho + s, s**3 + rho
    expected = -R_numerator(beta, alpha, rho, 0.0) * beta * q * q * p**3 / (8.0 * alpha**2 * s**3)
    assert G2(beta, alpha, rho) == pytest.approx(expected, rel=1e-9)


def test_printed_g2_differs_only_off_the_rho_zero_slice():
    assert g2_as_printed(0.5, 1.0, 0.4) != pytest.approx(G2(0.5, 1.0, 0.4), rel=1e-6)
    assert g2_as_printed(0.5, 1.0, 0.0) == pytest.approx(G2(0.5, 1.0, 0.0), rel=1e-12)
    assert all(exponents[2] > 0 for exponents, _, _ in G2_PRINTED_ERRATA)


def test_numerators_share_the_sign_of_l1():
    for beta in np.linspace(0.1, 0.9, 9):
        for alpha in (0.2, 1.0, 3.0):
            l1 = l1_closed(beta, alpha, 0.0, 0.3)
            assert np.sign(G1(beta, alpha, 0.3)) == np.sign(l1)
            l1 = l1_closed(beta, alpha, 0.7, 0.0)
            assert np.sign(G2(beta, alpha, 0.7)) == np.sign(l1)


def test_overlap_of_numerators_at_rho_and_kappa_zero():
    b, a = np.meshgrid(np.linspace(0.05, 0.95, 30), np.linspace(0.1, 5.0, 30), indexing="ij")
    assert np.array_equal(np.sign(G1(b, a, 0.0)), np.sign(G2(b, a, 0.0)))


@pytest.mark.parametrize("kappa, expected", [(0.0, 0.774597), (1.0, 0.52720)])
def test_g1_roots_in_the_small_gain_limit(kappa, expected):
    assert g1_root(0.0, kappa) == pytest.approx(expected, abs=5e-5)


def test_g1_root_needs_a_sign_change():
    with pytest.raises(ValueError):
        g1_root(0.0, 0.0, bracket=(0.05, 0.5))


@pytest.mark.parametrize("point", list(L1_REFERENCE))
def test_part_formulas_match_the_projection_engine(point):
    report = lyapunov_coefficient(critical_params(*point))
    assert part_real_cubic(*point) == pytest.approx(report.cubic_part, rel=1e-9)
    assert part_real_h11(*point) == pytest.approx(report.h11_part, rel=1e-9)
    assert part_real_h20(*point) == pytest.approx(report.h20_part, rel=1e-9)


def test_closed_forms_match_the_projection_engine_at_random_points():
    rng = np.random.default_rng(31)
    for point in random_points(rng, 100):
        report = lyapunov_coefficient(critical_params(*point))
        assert part_real_cubic(*point) == pytest.approx(report.cubic_part, rel=1e-8, abs=1e-10), point
        assert part_real_h11(*point) == pytest.approx(report.h11_part, rel=1e-8, abs=1e-10), point
        assert part_real_h20(*point) == pytest.approx(report.h20_part, rel=1e-8, abs=1e-10), point
        assert l1_closed(*point) == pytest.approx(report.l1, rel=1e-8, abs=1e-10), point


def test_transversality_closed_at_watt_point():
    assert transversality_closed(0.5, 1.0) == pytest.approx(-0.375)


def test_printed_xi_is_not_the_jacobian_entry():
    params = critical_params(0.5, 1.0, 0.3, 0.2)
    assert xi_printed(*params.point()) != pytest.approx(derived_frequencies(params).xi, rel=1e-6)


def test_partial_sums_add_up():
    freq = frequencies(0.3, 2.0, 0.5, 0.4)
    values = [freq[name] for name in SEVEN_VARIABLES]
    half = len(R_TERMS) // 2
    first = evaluate_terms(R_TERMS, values, range(half))
    second = evaluate_terms(R_TERMS, values, range(half, len(R_TERMS)))
    assert first + second == pytest.approx(R_numerator(0.3, 2.0, 0.5, 0.4), rel=1e-9, abs=1e-12)


def test_closed_form_value_wraps_inputs():
    value = closed_form_value(FormulaId.L1, 0.5, 1.0)
    assert value.value == pytest.approx(-0.2685511468466169)
    assert value.formula is FormulaId.L1
    assert (value.beta, value.alpha, value.rho, value.kappa) == (0.5, 1.0, 0.0, 0.0)


def test_special_numerators_refuse_the_wrong_slice():
    with pytest.raises(ValueError):
        closed_form_value(FormulaId.G1, 0.5, 1.0, rho=0.2)
    with pytest.raises(ValueError):
        closed_form_value(FormulaId.G2, 0.5, 1.0, kappa=0.2)
