import math

import numpy as np
import pytest

from governor_model import derived_frequencies, equilibrium, jacobian, rescale_physical
from models import CharPoly, DimensionlessParams, StabilityClass
from numeric_core import cubic_roots
from stability import (
    charpoly,
    classify,
    critical_params,
    epsilon_critical,
    non_uniformity,
    routh_hurwitz,
    vyshnegradskii,
)
from tests.conftest import random_points


def test_watt_critical_damping():
    # eps_c = 2 alpha beta^(3/2) for the classic governor
    assert epsilon_critical(0.5, 1.0) == pytest.approx(2.0 * 0.5**1.5)
    assert epsilon_critical(0.5, 1.0) == pytest.approx(0.7071067811865476)


def test_charpoly_coefficients_at_watt_point():
    c = charpoly(DimensionlessParams(beta=0.5, alpha=1.0, epsilon=1.0))
    assert c.p1 == 1.0
    assert c.p2 == pytest.approx(1.5)
    assert c.p3 == pytest.approx(2.0 * 0.5**1.5 * 1.5)


def test_charpoly_is_the_characteristic_polynomial_of_the_jacobian():
    rng = np.random.default_rng(23)
    for beta, alpha, rho, kappa in random_points(rng, 100):
        params = DimensionlessParams(beta=beta, alpha=alpha, epsilon=rng.uniform(0.1, 2.0), rho=rho, kappa=kappa)
        c = charpoly(params)
        # numpy.poly gives det(lambda I - J) highest power first
        expected = np.poly(jacobian(equilibrium(params), params)).real
        np.testing.assert_allclose([1.0, c.p1, c.p2, c.p3], expected, rtol=1e-9, atol=1e-12)


def test_p2_is_the_squared_critical_frequency():
    rng = np.random.default_rng(29)
    for beta, alpha, rho, kappa in random_points(rng, 500):
        params = DimensionlessParams(beta=beta, alpha=alpha, epsilon=rng.uniform(0.1, 2.0), rho=rho, kappa=kappa)
        assert charpoly(params).p2 == pytest.approx(derived_frequencies(params).omega0 ** 2, rel=1e-12)


def test_critical_point_satisfies_p1_p2_equal_p3(hexagonal_point):
    c = charpoly(hexagonal_point)
    assert c.p1 * c.p2 == pytest.approx(c.p3, rel=1e-14)


@pytest.mark.parametrize(
    "epsilon, expected",
    [(1.0, StabilityClass.ASYMPTOTICALLY_STABLE), (0.5, StabilityClass.UNSTABLE)],
)
def test_classify_watt_point(epsilon, expected):
    verdict = classify(DimensionlessParams(beta=0.5, alpha=1.0, epsilon=epsilon))
    assert verdict.classification is expected
    assert verdict.roots_agree
    assert verdict.eps_c == pytest.approx(0.7071067811865476)
    assert verdict.margin == pytest.approx(epsilon - verdict.eps_c)


def test_classify_at_critical_damping(watt_point):
    verdict = classify(watt_point)
    assert verdict.classification is StabilityClass.CRITICAL
    assert verdict.roots_agree
    assert verdict.roots[1].imag == pytest.approx(math.sqrt(1.5))


@pytest.mark.parametrize(
    "c, stable",
    [
        (CharPoly(p1=1.0, p2=2.0, p3=1.0), True),
        (CharPoly(p1=1.0, p2=1.0, p3=1.0), False),
        (CharPoly(p1=1.0, p2=1.0, p3=2.0), False),
        (CharPoly(p1=-1.0, p2=2.0, p3=1.0), False),
    ],
)
def test_routh_hurwitz_cases(c, stable):
    assert routh_hurwitz(c) is stable


def test_routh_hurwitz_agrees_with_roots_on_random_points():
    rng = np.random.default_rng(1)
    for _ in range(300):
        params = DimensionlessParams(
            beta=rng.uniform(0.05, 0.95),
            alpha=rng.uniform(0.1, 5.0),
            epsilon=rng.uniform(0.05, 5.0),
            rho=rng.uniform(0.0, 2.0),
            kappa=rng.uniform(0.0, 0.95),
        )
        c = charpoly(params)
        assert routh_hurwitz(c) == bool(np.all(cubic_roots(c.p1, c.p2, c.p3).real < 0.0))


def test_critical_params_sit_on_the_hypersurface():
    params = critical_params(0.8, 0.7, 1.3, 0.2)
    assert params.epsilon == pytest.approx(epsilon_critical(0.8, 0.7, 1.3, 0.2))
    assert params.point() == (0.8, 0.7, 1.3, 0.2)


def test_non_uniformity_is_alpha_over_critical_damping():
    for point in [(0.5, 1.0, 0.0, 0.0), (0.3, 2.0, 0.5, 0.4), (0.8, 0.7, 1.3, 0.2)]:
        beta, alpha, rho, kappa = point
        assert non_uniformity(beta, rho, kappa) == pytest.approx(alpha / epsilon_critical(*point))


def test_vyshnegradskii_rule_matches_critical_damping(physical_set):
    params = rescale_physical(physical_set).params
    report = vyshnegradskii(physical_set)
    assert report.stable == (params.epsilon > epsilon_critical(*params.point()))
    # (b I / m) eta_phys equals eps / eps_c
    assert report.criterion == pytest.approx(params.epsilon / epsilon_critical(*params.point()))


def test_vyshnegradskii_flips_with_friction(physical_set):
    params = rescale_physical(physical_set).params
    eps_c = epsilon_critical(*params.point())
    threshold = physical_set.friction * eps_c / params.epsilon
    assert vyshnegradskii(physical_set.model_copy(update={"friction": 1.01 * threshold})).stable
    assert not vyshnegradskii(physical_set.model_copy(update={"friction": 0.99 * threshold})).stable
