import math

import numpy as np
import pytest
from pydantic import ValidationError

from governor_model import (
    DomainError,
    derived_frequencies,
    equilibrium,
    jacobian,
    physical_vector_field,
    rescale_physical,
    to_dimensionless_state,
    vector_field,
    watt_vector_field,
)
from models import DimensionlessParams, PhysicalParams, State
from tests.conftest import random_points


@pytest.mark.parametrize(
    "point",
    [(0.5, 1.0, 0.0, 0.0), (0.3, 2.0, 0.5, 0.4), (0.9, 0.1, 2.0, 0.9), (0.05, 5.0, 0.0, 0.0)],
)
def test_equilibrium_is_a_zero_of_the_field(point):
    beta, alpha, rho, kappa = point
    params = DimensionlessParams(beta=beta, alpha=alpha, epsilon=0.8, rho=rho, kappa=kappa)
    center = equilibrium(params)
    assert center.in_domain
    assert center.x == pytest.approx(math.acos(beta))
    assert np.linalg.norm(vector_field(center, params)) < 1e-12


def test_watt_running_speed():
    center = equilibrium(DimensionlessParams(beta=0.5, alpha=1.0, epsilon=1.0))
    # z0 = 1 / sqrt(beta) for the classic governor
    assert center.z == pytest.approx(math.sqrt(2.0))


def test_running_speed_decreases_with_spring():
    speeds = [
        equilibrium(DimensionlessParams(beta=0.6, alpha=1.0, epsilon=1.0, rho=0.3, kappa=kappa)).z
        for kappa in np.linspace(0.0, 0.95, 12)
    ]
    assert all(later < earlier for earlier, later in zip(speeds, speeds[1:]))


@pytest.mark.parametrize("x", [0.0, -0.1, math.pi / 2, 2.0])
def test_field_rejects_states_outside_the_domain(x):
    params = DimensionlessParams(beta=0.5, alpha=1.0, epsilon=1.0)
    with pytest.raises(DomainError):
        vector_field((x, 0.0, 1.0), params)


def test_watt_form_matches_general_field():
    params = DimensionlessParams(beta=0.4, alpha=1.7, epsilon=0.6)
    rng = np.random.default_rng(3)
    for _ in range(10):
        s = (rng.uniform(0.05, 1.5), rng.normal(), rng.uniform(0.1, 3.0))
        np.testing.assert_allclose(vector_field(s, params), watt_vector_field(s, 0.6, 1.7, 0.4), atol=1e-14)


def test_jacobian_matches_central_differences():
    params = DimensionlessParams(beta=0.3, alpha=2.0, epsilon=0.9, rho=0.5, kappa=0.4)
    s = np.array([0.9, 0.2, 1.4])
    h = 1e-6
    numeric = np.column_stack(
        [(vector_field(s + h * e, params) - vector_field(s - h * e, params)) / (2 * h) for e in np.eye(3)]
    )
    np.testing.assert_allclose(jacobian(s, params), numeric, atol=1e-8)


def test_jacobian_matches_central_differences_at_random_points():
    rng = np.random.default_rng(17)
    h = 1e-6
    for beta, alpha, rho, kappa in random_points(rng, 100):
        params = DimensionlessParams(
            beta=beta, alpha=alpha, epsilon=rng.uniform(0.1, 2.0), rho=rho, kappa=kappa
        )
        s = equilibrium(params).as_array() + rng.uniform(-0.05, 0.05, size=3)
        numeric = np.column_stack(
            [(vector_field(s + h * e, params) - vector_field(s - h * e, params)) / (2 * h) for e in np.eye(3)]
        )
        np.testing.assert_allclose(jacobian(s, params), numeric, rtol=1e-6, atol=1e-7)


def test_watt_frequencies(watt_point):
    frequencies = derived_frequencies(watt_point)
    assert frequencies.omega0 == pytest.approx(math.sqrt(1.5))
    assert frequencies.omega1 == pytest.approx(math.sqrt(1.5))
    # xi = 2 sqrt(beta S (1 - kappa beta) (rho + S))
    s = math.sqrt(0.75)
    assert frequencies.xi == pytest.approx(2.0 * math.sqrt(0.5 * s * s))
    assert jacobian(equilibrium(watt_point), watt_point)[1, 2] == pytest.approx(frequencies.xi)


def test_rescaling_of_physical_parameters(physical_set):
    rescaled = rescale_physical(physical_set)
    t = 1.2 * 0.4 / (2 * 6.0 * 0.4 + 1.2 * 9.8)
    assert rescaled.time_constant == pytest.approx(t)
    assert rescaled.params.beta == pytest.approx(1.5 / 4.0)
    assert rescaled.params.rho == pytest.approx(0.25)
    assert rescaled.params.kappa == pytest.approx(4.8 / (4.8 + 11.76))
    assert rescaled.params.epsilon == pytest.approx(0.8 / 1.2 * math.sqrt(t))
    assert rescaled.params.alpha == pytest.approx(1.5 * 4.0 / 2.0 * t)


def test_dimensionless_field_is_the_physical_field_in_new_units(physical_set):
    rescaled = rescale_physical(physical_set)
    t = rescaled.time_constant
    c = physical_set.gear_ratio
    rng = np.random.default_rng(11)
    for _ in range(20):
        phi, psi, omega = rng.uniform(0.1, 1.4), rng.normal(), rng.uniform(0.5, 6.0)
        physical = physical_vector_field(phi, psi, omega, physical_set)
        state = to_dimensionless_state(phi, psi, omega, rescaled)
        expected = [math.sqrt(t) * physical[0], t * physical[1], c * t * physical[2]]
        np.testing.assert_allclose(vector_field(state, rescaled.params), expected, rtol=1e-10, atol=1e-12)


def test_parameter_ranges_are_validated():
    with pytest.raises(ValidationError):
        DimensionlessParams(beta=1.0, alpha=1.0, epsilon=1.0)
    with pytest.raises(ValidationError):
        DimensionlessParams(beta=0.5, alpha=1.0, epsilon=1.0, kappa=1.0)
    with pytest.raises(ValidationError):
        DimensionlessParams(beta=0.5, alpha=-1.0, epsilon=1.0)


def test_load_must_stay_below_torque_gain(physical_set):
    values = physical_set.model_dump()
    values["load"] = values["torque_gain"]
    with pytest.raises(ValidationError):
        PhysicalParams(**values)


def test_state_round_trip_through_array():
    state = State(x=0.3, y=-0.1, z=2.0)
    assert State.from_array(state.as_array()) == state
