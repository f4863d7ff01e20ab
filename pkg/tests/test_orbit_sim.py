import math

import numpy as np
import pytest

from acceptance import SUBCRITICAL_POINTS, SUPERCRITICAL_POINTS
from governor_model import DomainError, equilibrium
from hopf_core import lyapunov_coefficient
from models import Direction, OrbitStability, PoincareSection, TerminationReason
from orbit_sim import (
    FewerReturnsError,
    amplitude_scaling,
    detect_orbit,
    integrate,
    normal_form_amplitude,
    poincare_returns,
    slope_stability,
)
from stability import critical_params

SUPERCRITICAL = (0.95, 1.3, 0.5, 0.0)
SUBCRITICAL = (0.95, 0.136, 0.0, 0.0)


def test_equilibrium_is_a_rest_point(watt_point):
    center = equilibrium(watt_point)
    trajectory = integrate(center, watt_point, t_end=5.0)
    assert trajectory.reason is TerminationReason.TIME_END
    np.testing.assert_allclose(trajectory.final_state, center.as_array(), atol=1e-10)


def test_large_push_leaves_the_domain(watt_point):
    center = equilibrium(watt_point)
    trajectory = integrate((1.4, 5.0, center.z), watt_point, t_end=50.0)
    assert trajectory.reason is TerminationReason.DOMAIN_EXIT
    assert trajectory.final_state[0] == pytest.approx(math.pi / 2, abs=1e-8)


def test_stable_equilibrium_attracts_nearby_states(watt_point):
    params = watt_point.with_epsilon(2.0 * watt_point.epsilon)
    center = equilibrium(params)
    trajectory = integrate((center.x - 0.05, 0.0, center.z), params, t_end=500.0, converge_tol=1e-4)
    assert trajectory.reason is TerminationReason.CONVERGED
    assert np.linalg.norm(trajectory.final_state - center.as_array()) == pytest.approx(1e-4, rel=1e-2)


def _endpoint(params, start, tol, t_end=20.0):
    trajectory = integrate(start, params, t_end=t_end, rel_tol=tol, abs_tol=tol)
    assert trajectory.reason is TerminationReason.TIME_END
    return trajectory.final_state


def test_global_error_tracks_the_tolerance(watt_point):
    params = watt_point.with_epsilon(1.05 * watt_point.epsilon)
    center = equilibrium(params)
    start = (center.x - 0.05, 0.0, center.z)
    reference = _endpoint(params, start, 1e-12)
    coarse = np.linalg.norm(_endpoint(params, start, 1e-6) - reference)
    fine = np.linalg.norm(_endpoint(params, start, 1e-7) - reference)
    # tightening tol tenfold shrinks the endpoint error roughly tenfold
    assert 10.0 / 3.0 <= coarse / fine <= 30.0


def test_halving_the_tolerance_stays_within_the_coarse_budget(watt_point):
    params = watt_point.with_epsilon(1.05 * watt_point.epsilon)
    center = equilibrium(params)
    start = (center.x - 0.05, 0.0, center.z)
    t_end = 20.0
    coarse = _endpoint(params, start, 1e-6, t_end)
    halved = _endpoint(params, start, 5e-7, t_end)
    budget = 1e-6 * t_end * max(1.0, np.linalg.norm(coarse))
    assert np.linalg.norm(coarse - halved) < budget


def test_start_outside_domain_is_rejected(watt_point):
    with pytest.raises(DomainError):
        integrate((2.0, 0.0, 1.0), watt_point)


@pytest.mark.parametrize("rel_tol, abs_tol", [(1e-2, 1e-12), (1e-10, 1e-14)])
def test_tolerances_outside_range_are_rejected(watt_point, rel_tol, abs_tol):
    with pytest.raises(ValueError):
        integrate(equilibrium(watt_point), watt_point, rel_tol=rel_tol, abs_tol=abs_tol)


def test_no_returns_from_the_equilibrium(watt_point):
    assert poincare_returns(equilibrium(watt_point), watt_point, 5) == []


def test_returns_shrink_on_the_stable_side():
    critical = critical_params(*SUPERCRITICAL)
    params = critical.with_epsilon(1.02 * critical.epsilon)
    center = equilibrium(params)
    returns = poincare_returns((center.x - 0.01, 0.0, center.z), params, 6)
    amplitudes = [center.x - x for x, _ in returns]
    assert len(amplitudes) == 6
    assert all(later < earlier for earlier, later in zip(amplitudes, amplitudes[1:]))


def test_returns_report_convergence_with_partial_list(watt_point):
    params = watt_point.with_epsilon(3.0 * watt_point.epsilon)
    center = equilibrium(params)
    with pytest.raises(FewerReturnsError) as raised:
        poincare_returns((center.x - 0.01, 0.0, center.z), params, 200, converge_tol=1e-3)
    assert raised.value.reason == "converged"
    assert isinstance(raised.value.returns, list)


def test_custom_section_reports_the_other_two_coordinates(watt_point):
    params = watt_point.with_epsilon(1.05 * watt_point.epsilon)
    center = equilibrium(params)
    section = PoincareSection(axis="x", direction=-1)
    returns = poincare_returns((center.x - 0.01, 0.0, center.z), params, 3, section=section)
    assert len(returns) == 3
    # (y, z) pairs on x = x0
    assert all(y < 0.0 for y, _ in returns)


@pytest.mark.parametrize(
    "slope, expected",
    [(0.9, OrbitStability.ATTRACTING), (1.1, OrbitStability.REPELLING), (1.01, OrbitStability.INCONCLUSIVE)],
)
def test_slope_stability(slope, expected):
    assert slope_stability(slope) is expected


def test_normal_form_amplitude_lives_on_one_side(watt_point):
    report = lyapunov_coefficient(watt_point)
    below = normal_form_amplitude(report, 0.99 * watt_point.epsilon)
    expected = 2.0 * math.sqrt(0.375 * 0.01 * watt_point.epsilon / (report.omega0 * -report.l1))
    assert below == pytest.approx(expected)
    assert normal_form_amplitude(report, 1.01 * watt_point.epsilon) is None


def test_detect_orbit_needs_a_point_near_the_hopf_value(watt_point):
    with pytest.raises(ValueError):
        detect_orbit(watt_point.with_epsilon(0.5 * watt_point.epsilon))
    with pytest.raises(ValueError):
        detect_orbit(watt_point.with_epsilon(0.98 * watt_point.epsilon), Direction.ABOVE)


@pytest.mark.slow
def test_attracting_cycle_below_critical_damping():
    critical = critical_params(*SUPERCRITICAL)
    report = detect_orbit(critical.with_epsilon(0.98 * critical.epsilon), Direction.BELOW)
    assert report.found
    assert report.stability is OrbitStability.ATTRACTING
    assert report.residual < 1e-8
    assert report.period == pytest.approx(7.578, rel=0.1)


@pytest.mark.slow
def test_repelling_cycle_above_critical_damping():
    critical = critical_params(*SUBCRITICAL)
    report = detect_orbit(critical.with_epsilon(1.02 * critical.epsilon), Direction.ABOVE)
    assert report.found
    assert report.stability is OrbitStability.REPELLING
    assert report.slope > 1.0


@pytest.mark.slow
def test_amplitude_grows_with_the_square_root_of_the_offset():
    critical = critical_params(*SUPERCRITICAL)
    rows = amplitude_scaling(critical, [0.04 * critical.epsilon, 0.01 * critical.epsilon])
    assert rows[0].ratio_to_next == pytest.approx(2.0, abs=0.4)
    assert rows[1].ratio_to_next is None


@pytest.mark.slow
def test_period_tends_to_the_linear_period():
    critical = critical_params(*SUPERCRITICAL)
    omega0 = lyapunov_coefficient(critical).omega0
    rows = amplitude_scaling(critical)
    assert rows[-1].delta == pytest.approx(0.0025 * critical.epsilon)
    assert rows[-1].period == pytest.approx(2.0 * math.pi / omega0, rel=0.02)


@pytest.mark.slow
@pytest.mark.parametrize("case", sorted(SUPERCRITICAL_POINTS))
def test_no_cycle_above_critical_damping_when_supercritical(case):
    critical = critical_params(*SUPERCRITICAL_POINTS[case])
    report = detect_orbit(critical.with_epsilon(1.02 * critical.epsilon), Direction.ABOVE)
    assert not report.found
    assert report.diagnostic


@pytest.mark.slow
@pytest.mark.parametrize("case", sorted(SUBCRITICAL_POINTS))
def test_no_cycle_below_critical_damping_when_subcritical(case):
    critical = critical_params(*SUBCRITICAL_POINTS[case])
    report = detect_orbit(critical.with_epsilon(0.98 * critical.epsilon), Direction.BELOW)
    assert not report.found
    assert report.diagnostic
