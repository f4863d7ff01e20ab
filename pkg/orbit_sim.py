"""
Time integration of the governor and empirical detection of the periodic
orbit born at the Hopf point.

Integration uses scipy's DOP853 pair with event location: the arm-angle walls
x = 0 and x = pi/2 stop a run (DomainExit), an optional ball around P0 stops
it as Converged, and section crossings are located by the solver's root
finder on the dense output.
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from governor_model import DomainError, derived_frequencies, equilibrium, field_unchecked
from hopf_core import lyapunov_coefficient
from logger import configured_logger
from models import (
    AmplitudeRow,
    DimensionlessParams,
    Direction,
    HopfClass,
    LyapunovReport,
    OrbitReport,
    OrbitStability,
    PoincareSection,
    State,
    TerminationReason,
    Trajectory,
)
from numeric_core import NumericalError
from stability import critical_params, epsilon_critical

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
TOLERANCE_RANGE = (1e-12, 1e-3)

ESCAPE_RADIUS = 0.5
INNER_RADIUS = 1e-4
OUTER_RADIUS = 0.3
MAX_BISECTIONS = 40
BISECTION_WIDTH = 1e-6
SLOPE_MARGIN = 0.05
FIXED_POINT_TOLERANCE = 1e-8
SETTLE_RETURNS = 12
TREND_RETURNS = 6
JACOBIAN_STEP = 1e-5
NEAR_HOPF = 0.1


class StepUnderflowError(NumericalError):
    """The adaptive step collapsed before t_end."""


class FewerReturnsError(NumericalError):
    """The trajectory stopped crossing the section before n_returns were collected."""

    def __init__(self, message: str, returns=None, reason: str = "", original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.returns = returns or []
        self.reason = reason


class OrbitNotFoundError(NumericalError):
    """Neither an orbit nor a clean negative outcome was established."""

    def __init__(self, message: str, diagnostic: str = "", original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.diagnostic = diagnostic or message


def _check_tolerances(rel_tol: float, abs_tol: float):
    low, high = TOLERANCE_RANGE
    for name, value in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not low <= value <= high:
            raise ValueError(f"{name} = {value} outside [{low:g}, {high:g}]")


def _start_array(s0) -> np.ndarray:
    start = s0.as_array() if isinstance(s0, State) else np.asarray(s0, dtype=float)
    if not State.from_array(start).in_domain:
        raise DomainError(f"initial arm angle x = {start[0]} outside (0, pi/2)")
    return start


def _wall_events() -> List[Callable]:
    def lower_wall(t, s):
        return s[0]

    def upper_wall(t, s):
        return math.pi / 2 - s[0]

    lower_wall.terminal = True
    upper_wall.terminal = True
    return [lower_wall, upper_wall]


def _converge_event(center: np.ndarray, radius: float) -> Callable:
    def converged(t, s):
        return np.linalg.norm(s - center) - radius

    converged.terminal = True
    converged.direction = -1
    return converged


def _escape_event(center: np.ndarray, radius: float) -> Callable:
    def escaped(t, s):
        return radius - abs(s[0] - center[0])

    escaped.terminal = True
    escaped.direction = -1
    return escaped


def _section_event(section: PoincareSection, center: np.ndarray) -> Callable:
    index = section.index
    level = center[index] if section.value is None else section.value

    def crossing(t, s):
        return s[index] - level

    crossing.direction = section.direction
    return crossing


def _solve(start, params: DimensionlessParams, t_span, rel_tol, abs_tol, events, dense_output=False):
    try:
        solution = solve_ivp(
            lambda t, s: field_unchecked(s, params),
            t_span,
            start,
            method="DOP853",
            rtol=rel_tol,
            atol=abs_tol,
            events=events,
            dense_output=dense_output,
        )
    except (ValueError, ArithmeticError) as e:
        configured_logger.error(f"Integrator failed on {t_span}: {e}")
        raise NumericalError(f"Integrator failed -> {e}", e) from e
    if solution.status == -1:
        raise StepUnderflowError(f"step size collapsed at t = {solution.t[-1]:.6g}: {solution.message}")
    return solution


def integrate(
    s0,
    params: DimensionlessParams,
    t_end: float = 200.0,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    converge_tol: Optional[float] = None,
) -> Trajectory:
    """
    Integrate the governor from s0 over [0, t_end].

    Domain exit ends the run with reason DomainExit instead of raising. With
    converge_tol set the run also stops once |s - P0| < converge_tol.

    Raises:
        DomainError: s0 outside the domain.
        StepUnderflowError: the solver could not advance.
    """
    _check_tolerances(rel_tol, abs_tol)
    start = _start_array(s0)
    center = equilibrium(params).as_array()

    events = _wall_events()
    if converge_tol is not None:
        if np.linalg.norm(start - center) < converge_tol:
            return Trajectory(t=np.array([0.0]), states=start[None, :], reason=TerminationReason.CONVERGED)
        events.append(_converge_event(center, converge_tol))

    solution = _solve(start, params, (0.0, t_end), rel_tol, abs_tol, events)
    reason = TerminationReason.TIME_END
    if solution.status == 1:
        fired_converge = converge_tol is not None and solution.t_events[2].size > 0
        reason = TerminationReason.CONVERGED if fired_converge else TerminationReason.DOMAIN_EXIT

    configured_logger.debug(f"integrate: {solution.t.size} samples, reason {reason.value}, t = {solution.t[-1]:.6g}")
    return Trajectory(t=solution.t, states=solution.y.T, reason=reason)


def _collect_crossings(
    start: np.ndarray,
    params: DimensionlessParams,
    n_returns: int,
    section: PoincareSection,
    t_end: float,
    rel_tol: float,
    abs_tol: float,
    converge_tol: Optional[float] = None,
    escape_radius: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Times and full states of the first n_returns section crossings."""
    center = equilibrium(params).as_array()
    natural_period = 2.0 * math.pi / derived_frequencies(params).omega0
    index = section.index
    level = center[index] if section.value is None else section.value
    # a start on the section registers a spurious crossing at t = 0
    skip_until = 0.25 * natural_period if abs(start[index] - level) < 1e-12 else -1.0

    events = [_section_event(section, center)] + _wall_events()
    names = ["section", "domain_exit", "domain_exit"]
    if converge_tol is not None:
        events.append(_converge_event(center, converge_tol))
        names.append("converged")
    if escape_radius is not None:
        events.append(_escape_event(center, escape_radius))
        names.append("escaped")

    times: List[float] = []
    states: List[np.ndarray] = []
    t, state = 0.0, start
    while len(times) < n_returns and t < t_end:
        t_next = min(t_end, t + 1.5 * natural_period * (n_returns - len(times) + 1))
        solution = _solve(state, params, (t, t_next), rel_tol, abs_tol, events)
        for te, ye in zip(solution.t_events[0], solution.y_events[0]):
            if te > skip_until and len(times) < n_returns and (not times or te > times[-1]):
                times.append(float(te))
                states.append(np.array(ye))
        if solution.status == 1 and len(times) < n_returns:
            reason = next(name for name, hits in zip(names[1:], solution.t_events[1:]) if hits.size > 0)
            returns = [_project(s, index) for s in states]
            raise FewerReturnsError(
                f"only {len(times)} of {n_returns} returns before {reason} at t = {solution.t[-1]:.6g}",
                returns=returns,
                reason=reason,
            )
        t, state = float(solution.t[-1]), solution.y[:, -1]

    if len(times) < n_returns:
        raise FewerReturnsError(
            f"only {len(times)} of {n_returns} returns within t_end = {t_end}",
            returns=[_project(s, index) for s in states],
            reason="time_budget",
        )
    return np.array(times), np.array(states)


def _project(state: np.ndarray, index: int) -> Tuple[float, float]:
    kept = [value for i, value in enumerate(state) if i != index]
    return float(kept[0]), float(kept[1])


def poincare_returns(
    s0,
    params: DimensionlessParams,
    n_returns: int,
    section: Optional[PoincareSection] = None,
    t_end: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    converge_tol: Optional[float] = 1e-10,
) -> List[Tuple[float, float]]:
    """
    Successive crossings of the section, as the two coordinates off its axis.

    The default section is y = 0 crossed with y' > 0, through P0, so the
    result is a list of (x, z) pairs. Starting exactly at P0 gives no returns.

    Raises:
        FewerReturnsError: domain exit, convergence to P0 or the time budget
            ended the run first; the partial list is on the exception.
    """
    _check_tolerances(rel_tol, abs_tol)
    section = section or PoincareSection()
    start = _start_array(s0)
    if np.linalg.norm(start - equilibrium(params).as_array()) < 1e-14:
        return []
    if t_end is None:
        t_end = 50.0 * (n_returns + 1) * 2.0 * math.pi / derived_frequencies(params).omega0
    _, states = _collect_crossings(start, params, n_returns, section, t_end, rel_tol, abs_tol, converge_tol)
    return [_project(state, section.index) for state in states]


class ReturnMap:
    """First-return map of the default section, in (x, z) coordinates, with an evaluation counter."""

    def __init__(self, params: DimensionlessParams, rel_tol: float, abs_tol: float):
        self.params = params
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self.section = PoincareSection()
        self.natural_period = 2.0 * math.pi / derived_frequencies(params).omega0
        self.evaluations = 0

    def crossing(self, point) -> Tuple[np.ndarray, float]:
        self.evaluations += 1
        start = np.array([point[0], 0.0, point[1]], dtype=float)
        if not State.from_array(start).in_domain:
            raise FewerReturnsError(f"section point x = {start[0]} outside the domain", reason="domain_exit")
        times, states = _collect_crossings(
            start,
            self.params,
            1,
            self.section,
            10.0 * self.natural_period,
            self.rel_tol,
            self.abs_tol,
            escape_radius=ESCAPE_RADIUS,
        )
        return states[0][[0, 2]], times[0]

    def __call__(self, point) -> np.ndarray:
        return self.crossing(point)[0]

    def jacobian(self, point, step: float = JACOBIAN_STEP) -> np.ndarray:
        """Central-difference Jacobian of the map."""
        point = np.asarray(point, dtype=float)
        columns = []
        for k in range(2):
            shift = np.zeros(2)
            shift[k] = step
            columns.append((self(point + shift) - self(point - shift)) / (2.0 * step))
        return np.column_stack(columns)


def slope_stability(slope: float, margin: float = SLOPE_MARGIN) -> OrbitStability:
    if abs(slope) < 1.0 - margin:
        return OrbitStability.ATTRACTING
    if abs(slope) > 1.0 + margin:
        return OrbitStability.REPELLING
    return OrbitStability.INCONCLUSIVE


def normal_form_amplitude(report: LyapunovReport, epsilon: float) -> Optional[float]:
    """
    Cycle amplitude in x predicted by the truncated normal form,
    2 (-gamma' (eps - eps_c) / (omega0 l1))^(1/2); None on the side without a cycle.
    """
    if report.l1 == 0.0:
        return None
    squared = -report.transversality * (epsilon - report.eps_c) / (report.omega0 * report.l1)
    return 2.0 * math.sqrt(squared) if squared > 0.0 else None


def _refine_fixed_point(return_map: ReturnMap, guess: np.ndarray) -> np.ndarray:
    try:
        result = root(
            lambda s: return_map(s) - s,
            guess,
            jac=lambda s: return_map.jacobian(s) - np.eye(2),
            method="hybr",
            options={"xtol": 1e-12},
        )
    except FewerReturnsError as e:
        raise OrbitNotFoundError(
            f"return map undefined during refinement: {e}", diagnostic=f"refinement left the section ({e.reason})"
        ) from e
    if not result.success:
        raise OrbitNotFoundError(
            f"fixed-point refinement failed: {result.message}", diagnostic=f"refinement failed: {result.message}"
        )
    return result.x


def _trend(radius: float, center: np.ndarray, params: DimensionlessParams, rel_tol: float, abs_tol: float) -> str:
    """'inner' when returns from x0 - radius shrink toward P0, 'outer' when they grow or escape."""
    start = center - np.array([radius, 0.0, 0.0])
    natural_period = 2.0 * math.pi / derived_frequencies(params).omega0
    try:
        _, states = _collect_crossings(
            start,
            params,
            TREND_RETURNS,
            PoincareSection(),
            4.0 * TREND_RETURNS * natural_period,
            rel_tol,
            abs_tol,
            converge_tol=1e-3 * radius,
            escape_radius=ESCAPE_RADIUS,
        )
    except FewerReturnsError as e:
        if e.reason in ("escaped", "domain_exit"):
            return "outer"
        if e.reason == "converged":
            return "inner"
        raise
    amplitudes = center[0] - states[:, 0]
    # first return still carries the transient along the fast direction
    return "outer" if amplitudes[-1] > amplitudes[1] else "inner"


def _orbit_shape(return_map: ReturnMap, point: np.ndarray, center: np.ndarray) -> Tuple[float, float]:
    """Period and max |x - x0| over one revolution from a section point."""
    _, period = return_map.crossing(point)
    start = np.array([point[0], 0.0, point[1]])
    solution = _solve(
        start, return_map.params, (0.0, period), return_map.rel_tol, return_map.abs_tol, None, dense_output=True
    )
    samples = solution.sol(np.linspace(0.0, period, 2001))
    return period, float(np.max(np.abs(samples[0] - center[0])))


def _finish(report_fields: dict, return_map: ReturnMap, point: np.ndarray, center: np.ndarray) -> OrbitReport:
    image = return_map(point)
    residual = float(np.linalg.norm(image - point))
    eigenvalues = np.linalg.eigvals(return_map.jacobian(point))
    slope = float(eigenvalues[np.argmax(np.abs(eigenvalues))].real)
    period, amplitude = _orbit_shape(return_map, point, center)
    found = residual < FIXED_POINT_TOLERANCE
    diagnostic = "" if found else f"fixed-point residual {residual:.3e} above {FIXED_POINT_TOLERANCE:g}"
    return OrbitReport(
        **report_fields,
        found=found,
        period=period,
        amplitude=amplitude,
        slope=slope,
        residual=residual,
        stability=slope_stability(slope),
        returns_used=return_map.evaluations,
        section_point=(float(point[0]), float(point[1])),
        diagnostic=diagnostic,
    )


def _attracting_search(params, report_fields, predicted, center, return_map, rel_tol, abs_tol) -> OrbitReport:
    radius = min(max(predicted if predicted else 0.05, 1e-3), OUTER_RADIUS)
    start = center - np.array([radius, 0.0, 0.0])
    try:
        _, states = _collect_crossings(
            start,
            params,
            SETTLE_RETURNS,
            PoincareSection(),
            50.0 * SETTLE_RETURNS * return_map.natural_period,
            rel_tol,
            abs_tol,
            converge_tol=1e-9,
            escape_radius=ESCAPE_RADIUS,
        )
    except FewerReturnsError as e:
        return OrbitReport(**report_fields, found=False, diagnostic=f"no attracting cycle: trajectory {e.reason}")
    return_map.evaluations += SETTLE_RETURNS

    amplitudes = center[0] - states[:, 0]
    d1, d2 = amplitudes[-2] - amplitudes[-3], amplitudes[-1] - amplitudes[-2]
    if abs(d2) > 1e-7 and d1 != 0.0:
        ratio = d2 / d1
        if ratio >= 1.0:
            return OrbitReport(
                **report_fields, found=False, diagnostic="no attracting cycle: returns keep moving away"
            )
        if 0.0 < ratio < 1.0:
            limit = amplitudes[-1] + d2 * ratio / (1.0 - ratio)
            if limit < INNER_RADIUS:
                return OrbitReport(
                    **report_fields, found=False, diagnostic="no attracting cycle: returns contract to P0"
                )

    point = _refine_fixed_point(return_map, states[-1][[0, 2]])
    if center[0] - point[0] < INNER_RADIUS:
        return OrbitReport(**report_fields, found=False, diagnostic="fixed point collapsed onto P0")
    return _finish(report_fields, return_map, point, center)


def _repelling_search(params, report_fields, center, return_map, rel_tol, abs_tol) -> OrbitReport:
    low, high = INNER_RADIUS, OUTER_RADIUS
    low_trend = _trend(low, center, params, rel_tol, abs_tol)
    high_trend = _trend(high, center, params, rel_tol, abs_tol)
    if low_trend != "inner" or high_trend != "outer":
        return OrbitReport(
            **report_fields,
            found=False,
            diagnostic=f"no repelling cycle in [{low:g}, {high:g}]: inner start {low_trend}, outer start {high_trend}",
        )

    steps = 0
    while steps < MAX_BISECTIONS and high - low > BISECTION_WIDTH:
        middle = 0.5 * (low + high)
        if _trend(middle, center, params, rel_tol, abs_tol) == "inner":
            low = middle
        else:
            high = middle
        steps += 1
    radius = 0.5 * (low + high)
    configured_logger.debug(f"bisection bracket [{low:.8g}, {high:.8g}] after {steps} steps")

    start = center - np.array([radius, 0.0, 0.0])
    try:
        _, states = _collect_crossings(
            start, params, 1, PoincareSection(), 10.0 * return_map.natural_period, rel_tol, abs_tol
        )
    except FewerReturnsError as e:
        raise OrbitNotFoundError(f"bracketed cycle gave no return: {e}", diagnostic=str(e)) from e
    point = _refine_fixed_point(return_map, states[0][[0, 2]])
    report = _finish(report_fields, return_map, point, center)

    cycle_radius = center[0] - point[0]
    inside = _trend(0.8 * cycle_radius, center, params, rel_tol, abs_tol)
    outside = _trend(1.2 * cycle_radius, center, params, rel_tol, abs_tol)
    if inside != "inner" or outside != "outer":
        return report.model_copy(
            update={"found": False, "diagnostic": f"separation check failed: inside {inside}, outside {outside}"}
        )
    return report


def detect_orbit(
    params: DimensionlessParams,
    direction: Optional[Direction] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    lyapunov: Optional[LyapunovReport] = None,
) -> OrbitReport:
    """
    Look for the small cycle near the Hopf point.

    Below eps_c the search iterates the return map from the normal-form
    radius and refines the fixed point; above eps_c it bisects the start
    radius between spiralling into P0 and escaping, then refines.

    Raises:
        ValueError: eps not within 10% of eps_c or direction on the wrong side.
        OrbitNotFoundError: neither behaviour could be established.
    """
    _check_tolerances(rel_tol, abs_tol)
    eps_c = epsilon_critical(*params.point())
    offset = params.epsilon / eps_c - 1.0
    if abs(offset) >= NEAR_HOPF:
        raise ValueError(f"epsilon/eps_c = {params.epsilon / eps_c:.6g} is not within {NEAR_HOPF:.0%} of 1")
    side = Direction.BELOW if offset < 0.0 else Direction.ABOVE
    if direction is not None and direction != side:
        raise ValueError(f"direction {direction.value} does not match epsilon on the {side.value} side of eps_c")

    lyapunov = lyapunov or lyapunov_coefficient(critical_params(*params.point()))
    predicted = normal_form_amplitude(lyapunov, params.epsilon)
    center = equilibrium(params).as_array()
    return_map = ReturnMap(params, rel_tol, abs_tol)
    report_fields = {
        "direction": side,
        "epsilon": params.epsilon,
        "eps_c": eps_c,
        "predicted_amplitude": predicted,
    }
    configured_logger.info(f"detect_orbit {side.value} eps_c at {params.model_dump()}, predicted amplitude {predicted}")

    if side is Direction.BELOW:
        report = _attracting_search(params, report_fields, predicted, center, return_map, rel_tol, abs_tol)
    else:
        report = _repelling_search(params, report_fields, center, return_map, rel_tol, abs_tol)
    configured_logger.info(
        f"orbit found={report.found} stability={report.stability.value} slope={report.slope} {report.diagnostic}"
    )
    return report


def amplitude_scaling(
    params_c: DimensionlessParams,
    deltas: Optional[List[float]] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> List[AmplitudeRow]:
    """
    Cycle amplitude at eps_c -+ delta for each delta; the side follows the
    Hopf class. ratio_to_next is amplitude(delta_i) / amplitude(delta_i+1).
    """
    params_c = critical_params(*params_c.point())
    eps_c = params_c.epsilon
    deltas = deltas or [0.04 * eps_c, 0.01 * eps_c, 0.0025 * eps_c]
    lyapunov = lyapunov_coefficient(params_c)
    sign = -1.0 if lyapunov.classification is HopfClass.SUPERCRITICAL else 1.0

    rows: List[AmplitudeRow] = []
    for delta in deltas:
        report = detect_orbit(params_c.with_epsilon(eps_c + sign * delta), rel_tol=rel_tol, abs_tol=abs_tol, lyapunov=lyapunov)
        if not report.found:
            raise OrbitNotFoundError(f"no cycle at delta = {delta:.6g}", diagnostic=report.diagnostic)
        rows.append(AmplitudeRow(delta=delta, amplitude=report.amplitude, period=report.period))

    for row, following in zip(rows, rows[1:]):
        row.ratio_to_next = row.amplitude / following.amplitude
    return rows
