import math
from typing import Optional, Tuple, Union

import numpy as np

from logger import configured_logger
from models import DerivedFrequencies, DimensionlessParams, PhysicalParams, RescaledParams, State

CONDITIONING_LIMIT = 1e3

StateLike = Union[State, np.ndarray, Tuple[float, float, float]]


class DomainError(ValueError):
    """State outside the admissible arm-angle interval (0, pi/2)."""

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        super().__init__(message)
        self.original_error = original_error


def _as_array(s: StateLike) -> np.ndarray:
    if isinstance(s, State):
        return s.as_array()
    return np.asarray(s, dtype=float)


def _check_domain(x: float):
    if not 0.0 < x < math.pi / 2:
        raise DomainError(f"arm angle x = {x} outside (0, pi/2)")


def field_unchecked(values: np.ndarray, params: DimensionlessParams) -> np.ndarray:
    """Governor field without the domain guard; the integrator stops at the boundary through events."""
    x, y, z = values
    sin_x, cos_x = math.sin(x), math.cos(x)
    return np.array(
        [
            y,
            params.rho * z * z * cos_x + (z * z + params.kappa) * sin_x * cos_x - sin_x - params.epsilon * y,
            params.alpha * (cos_x - params.beta),
        ]
    )


def vector_field(s: StateLike, params: DimensionlessParams) -> np.ndarray:
    """
    f(x, y, z) = (y, rho z^2 cos x + (z^2 + kappa) sin x cos x - sin x - eps y, alpha (cos x - beta)).

    Raises:
        DomainError: x outside (0, pi/2).
    """
    values = _as_array(s)
    _check_domain(values[0])
    return field_unchecked(values, params)


def watt_vector_field(s: StateLike, epsilon: float, alpha: float, beta: float) -> np.ndarray:
    """The classic Watt form (rho = kappa = 0) in rescaled coordinates."""
    x, y, z = _as_array(s)
    _check_domain(x)
    return np.array(
        [
            y,
            math.sin(x) * math.cos(x) * z * z - math.sin(x) - epsilon * y,
            alpha * (math.cos(x) - beta),
        ]
    )


def physical_vector_field(phi: float, psi: float, omega: float, p: PhysicalParams) -> np.ndarray:
    """Governor equations in physical variables (phi, psi, Omega) and physical time tau."""
    _check_domain(phi)
    m, l, big_l, k, b, g = p.mass, p.arm_length, p.half_edge, p.spring, p.friction, p.gravity
    c = p.gear_ratio
    sin_phi, cos_phi = math.sin(phi), math.cos(phi)
    return np.array(
        [
            psi,
            c * c * (big_l / l) * omega * omega * cos_phi
            + (2.0 * k / m + c * c * omega * omega) * sin_phi * cos_phi
            - (2.0 * k * l + m * g) / (m * l) * sin_phi
            - (b / m) * psi,
            (p.torque_gain * cos_phi - p.load) / p.inertia,
        ]
    )


def rescale_physical(p: PhysicalParams) -> RescaledParams:
    """
    Physical parameters to the dimensionless set.

    With T = ml/(2kl+mg): rho = L/l, kappa = 2kl/(2kl+mg), eps = (b/m) T^(1/2),
    alpha = (c mu / I) T, beta = F/mu, and t = T^(-1/2) tau, y = T^(1/2) psi,
    z = c T^(1/2) Omega.
    """
    m, l, k, g = p.mass, p.arm_length, p.spring, p.gravity
    time_constant = m * l / (2.0 * k * l + m * g)
    root_t = math.sqrt(time_constant)
    params = DimensionlessParams(
        beta=p.load / p.torque_gain,
        alpha=p.gear_ratio * p.torque_gain / p.inertia * time_constant,
        epsilon=p.friction / m * root_t,
        rho=p.half_edge / l,
        kappa=2.0 * k * l / (2.0 * k * l + m * g),
    )
    return RescaledParams(
        params=params,
        time_constant=time_constant,
        time_factor=1.0 / root_t,
        y_factor=root_t,
        z_factor=p.gear_ratio * root_t,
    )


def to_dimensionless_state(phi: float, psi: float, omega: float, rescaled: RescaledParams) -> State:
    return State(x=phi, y=rescaled.y_factor * psi, z=rescaled.z_factor * omega)


def equilibrium(params: DimensionlessParams) -> State:
    """P0 = (arccos beta, 0, z0), the only admissible equilibrium."""
    beta, rho, kappa = params.beta, params.rho, params.kappa
    root_s = math.sqrt(1.0 - beta * beta)
    z0 = math.sqrt(1.0 - kappa * beta) * (1.0 - beta * beta) ** 0.25 / (
        math.sqrt(beta) * math.sqrt(rho + root_s)
    )
    return State(x=math.acos(beta), y=0.0, z=z0)


def jacobian(s: StateLike, params: DimensionlessParams) -> np.ndarray:
    """Analytic derivative of vector_field with respect to (x, y, z)."""
    x, _, z = _as_array(s)
    _check_domain(x)
    sin_x, cos_x = math.sin(x), math.cos(x)
    rho, kappa = params.rho, params.kappa
    return np.array(
        [
            [0.0, 1.0, 0.0],
            [
                -rho * z * z * sin_x + (z * z + kappa) * math.cos(2.0 * x) - cos_x,
                -params.epsilon,
                2.0 * rho * z * cos_x + 2.0 * z * sin_x * cos_x,
            ],
            [-params.alpha * sin_x, 0.0, 0.0],
        ]
    )


def derived_frequencies(params: DimensionlessParams) -> DerivedFrequencies:
    """omega0, omega1, sigma and the Jacobian entry xi at P0."""
    beta, alpha, rho, kappa = params.point()
    root_s = math.sqrt(1.0 - beta * beta)
    omega0 = math.sqrt((root_s**3 + rho * (1.0 - kappa * beta**3)) / (beta * (rho + root_s)))
    omega1 = math.sqrt((1.0 - beta * beta) / beta)
    sigma = math.sqrt((1.0 - kappa * beta) / (rho + omega1 * math.sqrt(beta)))
    xi = 2.0 * math.sqrt(beta * root_s * (1.0 - kappa * beta) * (rho + root_s))
    if omega0 > CONDITIONING_LIMIT:
        configured_logger.warning(
            f"omega0 = {omega0:.3e} above {CONDITIONING_LIMIT:.0e} at beta={beta}: results poorly conditioned"
        )
    return DerivedFrequencies(omega0=omega0, omega1=omega1, sigma=sigma, xi=xi)
