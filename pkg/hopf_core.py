import itertools
import math
from abc import ABC, abstractmethod
from typing import Optional, Union

import numpy as np

from closed_forms import taylor_coefficients
from governor_model import derived_frequencies, equilibrium, field_unchecked, jacobian
from logger import configured_logger
from models import DimensionlessParams, HopfClass, HopfFrame, LyapunovReport
from numeric_core import NumericalError, cubic_roots, hermitian_inner, solve3
from stability import charpoly, epsilon_critical

CRITICALITY_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-8
EIGEN_RESIDUAL_LIMIT = 1e-6


class NotCriticalError(NumericalError):
    """Parameter point is not on the Hopf hypersurface."""


class DegenerateSpectrumError(NumericalError):
    """The critical pair +-i omega0 is not simple."""


# Strategy Interface
class MultilinearForms(ABC):
    """Second and third order terms of the field expanded around P0."""

    def __init__(self, params: DimensionlessParams):
        self.params = params

    @abstractmethod
    def B(self, u, v) -> np.ndarray:
        """Symmetric bilinear form."""
        pass

    @abstractmethod
    def C(self, u, v, w) -> np.ndarray:
        """Symmetric trilinear form."""
        pass


# Closed-form Strategy
class ClosedFormMultilinear(MultilinearForms):
    def __init__(self, params: DimensionlessParams):
        super().__init__(params)
        self.coefficients = {
            key: float(value) for key, value in taylor_coefficients(*params.point()).items()
        }

    def B(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.complex128)
        v = np.asarray(v, dtype=np.complex128)
        c = self.coefficients
        second = c["f2_xx"] * u[0] * v[0] + c["f2_xz"] * (u[0] * v[2] + u[2] * v[0]) + c["f2_zz"] * u[2] * v[2]
        return np.array([0.0, second, c["f3_xx"] * u[0] * v[0]], dtype=np.complex128)

    def C(self, u, v, w) -> np.ndarray:
        u = np.asarray(u, dtype=np.complex128)
        v = np.asarray(v, dtype=np.complex128)
        w = np.asarray(w, dtype=np.complex128)
        c = self.coefficients
        second = (
            c["f2_xxx"] * u[0] * v[0] * w[0]
            + c["f2_xzz"] * (u[0] * v[2] * w[2] + u[2] * v[0] * w[2] + u[2] * v[2] * w[0])
            + c["f2_xxz"] * (u[0] * v[0] * w[2] + u[0] * v[2] * w[0] + u[2] * v[0] * w[0])
        )
        return np.array([0.0, second, c["f3_xxx"] * u[0] * v[0] * w[0]], dtype=np.complex128)


# Finite-difference Strategy
class FiniteDifferenceMultilinear(MultilinearForms):
    """
    Central differences of the field around P0. The shift to P0 happens here,
    so callers pass plain direction vectors. C uses step h and h/2 combined
    by Richardson extrapolation.
    """

    def __init__(self, params: DimensionlessParams, bilinear_step: float = 1e-4, trilinear_step: float = 1e-3):
        super().__init__(params)
        self.center = equilibrium(params).as_array()
        self.bilinear_step = bilinear_step
        self.trilinear_step = trilinear_step

    def _f(self, offset: np.ndarray) -> np.ndarray:
        return field_unchecked(self.center + offset, self.params)

    def _real_B(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        h = self.bilinear_step
        return (
            self._f(h * (u + v)) - self._f(h * (u - v)) - self._f(h * (v - u)) + self._f(-h * (u + v))
        ) / (4.0 * h * h)

    def _real_C_step(self, u: np.ndarray, v: np.ndarray, w: np.ndarray, h: float) -> np.ndarray:
        total = np.zeros(3)
        for su, sv, sw in itertools.product((1.0, -1.0), repeat=3):
            total += su * sv * sw * self._f(h * (su * u + sv * v + sw * w))
        return total / (8.0 * h**3)

    def _real_C(self, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        h = self.trilinear_step
        coarse = self._real_C_step(u, v, w, h)
        fine = self._real_C_step(u, v, w, h / 2.0)
        return (4.0 * fine - coarse) / 3.0

    @staticmethod
    def _parts(vector):
        vector = np.asarray(vector, dtype=np.complex128)
        return [(1.0, vector.real), (1j, vector.imag)]

    def B(self, u, v) -> np.ndarray:
        result = np.zeros(3, dtype=np.complex128)
        for (cu, ur), (cv, vr) in itertools.product(self._parts(u), self._parts(v)):
            if np.any(ur) and np.any(vr):
                result += cu * cv * self._real_B(ur, vr)
        return result

    def C(self, u, v, w) -> np.ndarray:
        result = np.zeros(3, dtype=np.complex128)
        for (cu, ur), (cv, vr), (cw, wr) in itertools.product(self._parts(u), self._parts(v), self._parts(w)):
            if np.any(ur) and np.any(vr) and np.any(wr):
                result += cu * cv * cw * self._real_C(ur, vr, wr)
        return result


def multilinear_B(u, v, params: DimensionlessParams) -> np.ndarray:
    return ClosedFormMultilinear(params).B(u, v)


def multilinear_C(u, v, w, params: DimensionlessParams) -> np.ndarray:
    return ClosedFormMultilinear(params).C(u, v, w)


def _null_vector(matrix: np.ndarray) -> np.ndarray:
    """Kernel of a rank-2 complex 3x3 matrix from the best-conditioned row cross product."""
    candidates = [np.cross(matrix[i], matrix[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    return max(candidates, key=lambda vector: np.linalg.norm(vector))


def hopf_frame(params: DimensionlessParams, tolerance: float = CRITICALITY_TOLERANCE) -> HopfFrame:
    """
    Jacobian at the Hopf point with the critical eigenvectors.

    q solves A q = i omega0 q with q[0] = -i (phase and scale fixed), and p
    solves A^T p = -i omega0 p with <p, q> = 1.

    Raises:
        NotCriticalError: |eps - eps_c| >= tolerance.
        DegenerateSpectrumError: the imaginary pair is not simple.
    """
    eps_c = epsilon_critical(*params.point())
    if abs(params.epsilon - eps_c) >= tolerance:
        raise NotCriticalError(f"epsilon = {params.epsilon} is not critical (eps_c = {eps_c}, tolerance {tolerance})")

    A = jacobian(equilibrium(params), params)
    omega0 = derived_frequencies(params).omega0

    c = charpoly(params)
    roots = cubic_roots(c.p1, c.p2, c.p3)
    pair = roots[np.argmax(roots.imag)]
    if omega0 <= tolerance or abs(pair.imag - omega0) > 1e-6 * max(1.0, omega0):
        raise DegenerateSpectrumError(f"critical pair {pair} does not match +-i omega0 with omega0 = {omega0}")
    # the real eigenvalue is -eps_c
    if eps_c < tolerance:
        raise DegenerateSpectrumError(f"real eigenvalue -{eps_c:.3e} collides with the critical pair")

    identity = np.eye(3)
    q = _null_vector(A - 1j * omega0 * identity)
    if abs(q[0]) < 1e-14 * np.linalg.norm(q):
        raise DegenerateSpectrumError("critical eigenvector has no x component")
    q = q * (-1j * np.conj(q[0]) / abs(q[0]) ** 2)

    p = _null_vector(A.T + 1j * omega0 * identity)
    p = p / np.conj(hermitian_inner(p, q))

    residual_q = np.linalg.norm(A @ q - 1j * omega0 * q)
    residual_p = np.linalg.norm(A.T @ p + 1j * omega0 * p)
    scale = max(1.0, np.linalg.norm(A))
    if max(residual_q, residual_p) > EIGEN_RESIDUAL_LIMIT * scale:
        raise DegenerateSpectrumError(f"eigenvector residuals {residual_q:.2e}, {residual_p:.2e} too large")

    return HopfFrame(params=params, A=A, omega0=omega0, q=q, p=p)


def transversality(frame_or_params: Union[HopfFrame, DimensionlessParams]) -> float:
    """gamma'(eps_c) = Re<p, (dA/deps) q>, with dA/deps = -E_22."""
    frame = frame_or_params if isinstance(frame_or_params, HopfFrame) else hopf_frame(frame_or_params)
    derivative = np.zeros((3, 3))
    derivative[1, 1] = -1.0
    return hermitian_inner(frame.p, derivative @ frame.q).real


def transversality_finite_difference(params: DimensionlessParams, relative_step: float = 1e-6) -> float:
    """Central difference of the real part of the complex pair across eps_c."""
    eps_c = epsilon_critical(*params.point())
    h = relative_step * eps_c

    def pair_real_part(epsilon: float) -> float:
        c = charpoly(params.with_epsilon(epsilon))
        roots = cubic_roots(c.p1, c.p2, c.p3)
        return float(roots[np.argmax(roots.imag)].real)

    return (pair_real_part(eps_c + h) - pair_real_part(eps_c - h)) / (2.0 * h)


def hopf_class_from_l1(l1: float, tolerance: float = DEGENERACY_TOLERANCE) -> HopfClass:
    if l1 < -tolerance:
        return HopfClass.SUPERCRITICAL
    if l1 > tolerance:
        return HopfClass.SUBCRITICAL
    return HopfClass.DEGENERATE


def lyapunov_coefficient(
    frame_or_params: Union[HopfFrame, DimensionlessParams],
    forms: Optional[MultilinearForms] = None,
    degeneracy_tolerance: float = DEGENERACY_TOLERANCE,
) -> LyapunovReport:
    """
    First Lyapunov coefficient by the projection method.

    h11 = -A^-1 B(q, qbar), h20 = (2 i omega0 I - A)^-1 B(q, q),
    G21 = <p, C(q,q,qbar) + B(qbar,h20) + 2 B(q,h11)>, l1 = Re G21 / (2 omega0).
    """
    frame = frame_or_params if isinstance(frame_or_params, HopfFrame) else hopf_frame(frame_or_params)
    forms = forms or ClosedFormMultilinear(frame.params)
    A, omega0, q, p = frame.A, frame.omega0, frame.q, frame.p
    q_bar = np.conj(q)

    b_qqbar = forms.B(q, q_bar)
    b_qq = forms.B(q, q)
    resonant = 2j * omega0 * np.eye(3) - A
    try:
        h11 = -solve3(A, b_qqbar)
        h20 = solve3(resonant, b_qq)
    except NumericalError as e:
        configured_logger.error(f"Projection solve failed at {frame.params.model_dump()}: {e}")
        raise

    if np.max(np.abs(h11.imag)) > 1e-12 * max(1.0, np.max(np.abs(h11))):
        configured_logger.warning(f"h11 has imaginary part {np.max(np.abs(h11.imag)):.2e}")

    cubic = forms.C(q, q, q_bar)
    from_h20 = forms.B(q_bar, h20)
    from_h11 = 2.0 * forms.B(q, h11)
    total = cubic + from_h20 + from_h11

    g21 = hermitian_inner(p, total)
    l1 = g21.real / (2.0 * omega0)

    report = LyapunovReport(
        params=frame.params,
        eps_c=frame.params.epsilon,
        omega0=omega0,
        g21=g21,
        l1=l1,
        transversality=transversality(frame),
        classification=hopf_class_from_l1(l1, degeneracy_tolerance),
        cubic_part=hermitian_inner(p, cubic).real,
        h11_part=hermitian_inner(p, from_h11).real,
        h20_part=hermitian_inner(p, from_h20).real,
        h11=h11,
        h20=h20,
        h20_residual=float(np.linalg.norm(resonant @ h20 - b_qq)),
        solvability_residual=abs(hermitian_inner(p, total - g21 * q)),
    )
    configured_logger.debug(f"l1 = {l1:.12g}, G21 = {g21} at {frame.params.model_dump()}")
    return report


def classify_hopf(params: DimensionlessParams, tolerance: float = DEGENERACY_TOLERANCE) -> HopfClass:
    """Supercritical for l1 < -tol, Subcritical for l1 > tol, Degenerate otherwise."""
    return lyapunov_coefficient(params, degeneracy_tolerance=tolerance).classification


def l1_numeric(beta: float, alpha: float, rho: float = 0.0, kappa: float = 0.0) -> float:
    """Projection-engine l1 at the Hopf point of (beta, alpha, rho, kappa)."""
    eps_c = epsilon_critical(beta, alpha, rho, kappa)
    params = DimensionlessParams(beta=beta, alpha=alpha, epsilon=eps_c, rho=rho, kappa=kappa)
    return lyapunov_coefficient(params).l1


def gauge_transform(frame: HopfFrame, scale: complex) -> HopfFrame:
    """Rescale q by c and p by 1/conj(c); <p, q> stays 1."""
    if scale == 0:
        raise ValueError("gauge scale must be nonzero")
    return HopfFrame(
        params=frame.params,
        A=frame.A,
        omega0=frame.omega0,
        q=frame.q * scale,
        p=frame.p / np.conj(scale),
    )


if __name__ == "__main__":
    point = DimensionlessParams(beta=0.5, alpha=1.0, epsilon=epsilon_critical(0.5, 1.0))
    result = lyapunov_coefficient(point)
    print(f"l1 = {result.l1}, G21 = {result.g21}, class = {result.classification.value}")
    print(f"gamma' = {result.transversality}, closed form {-1.5 / (2 * (1.5 + 0.5))}")
    print(math.isclose(result.transversality, transversality_finite_difference(point), rel_tol=1e-4))
