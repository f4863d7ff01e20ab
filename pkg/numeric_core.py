"""
Fixed-size arithmetic shared by the analysis modules.

All vectors are numpy arrays of length 3 (float64 or complex128) and all
matrices are 3x3. The Hermitian product follows <p, q> = sum(conj(p_i) q_i),
conjugating the FIRST argument; swapping the convention flips the sign of
every imaginary part downstream (G21, eigenvector phases).
"""

import math
from typing import Optional

import numpy as np
from numpy.typing import NDArray

Complex3Vector = NDArray[np.complex128]
Complex3x3 = NDArray[np.complex128]

DISCRIMINANT_TOLERANCE = 1e-12
PIVOT_TOLERANCE = 1e-13
MAX_CONDITION = 1e12


class NumericalError(Exception):
    """Base class for numerical failures (CLI exit code 2)."""

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        super().__init__(message)
        self.original_error = original_error


class SingularMatrixError(NumericalError):
    """Raised when elimination meets a pivot below tolerance."""


def _cubic_value(coefficients, root: complex) -> complex:
    c2, c1, c0 = coefficients
    return ((root + c2) * root + c1) * root + c0


def _newton_polish(coefficients, root: complex) -> complex:
    c2, c1, _ = coefficients
    derivative = (3.0 * root + 2.0 * c2) * root + c1
    if derivative == 0:
        return root
    polished = root - _cubic_value(coefficients, root) / derivative
    if abs(_cubic_value(coefficients, polished)) < abs(_cubic_value(coefficients, root)):
        return polished
    return root


def cubic_roots(c2: float, c1: float, c0: float) -> np.ndarray:
    """
    Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0.

    The cubic is depressed to t^3 + p t + q with lambda = t - c2/3. A positive
    discriminant uses Cardano (one real root first, then the conjugate pair
    with positive imaginary part first); a negative one uses the
    trigonometric form. Near the boundary |disc| < 1e-12 every root gets one
    Newton polish.

    Returns:
        np.ndarray: three complex128 roots.
    """
    coefficients = (float(c2), float(c1), float(c0))
    if not all(math.isfinite(value) for value in coefficients):
        raise ValueError(f"cubic coefficients must be finite: {coefficients}")

    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2**3 / 27.0 - c2 * c1 / 3.0 + c0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    if disc >= 0.0:
        # choose the sign that avoids cancellation in -q/2 -+ sqrt(disc)
        u = np.cbrt(-q / 2.0 - math.copysign(math.sqrt(disc), q))
        v = -p / (3.0 * u) if u != 0.0 else np.cbrt(-q)
        real_root = u + v
        pair_real = -real_root / 2.0
        pair_imag = abs(math.sqrt(3.0) / 2.0 * (u - v))
        roots = [
            complex(real_root - shift, 0.0),
            complex(pair_real - shift, pair_imag),
            complex(pair_real - shift, -pair_imag),
        ]
    else:
        radius = 2.0 * math.sqrt(-p / 3.0)
        argument = max(-1.0, min(1.0, (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)))
        angle = math.acos(argument) / 3.0
        roots = [
            complex(radius * math.cos(angle - 2.0 * math.pi * k / 3.0) - shift, 0.0)
            for k in range(3)
        ]

    if abs(disc) < DISCRIMINANT_TOLERANCE:
        roots = [_newton_polish(coefficients, root) for root in roots]
        if abs(roots[1].imag) > 0:
            # keep the pair exactly conjugate after polishing
            roots[2] = roots[1].conjugate()

    return np.array(roots, dtype=np.complex128)


def solve3(
    M,
    b,
    pivot_tolerance: float = PIVOT_TOLERANCE,
    max_condition: float = MAX_CONDITION,
) -> Complex3Vector:
    """
    Solve M x = b for a 3x3 complex system by Gaussian elimination with
    partial pivoting.

    Raises:
        SingularMatrixError: a pivot falls below pivot_tolerance times the
            largest entry of M, or the condition estimate exceeds max_condition.
    """
    matrix = np.array(M, dtype=np.complex128)
    rhs = np.array(b, dtype=np.complex128)
    if matrix.shape != (3, 3) or rhs.shape != (3,):
        raise ValueError(f"solve3 expects a 3x3 matrix and a 3-vector, got {matrix.shape} and {rhs.shape}")
    if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(rhs))):
        raise SingularMatrixError("non-finite entries in linear system")

    scale = np.max(np.abs(matrix))
    if scale == 0.0:
        raise SingularMatrixError("zero matrix")
    threshold = pivot_tolerance * scale

    for col in range(3):
        pivot_row = col + int(np.argmax(np.abs(matrix[col:, col])))
        if abs(matrix[pivot_row, col]) <= threshold:
            raise SingularMatrixError(
                f"pivot {abs(matrix[pivot_row, col]):.3e} below tolerance {threshold:.3e} in column {col}"
            )
        if pivot_row != col:
            matrix[[col, pivot_row]] = matrix[[pivot_row, col]]
            rhs[[col, pivot_row]] = rhs[[pivot_row, col]]
        for row in range(col + 1, 3):
            factor = matrix[row, col] / matrix[col, col]
            matrix[row, col:] -= factor * matrix[col, col:]
            rhs[row] -= factor * rhs[col]

    x = np.zeros(3, dtype=np.complex128)
    for row in (2, 1, 0):
        x[row] = (rhs[row] - matrix[row, row + 1:] @ x[row + 1:]) / matrix[row, row]

    condition = np.linalg.cond(np.asarray(M, dtype=np.complex128))
    if condition > max_condition:
        raise SingularMatrixError(f"condition estimate {condition:.3e} exceeds {max_condition:.1e}")
    return x


def hermitian_inner(p, q) -> complex:
    """<p, q> = sum(conj(p_i) q_i); conjugate-linear in p, linear in q."""
    return complex(np.vdot(np.asarray(p, dtype=np.complex128), np.asarray(q, dtype=np.complex128)))
