"""
Direct evaluators of the printed closed forms for the first Lyapunov
coefficient and its special-case numerators.

Every evaluator accepts floats or numpy arrays of matching shape (scans
call them on whole grids). The long expressions live in
closed_form_tables.py as monomial tables. Three of them differ from the
printed text because the printed version disagrees with the projection
engine at generic points, while the shipped one matches it to round-off:

- l1 denominator: omega0^5, not omega0^4. The printed quotient equals
  omega0 * l1 and is kept as l1_closed_as_printed.
- theta (the B(qbar, h20) real part): four printed terms carry wrong
  coefficients; the table reproduces the numeric h20 part instead.
- G2: two nesting slips move coefficients between neighbouring rho powers
  (G2_PRINTED_ERRATA). All carry a positive rho power, so printed and
  shipped agree on rho = 0.
"""

import math
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from closed_form_tables import (
    G2_PRINTED_ERRATA,
    G2_TERMS,
    PR2_BRACKET_TERMS,
    R_TERMS,
    THETA_TERMS,
    Term,
)
from logger import configured_logger
from models import ClosedFormValue, FormulaId


def frequencies(beta, alpha, rho=0.0, kappa=0.0) -> dict:
    """eps_c, omega0, omega1 and sigma, vectorised over numpy inputs."""
    beta = np.asarray(beta, dtype=float)
    root_s = np.sqrt(1.0 - beta * beta)
    eps_c = (
        2.0 * alpha * beta**1.5 * root_s**1.5 * np.sqrt(1.0 - kappa * beta) * (rho + root_s) ** 1.5
    ) / (root_s**3 + rho * (1.0 - kappa * beta**3))
    omega0 = np.sqrt((root_s**3 + rho * (1.0 - kappa * beta**3)) / (beta * (rho + root_s)))
    omega1 = np.sqrt((1.0 - beta * beta) / beta)
    sigma = np.sqrt((1.0 - kappa * beta) / (rho + omega1 * np.sqrt(beta)))
    return {
        "alpha": alpha * np.ones_like(beta),
        "beta": beta,
        "eps_c": eps_c,
        "omega0": omega0,
        "omega1": omega1,
        "sigma": sigma,
        "rho": rho * np.ones_like(beta),
        "S": root_s,
    }


def _compensated_sum(terms: Iterable):
    """Neumaier summation that works elementwise on arrays."""
    total = None
    compensation = None
    for term in terms:
        if total is None:
            total = np.array(term, dtype=float)
            compensation = np.zeros_like(total)
            continue
        updated = total + term
        compensation += np.where(
            np.abs(total) >= np.abs(term), (total - updated) + term, (term - updated) + total
        )
        total = updated
    return total + compensation


def evaluate_terms(
    table: Sequence[Term],
    values: Sequence,
    indices: Optional[Iterable[int]] = None,
):
    """
    Sum coefficient * prod(values[k] ** exponents[k]) over a term table.

    `indices` restricts the sum to a subset of rows, so partial sums can be
    bisected against the projection engine to localise a wrong term.
    """
    rows = table if indices is None else [table[i] for i in indices]
    if all(np.ndim(value) == 0 for value in values):
        scalars = [float(value) for value in values]
        return math.fsum(
            term.coefficient * math.prod(v**e for v, e in zip(scalars, term.exponents) if e)
            for term in rows
        )
    arrays = np.broadcast_arrays(*[np.asarray(value, dtype=float) for value in values])
    return _compensated_sum(
        term.coefficient * np.prod([a**e for a, e in zip(arrays, term.exponents) if e], axis=0)
        if any(term.exponents)
        else np.full(arrays[0].shape, float(term.coefficient))
        for term in rows
    )


def _seven(freq: dict) -> list:
    return [freq[name] for name in ("alpha", "beta", "eps_c", "omega0", "omega1", "sigma", "rho")]


def _scalar_if_possible(value):
    return float(value) if np.ndim(value) == 0 else value


def R_numerator(beta, alpha, rho=0.0, kappa=0.0):
    freq = frequencies(beta, alpha, rho, kappa)
    return _scalar_if_possible(evaluate_terms(R_TERMS, _seven(freq)))


def l1_denominator(beta, alpha, rho=0.0, kappa=0.0):
    """4 beta eps_c omega0^5 omega1^2 (eps_c^4 + 5 eps_c^2 omega0^2 + 4 omega0^4), always positive."""
    freq = frequencies(beta, alpha, rho, kappa)
    e2, w2 = freq["eps_c"] ** 2, freq["omega0"] ** 2
    value = 4.0 * freq["beta"] * freq["eps_c"] * freq["omega0"] ** 5 * freq["omega1"] ** 2 * (
        e2 * e2 + 5.0 * e2 * w2 + 4.0 * w2 * w2
    )
    return _scalar_if_possible(value)


def l1_closed(beta, alpha, rho=0.0, kappa=0.0):
    """First Lyapunov coefficient -R / denominator; depends on (beta, alpha, rho, kappa) only."""
    return _scalar_if_possible(
        -np.asarray(R_numerator(beta, alpha, rho, kappa)) / l1_denominator(beta, alpha, rho, kappa)
    )


def l1_closed_as_printed(beta, alpha, rho=0.0, kappa=0.0):
    """Same quotient with the printed omega0^4 denominator; equals omega0 * l1."""
    omega0 = frequencies(beta, alpha, rho, kappa)["omega0"]
    return _scalar_if_possible(np.asarray(l1_closed(beta, alpha, rho, kappa)) * omega0)


def G1(beta, alpha, kappa=0.0):
    """Numerator of l1 on the rho = 0 slice."""
    b = np.asarray(beta, dtype=float)
    a2 = alpha * alpha
    value = (
        -3.0
        + 5.0 * kappa * b
        - (a2 - 5.0) * b**2
        + kappa * (a2 - 7.0) * b**3
        - 2.0 * a2 * kappa * kappa * b**4
        - (a2 * a2 - 2.0 * a2 * kappa * kappa) * b**6
        + a2 * a2 * kappa * b**7
    )
    return _scalar_if_possible(value)


def G2(beta, alpha, rho=0.0):
    """Numerator of l1 on the kappa = 0 slice."""
    b = np.asarray(beta, dtype=float)
    values = [alpha * np.ones_like(b), b, rho * np.ones_like(b), np.sqrt(1.0 - b * b)]
    return _scalar_if_possible(evaluate_terms(G2_TERMS, values))


def g2_as_printed(beta, alpha, rho=0.0):
    """G2 with the printed (erroneous) coefficients restored, kept for auditing."""
    b = np.asarray(beta, dtype=float)
    base = [alpha, b, rho, np.sqrt(1.0 - b * b)]
    correction = sum(
        (printed - shipped) * np.prod([v**e for v, e in zip(base, exponents)], axis=0)
        for exponents, printed, shipped in G2_PRINTED_ERRATA
    )
    return _scalar_if_possible(np.asarray(G2(beta, alpha, rho)) + correction)


def g1_root(alpha: float, kappa: float, bracket=(0.05, 0.95), xtol: float = 1e-12) -> float:
    """Root of G1 in beta by bisection."""
    low, high = bracket
    if G1(low, alpha, kappa) * G1(high, alpha, kappa) > 0.0:
        raise ValueError(f"G1 does not change sign on {bracket} for alpha={alpha}, kappa={kappa}")
    return bisect(lambda beta: G1(beta, alpha, kappa), low, high, xtol=xtol, maxiter=200)


def taylor_coefficients(beta, alpha, rho=0.0, kappa=0.0) -> dict:
    """
    Second and third derivatives of the field at P0 in the printed closed
    form. Keys name the component and the differentiation variables.
    """
    freq = frequencies(beta, alpha, rho, kappa)
    b, w1, s = freq["beta"], freq["omega1"], freq["sigma"]
    rb = np.sqrt(b)
    d = rb * w1
    return {
        "f2_xx": -3.0 * d * (1.0 - rho * s * s),
        "f2_xz": 2.0 * s * np.sqrt(d) * ((2.0 * b * b - 1.0) - rho * d) / rb,
        "f2_zz": 2.0 * b * (rho + d),
        "f2_xxx": (1.0 + (1.0 - rho * s * s) * (3.0 - 7.0 * b * b)) / b,
        "f2_xzz": 2.0 * (2.0 * b * b - 1.0 - rho * d),
        "f2_xxz": -2.0 * rb * s * np.sqrt(d) * (rho + 4.0 * d),
        "f3_xx": -alpha * b,
        "f3_xxx": alpha * d,
    }


def eigenvectors_closed(beta, alpha, rho=0.0, kappa=0.0):
    """Critical eigenvectors q and p in closed form, with <p, q> = 1."""
    freq = frequencies(beta, alpha, rho, kappa)
    e, w0, w1 = float(freq["eps_c"]), float(freq["omega0"]), float(freq["omega1"])
    d = alpha * math.sqrt(beta) * w1
    q = np.array([-1j, w0, d / w0], dtype=np.complex128)
    p = np.array(
        [
            -0.5j,
            (w0 - 1j * e) / (2.0 * (w0 * w0 + e * e)),
            e * w0 * (e + 1j * w0) / (2.0 * d * (w0 * w0 + e * e)),
        ],
        dtype=np.complex128,
    )
    return q, p


def b2_qq(beta, alpha, rho=0.0, kappa=0.0) -> complex:
    freq = frequencies(beta, alpha, rho, kappa)
    w0, w1, s = float(freq["omega0"]), float(freq["omega1"]), float(freq["sigma"])
    d = math.sqrt(beta) * w1
    bracket = (
        2.0 * alpha**2 * beta * d**1.5 * (rho + d)
        + 3.0 * (1.0 - rho * s * s) * w0 * w0 * math.sqrt(d)
        + 4j * alpha * s * w0 * w1 * (1.0 - 2.0 * beta * beta + math.sqrt(beta) * rho * w1)
    )
    return beta * w1 * w1 / (w0 * w0 * d**1.5) * bracket


def b2_qqbar(beta, alpha, rho=0.0, kappa=0.0) -> float:
    freq = frequencies(beta, alpha, rho, kappa)
    w0, w1, s = float(freq["omega0"]), float(freq["omega1"]), float(freq["sigma"])
    d = math.sqrt(beta) * w1
    return d * (3.0 * w0 * w0 * (rho * s * s - 1.0) + 2.0 * alpha**2 * beta**1.5 * w1 * (rho + d)) / (w0 * w0)


def c2_qqqbar(beta, alpha, rho=0.0, kappa=0.0) -> complex:
    freq = frequencies(beta, alpha, rho, kappa)
    w0, w1, s = float(freq["omega0"]), float(freq["omega1"]), float(freq["sigma"])
    d = math.sqrt(beta) * w1
    m = rho * s * s - 1.0
    bracket = (
        w0 * w0 * (4.0 - 3.0 * rho * s * s + 7.0 * beta * beta * m)
        + 2.0 * alpha**2 * beta**2 * w1 * w1 * (2.0 * beta * beta - 1.0 - math.sqrt(beta) * rho * w1)
        - 2j * alpha * beta**2 * s * w0 * w1 * math.sqrt(d) * (rho + 4.0 * d)
    )
    return -1j / (beta * w0 * w0) * bracket


def part_real_cubic(beta, alpha, rho=0.0, kappa=0.0):
    """Re<p, C(q,q,qbar)>."""
    freq = frequencies(beta, alpha, rho, kappa)
    b, e, w0, w1, s = freq["beta"], freq["eps_c"], freq["omega0"], freq["omega1"], freq["sigma"]
    w2 = w0 * w0
    bracket = 2.0 * alpha * b**2.25 * s * w2 * w1**1.5 * (rho + 4.0 * np.sqrt(b) * w1) + e * (
        w2 * (3.0 * rho * s * s - 4.0 + 7.0 * b * b * (1.0 - rho * s * s))
        + b * w2 * w2
        + 2.0 * alpha**2 * b * b * w1 * w1 * (1.0 - 2.0 * b * b + np.sqrt(b) * rho * w1)
    )
    return _scalar_if_possible(-bracket / (2.0 * b * w2 * (e * e + w2)))


def part_real_h11(beta, alpha, rho=0.0, kappa=0.0):
    """Re<p, 2B(q,h11)>."""
    freq = frequencies(beta, alpha, rho, kappa)
    b, e, w0, w1 = freq["beta"], freq["eps_c"], freq["omega0"], freq["omega1"]
    bracket = evaluate_terms(PR2_BRACKET_TERMS, _seven(freq))
    return _scalar_if_possible(-(b**0.75) * bracket / (e * w0**4 * w1 * w1 * (e * e + w0 * w0)))


def part_real_h20(beta, alpha, rho=0.0, kappa=0.0):
    """Re<p, B(qbar,h20)> = theta / (2 omega0^4 omega1^2 (eps_c^4 + 5 eps_c^2 omega0^2 + 4 omega0^4))."""
    freq = frequencies(beta, alpha, rho, kappa)
    e, w0, w1 = freq["eps_c"], freq["omega0"], freq["omega1"]
    e2, w2 = e * e, w0 * w0
    theta = evaluate_terms(THETA_TERMS, _seven(freq))
    return _scalar_if_possible(theta / (2.0 * w2 * w2 * w1 * w1 * (e2 * e2 + 5.0 * e2 * w2 + 4.0 * w2 * w2)))


def transversality_closed(beta, alpha, rho=0.0, kappa=0.0):
    """gamma'(eps_c) = -omega0^2 / (2 (omega0^2 + eps_c^2))."""
    freq = frequencies(beta, alpha, rho, kappa)
    w2 = freq["omega0"] ** 2
    return _scalar_if_possible(-w2 / (2.0 * (w2 + freq["eps_c"] ** 2)))


def xi_printed(beta, alpha, rho=0.0, kappa=0.0) -> float:
    """Jacobian entry (2,3) exactly as typeset, with (rho + (1 - beta^2))^(1/2)."""
    return (
        2.0 * math.sqrt(beta) * (1.0 - beta * beta) ** 0.25 * math.sqrt(1.0 - kappa * beta)
        * math.sqrt(rho + (1.0 - beta * beta))
    )


def closed_form_value(formula: FormulaId, beta: float, alpha: float, rho: float = 0.0, kappa: float = 0.0) -> ClosedFormValue:
    """Evaluate one named closed form and wrap it with its inputs."""
    if formula is FormulaId.R:
        value = R_numerator(beta, alpha, rho, kappa)
    elif formula is FormulaId.L1:
        value = l1_closed(beta, alpha, rho, kappa)
    elif formula is FormulaId.G1:
        if rho != 0.0:
            raise ValueError("G1 is defined on the rho = 0 slice")
        value = G1(beta, alpha, kappa)
    else:
        if kappa != 0.0:
            raise ValueError("G2 is defined on the kappa = 0 slice")
        value = G2(beta, alpha, rho)
    if not math.isfinite(value):
        configured_logger.warning(f"{formula.value} not finite at beta={beta}, alpha={alpha}, rho={rho}, kappa={kappa}")
    return ClosedFormValue(value=value, formula=formula, beta=beta, alpha=alpha, rho=rho, kappa=kappa)
