import math

from governor_model import derived_frequencies, rescale_physical
from logger import configured_logger
from models import (
    CharPoly,
    DimensionlessParams,
    PhysicalParams,
    StabilityClass,
    StabilityVerdict,
    VyshnegradskiiReport,
)
from numeric_core import cubic_roots

CRITICAL_BAND = 1e-12
ROOT_AGREEMENT_TOLERANCE = 1e-9


def charpoly(params: DimensionlessParams) -> CharPoly:
    """Coefficients of lambda^3 + p1 lambda^2 + p2 lambda + p3 = det(lambda I - Df(P0))."""
    beta, alpha, rho, kappa = params.point()
    root_s = math.sqrt(1.0 - beta * beta)
    p2 = (root_s**3 + rho * (1.0 - kappa * beta**3)) / (beta * (rho + root_s))
    p3 = (
        2.0 * alpha * beta**1.5 * root_s**1.5 * math.sqrt(1.0 - kappa * beta) * (rho + root_s) ** 1.5
    ) / (beta * (rho + root_s))
    return CharPoly(p1=params.epsilon, p2=p2, p3=p3)


def routh_hurwitz(c: CharPoly) -> bool:
    """Strict test: every root of the monic cubic has negative real part."""
    return c.p1 > 0.0 and c.p2 > 0.0 and c.p3 > 0.0 and c.p1 * c.p2 > c.p3


def epsilon_critical(beta: float, alpha: float, rho: float = 0.0, kappa: float = 0.0) -> float:
    """Critical damping on the Hopf hypersurface, where p1 p2 = p3."""
    root_s = math.sqrt(1.0 - beta * beta)
    numerator = 2.0 * alpha * beta**1.5 * root_s**1.5 * math.sqrt(1.0 - kappa * beta) * (rho + root_s) ** 1.5
    return numerator / (root_s**3 + rho * (1.0 - kappa * beta**3))


def critical_params(beta: float, alpha: float, rho: float = 0.0, kappa: float = 0.0) -> DimensionlessParams:
    """Parameter point on the Hopf hypersurface (epsilon = eps_c)."""
    return DimensionlessParams(
        beta=beta, alpha=alpha, epsilon=epsilon_critical(beta, alpha, rho, kappa), rho=rho, kappa=kappa
    )


def classify(params: DimensionlessParams) -> StabilityVerdict:
    """
    Classify P0 by the sign of eps - eps_c and cross-check against the roots
    of the characteristic cubic.
    """
    eps_c = epsilon_critical(*params.point())
    margin = params.epsilon - eps_c

    if abs(margin) <= CRITICAL_BAND * eps_c:
        classification = StabilityClass.CRITICAL
    elif margin > 0.0:
        classification = StabilityClass.ASYMPTOTICALLY_STABLE
    else:
        classification = StabilityClass.UNSTABLE

    c = charpoly(params)
    roots = cubic_roots(c.p1, c.p2, c.p3)
    leading = max(root.real for root in roots)
    if classification is StabilityClass.ASYMPTOTICALLY_STABLE:
        roots_agree = leading < 0.0
    elif classification is StabilityClass.UNSTABLE:
        roots_agree = leading > 0.0
    else:
        roots_agree = abs(leading) < ROOT_AGREEMENT_TOLERANCE * max(1.0, abs(roots[0]))

    if not roots_agree:
        configured_logger.warning(
            f"root check disagrees with margin verdict {classification.value} "
            f"at {params.model_dump()}: leading real part {leading:.3e}"
        )

    return StabilityVerdict(
        classification=classification,
        eps_c=eps_c,
        margin=margin,
        roots=[complex(root) for root in roots],
        roots_agree=roots_agree,
    )


def non_uniformity(beta: float, rho: float = 0.0, kappa: float = 0.0) -> float:
    """Dimensionless non-uniformity of the engine, equal to |dz0/dbeta| and to alpha/eps_c."""
    root_s = math.sqrt(1.0 - beta * beta)
    return (root_s**3 + rho - beta**3 * kappa * rho) / (
        2.0 * beta**1.5 * root_s**1.5 * math.sqrt(1.0 - kappa * beta) * (root_s + rho) ** 1.5
    )


def vyshnegradskii(p: PhysicalParams) -> VyshnegradskiiReport:
    """
    Vyshnegradskii's rule (b I / m) eta > 1.

    eta is taken in physical units, |dOmega0/dF| = eta_dimensionless / (c mu T^(1/2)),
    which makes the rule identical to eps > eps_c.
    """
    rescaled = rescale_physical(p)
    params = rescaled.params
    eta = non_uniformity(params.beta, params.rho, params.kappa)
    eta_physical = eta / (p.gear_ratio * p.torque_gain * math.sqrt(rescaled.time_constant))
    criterion = p.friction * p.inertia / p.mass * eta_physical
    configured_logger.debug(f"Vyshnegradskii criterion {criterion:.6g} for {params.model_dump()}")
    return VyshnegradskiiReport(
        params=params,
        eta=eta,
        eta_physical=eta_physical,
        criterion=criterion,
        stable=criterion > 1.0,
    )


if __name__ == "__main__":
    point = DimensionlessParams(beta=0.5, alpha=1.0, epsilon=1.0)
    print(classify(point).model_dump())
    print(derived_frequencies(point).model_dump())
