"""
Coefficient tables for the long closed-form expressions.

Each Term is (coefficient, exponents). Tables in the seven-variable basis use
exponents of (alpha, beta, eps_c, omega0, omega1, sigma, rho); quarter powers
appear as decimal exponents. The G2 table uses (alpha, beta, rho, S) with
S = (1 - beta^2)^(1/2).
"""

from typing import NamedTuple, Tuple


class Term(NamedTuple):
    coefficient: int
    exponents: Tuple[float, ...]


SEVEN_VARIABLES = ("alpha", "beta", "eps_c", "omega0", "omega1", "sigma", "rho")
G2_VARIABLES = ("alpha", "beta", "rho", "S")

# numerator R of the general first Lyapunov coefficient
R_TERMS = (
    Term(-16, (0, 0, 2, 6, 2, 0, 0)),
    Term(12, (0, 0, 2, 6, 2, 2, 1)),
    Term(-4, (0, 0, 4, 4, 2, 0, 0)),
    Term(3, (0, 0, 4, 4, 2, 2, 1)),
    Term(4, (0, 1, 2, 8, 2, 0, 0)),
    Term(1, (0, 1, 4, 6, 2, 0, 0)),
    Term(18, (0, 2, 2, 4, 4, 0, 0)),
    Term(-36, (0, 2, 2, 4, 4, 2, 1)),
    Term(18, (0, 2, 2, 4, 4, 4, 2)),
    Term(-2, (0, 2, 2, 6, 2, 0, 0)),
    Term(2, (0, 2, 2, 6, 2, 2, 1)),
    Term(8, (0, 2, 2, 8, 0, 0, 0)),
    Term(4, (0, 2, 4, 4, 2, 0, 0)),
    Term(-4, (0, 2, 4, 4, 2, 2, 1)),
    Term(1, (0, 2, 4, 6, 0, 0, 0)),
    Term(60, (1, 1.75, 1, 4, 4.5, 1, 0)),
    Term(-60, (1, 1.75, 1, 4, 4.5, 3, 1)),
    Term(-28, (1, 1.75, 1, 6, 2.5, 1, 0)),
    Term(6, (1, 1.75, 3, 2, 4.5, 1, 0)),
    Term(-6, (1, 1.75, 3, 2, 4.5, 3, 1)),
    Term(60, (1, 2.25, 1, 4, 5.5, 1, 1)),
    Term(-60, (1, 2.25, 1, 4, 5.5, 3, 2)),
    Term(-20, (1, 2.25, 1, 6, 3.5, 1, 1)),
    Term(6, (1, 2.25, 3, 2, 5.5, 1, 1)),
    Term(-6, (1, 2.25, 3, 2, 5.5, 3, 2)),
    Term(2, (1, 2.25, 3, 4, 3.5, 1, 1)),
    Term(32, (1, 2.75, 1, 6, 4.5, 1, 0)),
    Term(8, (1, 2.75, 3, 4, 4.5, 1, 0)),
    Term(-120, (1, 3.75, 1, 4, 4.5, 1, 0)),
    Term(120, (1, 3.75, 1, 4, 4.5, 3, 1)),
    Term(56, (1, 3.75, 1, 6, 2.5, 1, 0)),
    Term(-12, (1, 3.75, 3, 2, 4.5, 1, 0)),
    Term(12, (1, 3.75, 3, 2, 4.5, 3, 1)),
    Term(8, (2, 1.5, 2, 2, 5, 2, 0)),
    Term(16, (2, 2, 2, 2, 6, 2, 1)),
    Term(8, (2, 2, 2, 4, 4, 0, 0)),
    Term(2, (2, 2, 4, 2, 4, 0, 0)),
    Term(8, (2, 2.5, 2, 2, 7, 2, 2)),
    Term(8, (2, 2.5, 2, 4, 5, 0, 1)),
    Term(2, (2, 2.5, 4, 2, 5, 0, 1)),
    Term(-48, (2, 3.5, 0, 4, 5, 0, 1)),
    Term(48, (2, 3.5, 0, 4, 5, 2, 2)),
    Term(16, (2, 3.5, 0, 6, 3, 0, 1)),
    Term(-6, (2, 3.5, 2, 2, 5, 0, 1)),
    Term(-32, (2, 3.5, 2, 2, 5, 2, 0)),
    Term(6, (2, 3.5, 2, 2, 5, 2, 2)),
    Term(-2, (2, 3.5, 2, 4, 3, 0, 1)),
    Term(-48, (2, 4, 0, 4, 6, 0, 0)),
    Term(48, (2, 4, 0, 4, 6, 2, 1)),
    Term(16, (2, 4, 0, 6, 4, 0, 0)),
    Term(-6, (2, 4, 2, 2, 6, 0, 0)),
    Term(-26, (2, 4, 2, 2, 6, 2, 1)),
    Term(-18, (2, 4, 2, 4, 4, 0, 0)),
    Term(-4, (2, 4, 4, 2, 4, 0, 0)),
    Term(32, (2, 5.5, 2, 2, 5, 2, 0)),
    Term(-40, (3, 3.25, 1, 2, 5.5, 1, 1)),
    Term(-4, (3, 3.25, 3, 0, 5.5, 1, 1)),
    Term(-40, (3, 3.75, 1, 2, 6.5, 1, 0)),
    Term(-40, (3, 3.75, 1, 2, 6.5, 1, 2)),
    Term(-4, (3, 3.75, 3, 0, 6.5, 1, 0)),
    Term(-4, (3, 3.75, 3, 0, 6.5, 1, 2)),
    Term(-40, (3, 4.25, 1, 2, 7.5, 1, 1)),
    Term(-4, (3, 4.25, 3, 0, 7.5, 1, 1)),
    Term(80, (3, 5.25, 1, 2, 5.5, 1, 1)),
    Term(8, (3, 5.25, 3, 0, 5.5, 1, 1)),
    Term(80, (3, 5.75, 1, 2, 6.5, 1, 0)),
    Term(8, (3, 5.75, 3, 0, 6.5, 1, 0)),
    Term(32, (4, 5, 0, 2, 6, 0, 2)),
    Term(4, (4, 5, 2, 0, 6, 0, 2)),
    Term(64, (4, 5.5, 0, 2, 7, 0, 1)),
    Term(8, (4, 5.5, 2, 0, 7, 0, 1)),
    Term(32, (4, 6, 0, 2, 8, 0, 0)),
    Term(4, (4, 6, 2, 0, 8, 0, 0)),
)

# bracket of Re<p, 2B(q,h11)>; the prefactor is -beta^(3/4) / (eps_c omega0^4 omega1^2 (eps_c^2 + omega0^2))
PR2_BRACKET_TERMS = (
    Term(-3, (0, 0.25, 2, 4, 2, 0, 0)),
    Term(3, (0, 0.25, 2, 4, 2, 2, 1)),
    Term(1, (0, 0.25, 2, 6, 0, 0, 0)),
    Term(6, (1, 0, 1, 2, 4.5, 1, 0)),
    Term(-6, (1, 0, 1, 2, 4.5, 3, 1)),
    Term(-4, (1, 0, 1, 4, 2.5, 1, 0)),
    Term(6, (1, 0.5, 1, 2, 5.5, 1, 1)),
    Term(-6, (1, 0.5, 1, 2, 5.5, 3, 2)),
    Term(-4, (1, 0.5, 1, 4, 3.5, 1, 1)),
    Term(-12, (1, 2, 1, 2, 4.5, 1, 0)),
    Term(12, (1, 2, 1, 2, 4.5, 3, 1)),
    Term(8, (1, 2, 1, 4, 2.5, 1, 0)),
    Term(-6, (2, 1.75, 0, 2, 5, 0, 1)),
    Term(6, (2, 1.75, 0, 2, 5, 2, 2)),
    Term(2, (2, 1.75, 0, 4, 3, 0, 1)),
    Term(-6, (2, 2.25, 0, 2, 6, 0, 0)),
    Term(6, (2, 2.25, 0, 2, 6, 2, 1)),
    Term(2, (2, 2.25, 0, 4, 4, 0, 0)),
    Term(-4, (3, 1.5, 1, 0, 5.5, 1, 1)),
    Term(-4, (3, 2, 1, 0, 6.5, 1, 0)),
    Term(-4, (3, 2, 1, 0, 6.5, 1, 2)),
    Term(-4, (3, 2.5, 1, 0, 7.5, 1, 1)),
    Term(8, (3, 3.5, 1, 0, 5.5, 1, 1)),
    Term(8, (3, 4, 1, 0, 6.5, 1, 0)),
    Term(4, (4, 3.25, 0, 0, 6, 0, 2)),
    Term(8, (4, 3.75, 0, 0, 7, 0, 1)),
    Term(4, (4, 4.25, 0, 0, 8, 0, 0)),
)

# theta, numerator of Re<p, B(qbar,h20)> over 2 omega0^4 omega1^2 (eps_c^4 + 5 eps_c^2 omega0^2 + 4 omega0^4)
THETA_TERMS = (
    Term(-18, (0, 1, 1, 4, 4, 0, 0)),
    Term(36, (0, 1, 1, 4, 4, 2, 1)),
    Term(-18, (0, 1, 1, 4, 4, 4, 2)),
    Term(6, (0, 1, 1, 6, 2, 0, 0)),
    Term(-6, (0, 1, 1, 6, 2, 2, 1)),
    Term(-3, (0, 1, 3, 4, 2, 0, 0)),
    Term(3, (0, 1, 3, 4, 2, 2, 1)),
    Term(1, (0, 1, 3, 6, 0, 0, 0)),
    Term(-12, (1, 0.75, 0, 4, 4.5, 1, 0)),
    Term(12, (1, 0.75, 0, 4, 4.5, 3, 1)),
    Term(-4, (1, 0.75, 0, 6, 2.5, 1, 0)),
    Term(6, (1, 0.75, 2, 2, 4.5, 1, 0)),
    Term(-6, (1, 0.75, 2, 2, 4.5, 3, 1)),
    Term(-8, (1, 0.75, 2, 4, 2.5, 1, 0)),
    Term(-12, (1, 1.25, 0, 4, 5.5, 1, 1)),
    Term(12, (1, 1.25, 0, 4, 5.5, 3, 2)),
    Term(-4, (1, 1.25, 0, 6, 3.5, 1, 1)),
    Term(6, (1, 1.25, 2, 2, 5.5, 1, 1)),
    Term(-6, (1, 1.25, 2, 2, 5.5, 3, 2)),
    Term(-8, (1, 1.25, 2, 4, 3.5, 1, 1)),
    Term(24, (1, 2.75, 0, 4, 4.5, 1, 0)),
    Term(-24, (1, 2.75, 0, 4, 4.5, 3, 1)),
    Term(8, (1, 2.75, 0, 6, 2.5, 1, 0)),
    Term(-12, (1, 2.75, 2, 2, 4.5, 1, 0)),
    Term(12, (1, 2.75, 2, 2, 4.5, 3, 1)),
    Term(16, (1, 2.75, 2, 4, 2.5, 1, 0)),
    Term(-8, (2, 0.5, 1, 2, 5, 2, 0)),
    Term(-16, (2, 1, 1, 2, 6, 2, 1)),
    Term(-8, (2, 1.5, 1, 2, 7, 2, 2)),
    Term(-6, (2, 2.5, 1, 2, 5, 0, 1)),
    Term(32, (2, 2.5, 1, 2, 5, 2, 0)),
    Term(6, (2, 2.5, 1, 2, 5, 2, 2)),
    Term(6, (2, 2.5, 1, 4, 3, 0, 1)),
    Term(-6, (2, 3, 1, 2, 6, 0, 0)),
    Term(38, (2, 3, 1, 2, 6, 2, 1)),
    Term(6, (2, 3, 1, 4, 4, 0, 0)),
    Term(-32, (2, 4.5, 1, 2, 5, 2, 0)),
    Term(8, (3, 2.25, 0, 2, 5.5, 1, 1)),
    Term(-4, (3, 2.25, 2, 0, 5.5, 1, 1)),
    Term(8, (3, 2.75, 0, 2, 6.5, 1, 0)),
    Term(8, (3, 2.75, 0, 2, 6.5, 1, 2)),
    Term(-4, (3, 2.75, 2, 0, 6.5, 1, 0)),
    Term(-4, (3, 2.75, 2, 0, 6.5, 1, 2)),
    Term(8, (3, 3.25, 0, 2, 7.5, 1, 1)),
    Term(-4, (3, 3.25, 2, 0, 7.5, 1, 1)),
    Term(-16, (3, 4.25, 0, 2, 5.5, 1, 1)),
    Term(8, (3, 4.25, 2, 0, 5.5, 1, 1)),
    Term(-16, (3, 4.75, 0, 2, 6.5, 1, 0)),
    Term(8, (3, 4.75, 2, 0, 6.5, 1, 0)),
    Term(4, (4, 4, 1, 0, 6, 0, 2)),
    Term(8, (4, 4.5, 1, 0, 7, 0, 1)),
    Term(4, (4, 5, 1, 0, 8, 0, 0)),
)

# numerator of l1 on the kappa = 0 slice
G2_TERMS = (
    Term(-6, (0, 0, 0, 0)),
    Term(-27, (0, 0, 1, 1)),
    Term(-45, (0, 0, 2, 0)),
    Term(-30, (0, 0, 3, 1)),
    Term(9, (0, 0, 5, 1)),
    Term(3, (0, 0, 6, 0)),
    Term(58, (0, 2, 0, 0)),
    Term(203, (0, 2, 1, 1)),
    Term(277, (0, 2, 2, 0)),
    Term(88, (0, 2, 3, 1)),
    Term(-58, (0, 2, 4, 0)),
    Term(-47, (0, 2, 5, 1)),
    Term(-9, (0, 2, 6, 0)),
    Term(-2, (2, 2, 0, 0)),
    Term(-14, (2, 2, 1, 1)),
    Term(-42, (2, 2, 2, 0)),
    Term(-70, (2, 2, 3, 1)),
    Term(-70, (2, 2, 4, 0)),
    Term(-42, (2, 2, 5, 1)),
    Term(-14, (2, 2, 6, 0)),
    Term(-2, (2, 2, 7, 1)),
    Term(-248, (0, 4, 0, 0)),
    Term(-651, (0, 4, 1, 1)),
    Term(-710, (0, 4, 2, 0)),
    Term(-75, (0, 4, 3, 1)),
    Term(143, (0, 4, 4, 0)),
    Term(27, (0, 4, 5, 1)),
    Term(16, (2, 4, 0, 0)),
    Term(93, (2, 4, 1, 1)),
    Term(264, (2, 4, 2, 0)),
    Term(345, (2, 4, 3, 1)),
    Term(320, (2, 4, 4, 0)),
    Term(135, (2, 4, 5, 1)),
    Term(40, (2, 4, 6, 0)),
    Term(3, (2, 4, 7, 1)),
    Term(616, (0, 6, 0, 0)),
    Term(1155, (0, 6, 1, 1)),
    Term(970, (0, 6, 2, 0)),
    Term(-3, (0, 6, 3, 1)),
    Term(-112, (0, 6, 4, 0)),
    Term(-56, (2, 6, 0, 0)),
    Term(-272, (2, 6, 1, 1)),
    Term(-750, (2, 6, 2, 0)),
    Term(-795, (2, 6, 3, 1)),
    Term(-710, (2, 6, 4, 0)),
    Term(-240, (2, 6, 5, 1)),
    Term(-68, (2, 6, 6, 0)),
    Term(-5, (2, 6, 7, 1)),
    Term(-2, (4, 6, 0, 0)),
    Term(-16, (4, 6, 1, 1)),
    Term(-56, (4, 6, 2, 0)),
    Term(-112, (4, 6, 3, 1)),
    Term(-140, (4, 6, 4, 0)),
    Term(-112, (4, 6, 5, 1)),
    Term(-56, (4, 6, 6, 0)),
    Term(-16, (4, 6, 7, 1)),
    Term(-2, (4, 6, 8, 0)),
    Term(-980, (0, 8, 0, 0)),
    Term(-1225, (0, 8, 1, 1)),
    Term(-745, (0, 8, 2, 0)),
    Term(29, (0, 8, 3, 1)),
    Term(27, (0, 8, 4, 0)),
    Term(112, (2, 8, 0, 0)),
    Term(457, (2, 8, 1, 1)),
    Term(1264, (2, 8, 2, 0)),
    Term(1121, (2, 8, 3, 1)),
    Term(1004, (2, 8, 4, 0)),
    Term(286, (2, 8, 5, 1)),
    Term(80, (2, 8, 6, 0)),
    Term(4, (2, 8, 7, 1)),
    Term(16, (4, 8, 0, 0)),
    Term(110, (4, 8, 1, 1)),
    Term(378, (4, 8, 2, 0)),
    Term(630, (4, 8, 3, 1)),
    Term(770, (4, 8, 4, 0)),
    Term(490, (4, 8, 5, 1)),
    Term(238, (4, 8, 6, 0)),
    Term(50, (4, 8, 7, 1)),
    Term(6, (4, 8, 8, 0)),
    Term(1036, (0, 10, 0, 0)),
    Term(777, (0, 10, 1, 1)),
    Term(305, (0, 10, 2, 0)),
    Term(-9, (0, 10, 3, 1)),
    Term(-140, (2, 10, 0, 0)),
    Term(-480, (2, 10, 1, 1)),
    Term(-1376, (2, 10, 2, 0)),
    Term(-1011, (2, 10, 3, 1)),
    Term(-916, (2, 10, 4, 0)),
    Term(-186, (2, 10, 5, 1)),
    Term(-46, (2, 10, 6, 0)),
    Term(-56, (4, 10, 0, 0)),
    Term(-324, (4, 10, 1, 1)),
    Term(-1092, (4, 10, 2, 0)),
    Term(-1470, (4, 10, 3, 1)),
    Term(-1750, (4, 10, 4, 0)),
    Term(-840, (4, 10, 5, 1)),
    Term(-392, (4, 10, 6, 0)),
    Term(-54, (4, 10, 7, 1)),
    Term(-6, (4, 10, 8, 0)),
    Term(-728, (0, 12, 0, 0)),
    Term(-273, (0, 12, 1, 1)),
    Term(-52, (0, 12, 2, 0)),
    Term(112, (2, 12, 0, 0)),
    Term(319, (2, 12, 1, 1)),
    Term(976, (2, 12, 2, 0)),
    Term(552, (2, 12, 3, 1)),
    Term(494, (2, 12, 4, 0)),
    Term(51, (2, 12, 5, 1)),
    Term(8, (2, 12, 6, 0)),
    Term(112, (4, 12, 0, 0)),
    Term(530, (4, 12, 1, 1)),
    Term(1750, (4, 12, 2, 0)),
    Term(1820, (4, 12, 3, 1)),
    Term(2100, (4, 12, 4, 0)),
    Term(700, (4, 12, 5, 1)),
    Term(308, (4, 12, 6, 0)),
    Term(22, (4, 12, 7, 1)),
    Term(2, (4, 12, 8, 0)),
    Term(328, (0, 14, 0, 0)),
    Term(41, (0, 14, 1, 1)),
    Term(-56, (2, 14, 0, 0)),
    Term(-128, (2, 14, 1, 1)),
    Term(-430, (2, 14, 2, 0)),
    Term(-160, (2, 14, 3, 1)),
    Term(-136, (2, 14, 4, 0)),
    Term(-4, (2, 14, 5, 1)),
    Term(-140, (4, 14, 0, 0)),
    Term(-520, (4, 14, 1, 1)),
    Term(-1680, (4, 14, 2, 0)),
    Term(-1260, (4, 14, 3, 1)),
    Term(-1400, (4, 14, 4, 0)),
    Term(-280, (4, 14, 5, 1)),
    Term(-112, (4, 14, 6, 0)),
    Term(-2, (4, 14, 7, 1)),
    Term(-86, (0, 16, 0, 0)),
    Term(16, (2, 16, 0, 0)),
    Term(27, (2, 16, 1, 1)),
    Term(104, (2, 16, 2, 0)),
    Term(18, (2, 16, 3, 1)),
    Term(14, (2, 16, 4, 0)),
    Term(112, (4, 16, 0, 0)),
    Term(306, (4, 16, 1, 1)),
    Term(966, (4, 16, 2, 0)),
    Term(462, (4, 16, 3, 1)),
    Term(490, (4, 16, 4, 0)),
    Term(42, (4, 16, 5, 1)),
    Term(14, (4, 16, 6, 0)),
    Term(10, (0, 18, 0, 0)),
    Term(-2, (2, 18, 0, 0)),
    Term(-2, (2, 18, 1, 1)),
    Term(-10, (2, 18, 2, 0)),
    Term(-56, (4, 18, 0, 0)),
    Term(-100, (4, 18, 1, 1)),
    Term(-308, (4, 18, 2, 0)),
    Term(-70, (4, 18, 3, 1)),
    Term(-70, (4, 18, 4, 0)),
    Term(16, (4, 20, 0, 0)),
    Term(14, (4, 20, 1, 1)),
    Term(42, (4, 20, 2, 0)),
    Term(-2, (4, 22, 0, 0)),
)

# monomials of G2 whose printed coefficient disagrees with the projection engine:
# (exponents, printed coefficient, shipped coefficient)
G2_PRINTED_ERRATA = (
    ((4, 10, 7, 0), -2, 0),
    ((4, 10, 8, 0), 0, -6),
    ((4, 14, 2, 0), 0, -1680),
    ((4, 14, 3, 0), -1680, 0),
)
