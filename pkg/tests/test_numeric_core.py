import numpy as np
import pytest

from numeric_core import SingularMatrixError, cubic_roots, hermitian_inner, solve3


def test_three_real_roots_use_trigonometric_branch():
    roots = cubic_roots(-6.0, 11.0, -6.0)
    np.testing.assert_allclose(sorted(roots.real), [1.0, 2.0, 3.0], atol=1e-12)
    assert np.all(roots.imag == 0.0)


@pytest.mark.parametrize("eps, omega", [(0.7071067811865476, 1.224744871391589), (2.0, 0.3), (0.01, 5.0)])
def test_hopf_shaped_cubic_orders_real_root_first(eps, omega):
    # (lambda + eps)(lambda^2 + omega^2)
    roots = cubic_roots(eps, omega**2, eps * omega**2)
    np.testing.assert_allclose(roots, [-eps, 1j * omega, -1j * omega], atol=1e-9)


def test_conjugate_pair_has_positive_imaginary_part_first():
    roots = cubic_roots(1.0, 1.0, 1.0)
    assert roots[1].imag > 0.0
    assert roots[2] == pytest.approx(np.conj(roots[1]))


@pytest.mark.parametrize(
    "coefficients, expected",
    [
        ((2.0, 2.0, 1.0), [-1.0, -0.5 + 0.5j * np.sqrt(3.0), -0.5 - 0.5j * np.sqrt(3.0)]),
        ((0.0, 1.0, 0.0), [0.0, 1j, -1j]),
    ],
)
def test_known_cubics(coefficients, expected):
    np.testing.assert_allclose(cubic_roots(*coefficients), expected, atol=1e-12)


def test_roots_satisfy_vieta_relations_on_random_cubics():
    rng = np.random.default_rng(13)
    for c2, c1, c0 in rng.uniform(-10.0, 10.0, size=(1000, 3)):
        r = cubic_roots(c2, c1, c0)
        assert r.sum() == pytest.approx(-c2, rel=1e-9, abs=1e-9)
        assert r[0] * r[1] + r[0] * r[2] + r[1] * r[2] == pytest.approx(c1, rel=1e-9, abs=1e-9)
        assert r.prod() == pytest.approx(-c0, rel=1e-9, abs=1e-9)


def test_triple_root_is_polished():
    roots = cubic_roots(3.0, 3.0, 1.0)
    np.testing.assert_allclose(roots, [-1.0, -1.0, -1.0], atol=1e-4)


def test_non_finite_coefficients_are_rejected():
    with pytest.raises(ValueError):
        cubic_roots(float("nan"), 1.0, 1.0)


def test_solve3_matches_numpy_on_random_complex_systems():
    rng = np.random.default_rng(7)
    for _ in range(20):
        matrix = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rhs = rng.normal(size=3) + 1j * rng.normal(size=3)
        np.testing.assert_allclose(solve3(matrix, rhs), np.linalg.solve(matrix, rhs), rtol=1e-10, atol=1e-12)


def test_solve3_diagonal_complex_system():
    matrix = np.diag([2.0, 2.0j, -1.0])
    np.testing.assert_allclose(solve3(matrix, [2.0, 2.0, 1.0]), [1.0, -1j, -1.0], atol=1e-15)


def test_solve3_needs_pivoting():
    matrix = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 2.0]])
    np.testing.assert_allclose(solve3(matrix, [1.0, 2.0, 4.0]), [2.0, 1.0, 2.0])


def test_solve3_rejects_singular_matrix():
    matrix = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]])
    with pytest.raises(SingularMatrixError):
        solve3(matrix, [1.0, 1.0, 1.0])


def test_solve3_rejects_wrong_shapes():
    with pytest.raises(ValueError):
        solve3(np.eye(2), [1.0, 1.0])


def test_hermitian_inner_conjugates_first_argument():
    e1 = np.array([1.0, 0.0, 0.0])
    assert hermitian_inner(1j * e1, e1) == pytest.approx(-1j)
    assert hermitian_inner(e1, 1j * e1) == pytest.approx(1j)


def test_hermitian_norm_is_real_and_non_negative():
    rng = np.random.default_rng(19)
    for _ in range(100):
        q = rng.normal(size=3) + 1j * rng.normal(size=3)
        value = hermitian_inner(q, q)
        assert abs(value.imag) < 1e-14 * abs(value)
        assert value.real >= 0.0
        assert value.real == pytest.approx(np.linalg.norm(q) ** 2)
