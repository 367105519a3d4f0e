import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import hermite_e
from scipy import special

from cndfock.hermite import (HermiteBasis, QuadratureRule, eval_hermite_function,
                             eval_hermite_poly, gauss_hermite, gauss_hermite_lebesgue,
                             gauss_legendre, hermite_functions, hermite_weighted_orthogonality,
                             multiplication_matrix, panel_rule, power_weight_rule)


@pytest.mark.parametrize("n, x, expected", [(0, 5.0, 1.0), (2, 2.0, 3.0), (3, 1.0, -2.0)])
def test_hermite_poly_examples(n, x, expected):
    assert eval_hermite_poly(n, x) == expected


def test_hermite_poly_matches_numpy_hermite_e():
    x = np.linspace(-4, 4, 41)
    for n in range(15):
        ref = hermite_e.hermeval(x, [0] * n + [1])
        np.testing.assert_allclose(eval_hermite_poly(n, x), ref, rtol=1e-12, atol=1e-12)


@given(st.floats(-10, 10), st.integers(1, 49))
def test_recurrence_consistency(x, n):
    h_next, h, h_prev = (eval_hermite_poly(k, x) for k in (n + 1, n, n - 1))
    scale = max(abs(h_next), abs(x * h), abs(n * h_prev), 1.0)
    assert abs(h_next - x * h + n * h_prev) <= 1e-9 * scale


def test_hermite_function_examples():
    assert eval_hermite_function(1, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    assert eval_hermite_function(1, 0.0) == pytest.approx(0.751126, abs=1e-6)
    assert eval_hermite_function(2, 0.0) == 0.0


def test_hermite_function_definition_small_n():
    # xi_n(x) = pi^{-1/4} ((n-1)!)^{-1/2} e^{-x^2/2} h_{n-1}(sqrt 2 x)
    x = np.linspace(-3, 3, 13)
    for n in range(1, 12):
        ref = (math.pi ** -0.25 / math.sqrt(math.factorial(n - 1)) * np.exp(-x * x / 2)
               * special.eval_hermitenorm(n - 1, math.sqrt(2) * x))
        np.testing.assert_allclose(eval_hermite_function(n, x), ref, rtol=1e-11, atol=1e-14)


def test_hermite_functions_finite_for_large_n():
    vals = hermite_functions(250, np.linspace(-30, 30, 7))
    assert np.all(np.isfinite(vals))
    assert vals.shape == (250, 7)


def test_hermite_functions_orthonormal():
    rule = gauss_hermite_lebesgue(60)
    v = hermite_functions(30, rule.nodes)
    gram = (v * rule.weights) @ v.T
    assert np.max(np.abs(gram - np.eye(30))) < 1e-8


def test_normalization_by_independent_quadrature():
    from scipy import integrate
    val, _ = integrate.quad(lambda x: eval_hermite_function(1, x) ** 2, -np.inf, np.inf)
    assert val == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n, m, expected, tol", [(2, 2, 2.0, 1e-10), (1, 3, 0.0, 1e-10),
                                                 (0, 0, 1.0, 1e-12)])
def test_weighted_orthogonality_examples(n, m, expected, tol):
    assert abs(hermite_weighted_orthogonality(n, m) - expected) <= tol


@given(st.integers(0, 12), st.integers(0, 12))
def test_weighted_orthogonality_is_n_factorial_delta(n, m):
    expected = math.factorial(n) if n == m else 0.0
    scale = math.sqrt(math.factorial(n) * math.factorial(m))
    assert abs(hermite_weighted_orthogonality(n, m) - expected) <= 1e-12 * scale


def test_quadrature_rule_invariants():
    with pytest.raises(ValueError):
        QuadratureRule("gauss-hermite", np.array([0.0, 1.0]), np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        QuadratureRule("gauss-hermite", np.array([1.0, 0.0]), np.array([1.0, 1.0]))
    for rule in (gauss_hermite(20), gauss_hermite_lebesgue(40), gauss_legendre(0, 2, 10),
                 panel_rule([0, 1, 3], 8), power_weight_rule(-0.5, 20.0)):
        assert np.all(rule.weights > 0)
        assert np.all(np.diff(rule.nodes) > 0)


@given(st.integers(0, 19))
def test_gauss_legendre_exactness(k):
    rule = gauss_legendre(-1.0, 2.0, 10)
    exact = (2.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1)
    assert rule.integrate(lambda x: x ** k) == pytest.approx(exact, rel=1e-12, abs=1e-12)


@given(st.integers(0, 15))
def test_gauss_hermite_exactness(k):
    # standard normal moments
    exact = 0.0 if k % 2 else float(math.prod(range(k - 1, 0, -2)))
    val = gauss_hermite(10).integrate(lambda x: x ** k)
    assert val == pytest.approx(exact, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5])
def test_power_weight_rule_gamma_moments(beta):
    # integral |u|^beta e^{-u^2} du = Gamma((beta + 1) / 2)
    rule = power_weight_rule(beta, 12.0)
    val = rule.integrate(lambda u: np.exp(-u * u))
    assert val == pytest.approx(special.gamma((beta + 1) / 2), rel=1e-12)


def test_power_weight_rule_rejects_nonintegrable():
    with pytest.raises(ValueError):
        power_weight_rule(-1.0, 10.0)


def test_basis_evaluate():
    b = HermiteBasis(4)
    x = np.array([0.3, -1.2])
    np.testing.assert_allclose(b.evaluate([1, 0, 2, 0], x),
                               eval_hermite_function(1, x) + 2 * eval_hermite_function(3, x))


def test_multiplication_matrix_recurrence():
    # x h_n = h_{n+1} + n h_{n-1}; in the basis h_n / sqrt(n!) the matrix is tridiagonal
    m = multiplication_matrix(10)
    for n in range(10):
        assert m[n + 1, n] == pytest.approx(math.sqrt(n + 1), abs=1e-12)
        if n:
            assert m[n - 1, n] == pytest.approx(math.sqrt(n), abs=1e-12)
    mask = np.abs(np.subtract.outer(np.arange(len(m)), np.arange(len(m)))) != 1
    assert np.max(np.abs(m[mask])) < 1e-12
