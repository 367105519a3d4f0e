import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from cndfock.cnd import FourierType, L2Type, Mixture
from cndfock.errors import PositivityError, RepresentationError
from cndfock.gaussian import (SAMPLE_BLOCK, CovarianceMatrix, GaussianField, characteristic_function,
                              covariance, covariance_matrix, gamma_orthogonalize, gaussian_moment,
                              joint_density, moment, moment_report, orthogonality_defect, sample,
                              sample_normal, scaling_defect)
from cndfock.measures import Lebesgue, PowerLaw
from cndfock.testfn import basis_function, indicator, random_hermite

seeds = st.integers(0, 2 ** 32 - 1)
MODELS = [L2Type(Lebesgue()), FourierType(PowerLaw(0.3)), Mixture(Lebesgue(), 0.4)]


def unit(model, s):
    return s * (1.0 / math.sqrt(model.evaluate(s)))


def test_covariance_examples():
    m = L2Type(Lebesgue())
    s = random_hermite(np.random.default_rng(0))
    assert covariance(GaussianField(m, 1.0), s, s) == pytest.approx(m.evaluate(s), rel=1e-12)
    assert abs(covariance(GaussianField(m), basis_function(1), basis_function(2))) <= 1e-8
    assert covariance(GaussianField(m, 2.0), s, s) == pytest.approx(4 * m.evaluate(s), rel=1e-12)
    with pytest.raises(RepresentationError):
        covariance(GaussianField(m), indicator(1.0), s)


def test_covariance_matrix_examples():
    m = L2Type(Lebesgue())
    gens = [basis_function(j) for j in range(1, 5)]
    assert np.max(np.abs(covariance_matrix(GaussianField(m, 1.0), gens).matrix - np.eye(4))) <= 1e-8
    assert np.max(np.abs(covariance_matrix(GaussianField(m, 3.0), gens).matrix - 9 * np.eye(4))) <= 1e-7
    s = random_hermite(np.random.default_rng(1))
    c = covariance_matrix(GaussianField(m, 1.5), [s]).matrix
    assert c.shape == (1, 1) and c[0, 0] == pytest.approx(2.25 * m.evaluate(s))


@given(st.sampled_from(MODELS), seeds, st.floats(0.1, 5.0))
def test_variance_identity(model, seed, lam):
    s = random_hermite(np.random.default_rng(seed))
    f = GaussianField(model, lam)
    assert covariance(f, s, s) == pytest.approx(lam ** 2 * model.evaluate(s), rel=1e-9)


@given(st.sampled_from(MODELS), seeds, st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_covariance_scaling_relation(model, seed, lam1, lam2):
    rng = np.random.default_rng(seed)
    gens = [random_hermite(rng) for _ in range(4)]
    c1 = covariance_matrix(GaussianField(model, lam1), gens)
    c2 = covariance_matrix(GaussianField(model, lam2), gens)
    assert scaling_defect(c1, c2) <= 1e-9 * max(1.0, np.max(np.abs(c1.matrix)) / lam1 ** 2)


def test_covariance_matrix_detects_indefinite():
    class Bad(L2Type):
        def gram(self, size):
            g = np.eye(size)
            g[0, 0] = -1.0
            return g
    with pytest.raises(PositivityError):
        covariance_matrix(GaussianField(Bad()), [basis_function(1), basis_function(2)])


def test_brownian_covariance_from_indicators():
    f = GaussianField(FourierType(Lebesgue()), 1.0)
    ts = [0.5, 1.0, 2.0]
    c = covariance_matrix(f, [indicator(t) for t in ts]).matrix
    np.testing.assert_allclose(c / (2 * math.pi), np.minimum.outer(ts, ts), rtol=1e-5)


@pytest.mark.parametrize("H", [0.25, 0.5, 0.75])
def test_fbm_marginal_ratios(H):
    f = GaussianField(FourierType(PowerLaw(H)), 2.0)
    ts = [0.5, 1.0, 1.5, 2.5]
    c = covariance_matrix(f, [indicator(t) for t in ts]).matrix
    norm = c / c[1, 1]
    exact = np.array([[0.5 * (a ** (2 * H) + b ** (2 * H) - abs(a - b) ** (2 * H)) for b in ts] for a in ts])
    np.testing.assert_allclose(norm, exact, rtol=1e-3)


def test_sampling_is_deterministic_and_blockwise():
    cov = np.array([[2.0, 0.3], [0.3, 1.0]])
    a = sample_normal(cov, 1000, 7)
    b = sample_normal(cov, 1000, 7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_normal(cov, 1000, 8))
    # replicate r depends only on (seed, r): a shorter run is a prefix
    assert np.array_equal(sample_normal(cov, 10, 7), a[:10])
    long = sample_normal(cov, SAMPLE_BLOCK + 5, 7)
    assert np.array_equal(long[:1000], a)


def test_sample_empty():
    f = GaussianField(L2Type())
    p = sample(f, [basis_function(1)], 0, 3)
    assert len(p) == 0 and list(p) == []


def test_sample_mean_and_covariance():
    m = L2Type(Lebesgue())
    rng = np.random.default_rng(2)
    gens = [random_hermite(rng, 32, active=6) for _ in range(3)]
    f = GaussianField(m, 1.3)
    count = 1_000_000
    x = sample(f, gens, count, 11).values
    c = covariance_matrix(f, gens).matrix
    assert np.all(np.abs(x.mean(axis=0)) <= 3 * np.sqrt(np.diag(c) / count))
    emp = x.T @ x / count
    se = np.sqrt((np.outer(np.diag(c), np.diag(c)) + c * c) / count)
    assert np.all(np.abs(emp - c) <= 3 * se)


def test_semidefinite_covariance_uses_jitter():
    s = basis_function(1)
    f = GaussianField(L2Type())
    x = sample(f, [s, s * 2.0], 1000, 0).values
    np.testing.assert_allclose(x[:, 1], 2 * x[:, 0], rtol=1e-4, atol=1e-4)


def test_moment_examples():
    m = L2Type(Lebesgue())
    s = basis_function(1)
    assert moment(GaussianField(m, 1.0), s, 4) == 3.0
    assert moment(GaussianField(m, 1.7), s, 3) == 0.0
    assert moment(GaussianField(m, 2.0), s, 2) == pytest.approx(4.0)


@given(st.integers(0, 12), st.floats(0.01, 10))
def test_gaussian_moment_against_scipy(order, var):
    ref = stats.norm(scale=math.sqrt(var)).moment(order)
    assert gaussian_moment(var, order) == pytest.approx(ref, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("lam", [1.0, 2.0])
def test_mc_moments(lam):
    m = FourierType(PowerLaw(0.3))
    s = unit(m, random_hermite(np.random.default_rng(3), 32, active=5))
    f = GaussianField(m, lam)
    x = sample(f, [s], 1_000_000, 5).values[:, 0]
    for row in moment_report(f, s, x, range(1, 7)):
        assert row["pass"], row


def test_characteristic_function_examples():
    m = L2Type(Lebesgue())
    s = basis_function(1)
    assert characteristic_function(GaussianField(m, 1.0), [2.0], [s]) == pytest.approx(math.exp(-2.0))
    gens = [random_hermite(np.random.default_rng(4)) for _ in range(3)]
    assert characteristic_function(GaussianField(m, 1.9), np.zeros(3), gens) == 1.0
    a = np.array([0.3, -0.2, 0.5])
    lam1, lam2 = 0.7, 1.8
    v1 = characteristic_function(GaussianField(m, lam1), lam2 * a, gens)
    v2 = characteristic_function(GaussianField(m, lam2), lam1 * a, gens)
    assert v1 == pytest.approx(v2, rel=1e-12)


def test_joint_density_examples():
    assert joint_density(np.array([[1.0]]), [0.0]) == pytest.approx(1 / math.sqrt(2 * math.pi))
    assert joint_density(np.array([[1.0]]), [1.0]) == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi))
    c = np.array([[1.5, 0.4], [0.4, 0.8]])
    total, _ = integrate.dblquad(lambda y, x: joint_density(c, [x, y]), -12, 12, -12, 12,
                                 epsabs=1e-10)
    assert total == pytest.approx(1.0, abs=1e-6)
    x = np.array([0.3, -1.1])
    assert joint_density(CovarianceMatrix(c, 1.0), x) == pytest.approx(
        stats.multivariate_normal(cov=c).pdf(x), rel=1e-12)
    with pytest.raises(PositivityError):
        joint_density(np.array([[1.0, 1.0], [1.0, 1.0]]), [0.0, 0.0])


def test_gamma_orthogonalize_examples():
    m = L2Type(Lebesgue())
    f = GaussianField(m, 1.0)
    gens = [basis_function(j) for j in range(1, 4)]
    out = gamma_orthogonalize(f, gens)
    for a, b in zip(out, gens):
        np.testing.assert_allclose(np.abs(a.coeffs), np.abs(b.coeffs), atol=1e-12)
    assert len(gamma_orthogonalize(f, [basis_function(1), basis_function(1)])) == 1


@given(st.sampled_from(MODELS), seeds, st.floats(0.3, 3.0))
def test_gamma_orthogonalize_random(model, seed, lam):
    rng = np.random.default_rng(seed)
    f = GaussianField(model, lam)
    out = gamma_orthogonalize(f, [random_hermite(rng, 32, active=8) for _ in range(4)])
    assert len(out) == 4
    c = covariance_matrix(f, out).matrix
    assert np.max(np.abs(c - np.eye(4))) <= 1e-8
    assert orthogonality_defect(f, out) <= 1e-8 * max(1.0, 1 / lam ** 2)


def test_samples_csv(tmp_path):
    p = sample(GaussianField(L2Type()), [basis_function(1), basis_function(2)], 3, 0)
    p.to_csv(tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "replicate,x0,x1" and len(lines) == 4
