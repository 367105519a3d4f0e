"""Finite-dimensional face of the Gaussian measures P_lambda.

The measure fixed by ``E[exp(i X_s)] = exp(-lam^2 N(s) / 2)`` is handled
only through its marginals ``(X_{s_1}, ..., X_{s_n})``, which are centered
Gaussian vectors with covariance ``Gamma_lam(s_j, s_k)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cnd import CndModel, psd_check
from .errors import PositivityError, RepresentationError
from .reporting import write_csv
from .testfn import TestFunction

PSD_RTOL = 1e-9
JITTER_RTOL = 1e-10
# replicates are drawn in fixed-size blocks, each from its own counter-keyed stream
SAMPLE_BLOCK = 1 << 16


@dataclass(frozen=True)
class GaussianField:
    model: CndModel
    lam: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    def variance(self, s: TestFunction) -> float:
        return self.lam ** 2 * self.model.evaluate(s)

    def rescaled(self, lam: float) -> "GaussianField":
        return GaussianField(self.model, lam)


def covariance(field: GaussianField, s1: TestFunction, s2: TestFunction) -> float:
    """``Gamma_lam(s1, s2) = lam^2 (N(s1 + s2) - N(s1 - s2)) / 4``.

    Indicator pairs go through the model's closed-form pairing instead,
    since indicators carry no linear structure here.
    """
    if s1.is_hermite and s2.is_hermite:
        n = field.model
        return 0.25 * field.lam ** 2 * (n.evaluate(s1 + s2) - n.evaluate(s1 - s2))
    if s1.kind == "indicator" and s2.kind == "indicator":
        return field.lam ** 2 * field.model.indicator_pairing(s1.t, s2.t)
    raise RepresentationError("covariance of mixed indicator/Hermite pairs is not supported")


@dataclass
class CovarianceMatrix:
    matrix: np.ndarray
    lam: float
    generators: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def min_eig(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def to_csv(self, path) -> None:
        write_csv(path, [f"g{j}" for j in range(self.n)], self.matrix.tolist())


def covariance_matrix(field: GaussianField, generators: Sequence[TestFunction],
                      rtol: float = PSD_RTOL) -> CovarianceMatrix:
    n = len(generators)
    if n < 1:
        raise ValueError("need at least one generator")
    mat = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            mat[j, k] = mat[k, j] = covariance(field, generators[j], generators[k])
    min_eig, _, ok = psd_check(mat, rtol)
    if not ok:
        raise PositivityError(f"covariance matrix has eigenvalue {min_eig:.3g}", min_eig)
    return CovarianceMatrix(mat, field.lam, list(generators))


def scaling_defect(c1: CovarianceMatrix, c2: CovarianceMatrix) -> float:
    """``max |lam1^-2 C1 - lam2^-2 C2|`` for covariances over the same generators."""
    return float(np.max(np.abs(c1.matrix / c1.lam ** 2 - c2.matrix / c2.lam ** 2)))


@dataclass
class PathSamples:
    """``count`` realizations of ``(X_{s_1}, ..., X_{s_n})``, one per row."""

    values: np.ndarray
    seed: int

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self):
        return iter(self.values)

    def to_csv(self, path) -> None:
        n = self.values.shape[1]
        rows = ([r] + list(v) for r, v in enumerate(self.values))
        write_csv(path, ["replicate"] + [f"x{j}" for j in range(n)], rows)


def factor(matrix: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, retrying once with ``1e-10 * trace`` diagonal jitter."""
    try:
        return np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        pass
    jitter = JITTER_RTOL * max(np.trace(matrix), np.finfo(float).tiny)
    try:
        return np.linalg.cholesky(matrix + jitter * np.eye(len(matrix)))
    except np.linalg.LinAlgError as exc:
        raise PositivityError("covariance is not positive semidefinite even after jitter") from exc


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Philox stream for replicate block ``block`` under ``seed``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def sample_normal(matrix: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` vectors from ``N(0, matrix)``.

    Replicate ``r`` depends only on ``(seed, r)``: blocks of
    ``SAMPLE_BLOCK`` replicates use independent counter-keyed streams, so
    any block can be produced in isolation or in parallel.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    n = matrix.shape[0]
    if count == 0:
        return np.empty((0, n))
    chol = factor(matrix)
    out = np.empty((count, n))
    for block in range(math.ceil(count / SAMPLE_BLOCK)):
        lo = block * SAMPLE_BLOCK
        hi = min(count, lo + SAMPLE_BLOCK)
        z = block_generator(seed, block).standard_normal((SAMPLE_BLOCK, n))[: hi - lo]
        out[lo:hi] = z @ chol.T
    return out


def sample(field: GaussianField, generators: Sequence[TestFunction], count: int,
           seed: int) -> PathSamples:
    cov = covariance_matrix(field, generators)
    return PathSamples(sample_normal(cov.matrix, count, seed), seed)


def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def gaussian_moment(variance: float, order: int) -> float:
    """``E[X^order]`` for ``X ~ N(0, variance)``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if order % 2:
        return 0.0
    return double_factorial(order - 1) * variance ** (order // 2)


def moment(field: GaussianField, s: TestFunction, order: int) -> float:
    return gaussian_moment(field.variance(s), order)


def moment_report(field: GaussianField, s: TestFunction, values: np.ndarray,
                  orders=range(1, 7), n_se: float = 4.0) -> list[dict]:
    """Empirical moments of a 1-D sample against the analytic values."""
    values = np.asarray(values, dtype=float)
    m = len(values)
    rows = []
    for k in orders:
        pk = values ** k
        emp = float(pk.mean())
        se = float(pk.std(ddof=1) / math.sqrt(m))
        exact = moment(field, s, k)
        rows.append({"order": k, "empirical": emp, "exact": exact, "se": se,
                     "z": abs(emp - exact) / se if se > 0 else 0.0,
                     "pass": abs(emp - exact) <= n_se * se})
    return rows


def characteristic_function(field: GaussianField, coeffs, generators: Sequence[TestFunction]) -> complex:
    """``E[exp(i sum_j a_j X_{s_j})] = exp(-a^T C a / 2)``."""
    a = np.asarray(coeffs, dtype=float)
    if len(a) != len(generators):
        raise ValueError("need one coefficient per generator")
    if len(a) == 0:
        return 1.0 + 0j
    cov = covariance_matrix(field, generators).matrix
    return complex(np.exp(-0.5 * a @ cov @ a))


def joint_density(cov: CovarianceMatrix | np.ndarray, x) -> float:
    """Centered multivariate normal density ``(2 pi)^{-n/2} det(C)^{-1/2} exp(-x^T C^{-1} x / 2)``."""
    mat = cov.matrix if isinstance(cov, CovarianceMatrix) else np.atleast_2d(cov)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError as exc:
        raise PositivityError("joint density needs a strictly positive definite covariance") from exc
    y = np.linalg.solve(chol, x)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    n = len(x)
    return float(np.exp(-0.5 * (y @ y) - 0.5 * logdet - 0.5 * n * math.log(2 * math.pi)))


def gamma_orthogonalize(field: GaussianField, generators: Sequence[TestFunction],
                        drop_tol: float = 1e-10) -> list[TestFunction]:
    """Gram-Schmidt (two passes) under ``Gamma_lam``; near-dependent directions are dropped."""
    basis: list[TestFunction] = []
    for g in generators:
        v = g
        norm0 = math.sqrt(max(covariance(field, g, g), 0.0))
        for _ in range(2):
            for b in basis:
                v = v - covariance(field, v, b) * b
        norm = math.sqrt(max(covariance(field, v, v), 0.0))
        if norm < drop_tol * max(1.0, norm0):
            continue
        basis.append(v * (1.0 / norm))
    return basis


def orthogonality_defect(field: GaussianField, functions: Sequence[TestFunction]) -> float:
    """``max_{i != j} |N(f_i + f_j) - N(f_i - f_j)|``: zero iff the ``f_i`` are Gamma-orthogonal."""
    n = field.model
    worst = 0.0
    for i in range(len(functions)):
        for j in range(i + 1, len(functions)):
            a, b = functions[i], functions[j]
            worst = max(worst, abs(n.evaluate(a + b) - n.evaluate(a - b)))
    return worst
