"""Transforms between the Fock space, L2(P_lambda) and the RKHS of Q_lambda.

Elements of L2(P_lambda) are handled as finite sums ``sum_j c_j exp(X_{e_j})``
where ``e_j`` is a complex Hermite-coefficient vector and
``X_{a + ib} = X_a + i X_b``.  Every inner product then has the closed form

    E[exp(X_e)] = exp(Gamma_C(e, e) / 2),

with ``Gamma_C`` the bilinear (not sesquilinear) extension of the
covariance.  Monte Carlo is used only as an independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .cnd import require_quadratic
from .errors import ModelError, RepresentationError
from .fock import (exponential_inner_tail, exponential_vector,
                   fock_space, multiplication_operator)
from .gaussian import GaussianField, covariance_matrix, sample_normal
from .reporting import CheckReport
from .testfn import TestFunction

SQRT2 = math.sqrt(2.0)


def _coeffs(s) -> np.ndarray:
    if isinstance(s, TestFunction):
        if not s.is_hermite:
            raise RepresentationError("transforms act on Hermite-coefficient test functions")
        return np.asarray(s.coeffs)
    return np.asarray(s)


def complex_covariance(field: GaussianField, e1, e2) -> complex:
    """``lam^2 B_C(e1, e2)`` for complex coefficient vectors (bilinear in both)."""
    e1, e2 = _coeffs(e1), _coeffs(e2)
    return complex(field.lam ** 2 * (e1 @ field.model.gram(len(e1)) @ e2))


def _mgf(field, e) -> complex:
    """``E[exp(X_e)]`` for a complex coefficient vector ``e``."""
    return complex(np.exp(0.5 * complex_covariance(field, e, e)))


@dataclass
class L2Element:
    """``sum_j coefs[j] * exp(X_{exponents[j]})`` in L2(P_lambda)."""

    field: GaussianField
    coefs: list
    exponents: list

    def __post_init__(self):
        self.coefs = [complex(c) for c in self.coefs]
        self.exponents = [np.asarray(e, dtype=complex) for e in self.exponents]
        if len(self.coefs) != len(self.exponents):
            raise ValueError("need one coefficient per exponent")

    @classmethod
    def exponential(cls, field, z, s, coef=1.0) -> "L2Element":
        return cls(field, [coef], [complex(z) * _coeffs(s)])

    def __add__(self, other: "L2Element") -> "L2Element":
        return L2Element(self.field, self.coefs + other.coefs, self.exponents + other.exponents)

    def __rmul__(self, c):
        return L2Element(self.field, [c * a for a in self.coefs], list(self.exponents))

    def expectation(self) -> complex:
        return sum(c * _mgf(self.field, e) for c, e in zip(self.coefs, self.exponents))

    def inner(self, other: "L2Element") -> complex:
        """``<self, other> = E[self * conj(other)]``."""
        total = 0j
        for c1, e1 in zip(self.coefs, self.exponents):
            for c2, e2 in zip(other.coefs, other.exponents):
                total += c1 * np.conj(c2) * _mgf(self.field, e1 + np.conj(e2))
        return complex(total)

    def norm2(self) -> float:
        return float(self.inner(self).real)

    def evaluate(self, samples: np.ndarray, directions: np.ndarray) -> np.ndarray:
        """Values on sampled paths, given ``samples[:, k] = X_{directions[k]}``."""
        coords = _decompose(self.exponents, directions)
        out = np.zeros(samples.shape[0], dtype=complex)
        for c, (re, im) in zip(self.coefs, coords):
            out += c * np.exp(samples @ re + 1j * (samples @ im))
        return out


def _decompose(exponents, directions):
    """Express real and imaginary parts of each exponent in the span of ``directions``."""
    dirs = np.asarray(directions, dtype=float)
    out = []
    for e in exponents:
        re, *_ = np.linalg.lstsq(dirs.T, e.real, rcond=None)
        im, *_ = np.linalg.lstsq(dirs.T, e.imag, rcond=None)
        out.append((re, im))
    return out


def mc_inner(f: L2Element, g: L2Element, count: int, seed: int):
    """Monte Carlo estimate of ``<f, g>`` and its standard error."""
    vecs = [v for e in f.exponents + g.exponents for v in (e.real, e.imag) if np.any(v)]
    if not vecs:
        return complex(f.inner(g)), 0.0
    # orthonormal (Euclidean) directions spanning every exponent
    q, r = np.linalg.qr(np.array(vecs).T)
    keep = np.abs(np.diag(r)) > 1e-12 * np.abs(np.diag(r)).max()
    directions = q[:, keep].T
    gram = f.field.model.gram(directions.shape[1])
    cov = f.field.lam ** 2 * directions @ gram @ directions.T
    x = sample_normal(cov, count, seed)
    vals = f.evaluate(x, directions) * np.conj(g.evaluate(x, directions))
    est = complex(vals.mean())
    se = float(np.sqrt(vals.real.var(ddof=1) + vals.imag.var(ddof=1)) / math.sqrt(count))
    return est, se


def w_lambda(s: TestFunction, field: GaussianField) -> L2Element:
    """Image of ``eps(phi_s)`` under the series map: ``exp(X_s / sqrt 2)``."""
    if not s.is_real:
        raise RepresentationError("w_lambda needs a real test function")
    return L2Element.exponential(field, 1.0 / SQRT2, s)


def w_wick(s: TestFunction, field: GaussianField) -> L2Element:
    """Wick exponential ``exp(X_s - lam^2 N(s) / 2)``."""
    if not s.is_real:
        raise RepresentationError("w_wick needs a real test function")
    require_quadratic(field.model)
    return L2Element.exponential(field, 1.0, s, coef=math.exp(-0.5 * field.variance(s)))


def t_lambda(f: L2Element, probe) -> complex:
    """Generalized Fourier transform ``(T_lam F)(probe) = E[F exp(i X_probe)]``."""
    p = 1j * _coeffs(probe)
    return complex(sum(c * _mgf(f.field, e + p) for c, e in zip(f.coefs, f.exponents)))


def t_lambda_on_exponential(z: complex, s, probe, field: GaussianField) -> complex:
    return t_lambda(L2Element.exponential(field, z, s), probe)


def q_kernel(field: GaussianField, center, probe) -> complex:
    """``Q_{lam, center}(probe) = exp(-lam^2 N_C(center - probe) / 2)``."""
    d = _coeffs(center) - _coeffs(probe)
    return complex(np.exp(-0.5 * field.lam ** 2 * field.model.evaluate_complex(d)))


def t_adjoint_isometry_gram(centers: Sequence[TestFunction], field: GaussianField,
                            tol: float = 1e-12, mc_count: int = 0, seed: int = 0,
                            n_se: float = 4.0) -> CheckReport:
    """Compare ``<exp(i X_sj), exp(i X_sk)>_{L2}`` with ``Q_lam(s_j - s_k)``.

    With ``mc_count > 0`` the (0, 1) entry (or (0, 0) for a single center)
    is also estimated by Monte Carlo and required to lie within ``n_se``
    standard errors.
    """
    n = len(centers)
    elems = [L2Element.exponential(field, 1j, s) for s in centers]
    g1 = np.array([[elems[j].inner(elems[k]) for k in range(n)] for j in range(n)])
    g2 = np.array([[q_kernel(field, centers[j], centers[k]) for k in range(n)] for j in range(n)])
    err = float(np.max(np.abs(g1 - g2)))
    report = CheckReport.from_error("t_adjoint_isometry", err, tol)
    eig = np.linalg.eigvalsh(0.5 * (g1 + g1.conj().T))
    report.details = {"G1": g1, "G2": g2, "min_eig_G1": float(eig[0])}
    if mc_count:
        j, k = (0, 1) if n > 1 else (0, 0)
        est, se = mc_inner(elems[j], elems[k], mc_count, seed)
        z = abs(est - g1[j, k]) / se if se > 0 else 0.0
        report.details.update({"mc_entry": [j, k], "mc_estimate": est, "mc_se": se, "mc_z": z})
        report.passed = report.passed and z <= n_se
    return report


@dataclass
class TwoSided:
    left: complex
    right: complex

    @property
    def error(self) -> float:
        return abs(self.left - self.right)

    @property
    def value(self) -> complex:
        return self.left


def r_lambda(s: TestFunction, probe: TestFunction, field: GaussianField) -> TwoSided:
    """``R_lam = T_lam o W_lam`` on ``eps(phi_s)``, evaluated two ways.

    ``left`` transforms ``exp(X_s / sqrt 2)``; ``right`` is the kernel
    ``Q_{lam, i s / sqrt 2}(probe)`` from the complexified ``N``.
    """
    if not (s.is_real and probe.is_real):
        raise RepresentationError("r_lambda takes real test functions")
    try:
        require_quadratic(field.model)
    except ModelError as exc:
        raise ModelError("r_lambda needs a quadratic model (complex extension undefined)") from exc
    left = t_lambda_on_exponential(1.0 / SQRT2, s, probe, field)
    # N_C(a + ib) = N(a) - N(b) + 2i B(a, b) with a = probe, b = -s / sqrt 2
    model = field.model
    b = s * (-1.0 / SQRT2)
    n_c = model.evaluate(probe) - model.evaluate(b) + 2j * model.bilinear(probe, b)
    right = complex(np.exp(-0.5 * field.lam ** 2 * n_c))
    return TwoSided(left, right)


def one_particle_coordinates(field: GaussianField, generators: Sequence[TestFunction]) -> np.ndarray:
    """Coordinates of ``phi_{s_j}`` in an orthonormal basis of their span in H_lambda.

    Row ``j`` is ``phi_{s_j}``; rows reproduce the covariance Gram exactly.
    """
    cov = covariance_matrix(field, generators).matrix
    w, v = np.linalg.eigh(cov)
    keep = w > 1e-12 * max(w.max(), 1e-300)
    return v[:, keep] * np.sqrt(w[keep])


def norm_identity_error(s: TestFunction, field: GaussianField) -> float:
    """Relative gap between ``||exp(X_s / sqrt 2)||^2`` and ``exp(lam^2 N(s))``."""
    exact = math.exp(field.variance(s))
    return abs(w_lambda(s, field).norm2() - exact) / exact


def wick_fock_gram(generators: Sequence[TestFunction], field: GaussianField,
                   degree: int = 20, tol: float = 1e-8) -> CheckReport:
    """Gram of Wick exponentials against the truncated exponential-vector Gram."""
    n = len(generators)
    wick = [w_wick(s, field) for s in generators]
    g_wick = np.array([[wick[j].inner(wick[k]) for k in range(n)] for j in range(n)])
    coords = one_particle_coordinates(field, generators)
    vecs = [exponential_vector(coords[j], degree) for j in range(n)]
    g_fock = np.array([[vecs[j].vector.inner(vecs[k].vector) for k in range(n)] for j in range(n)])
    tails = np.array([[exponential_inner_tail(coords[j], coords[k], degree) for k in range(n)]
                      for j in range(n)])
    err = float(np.max(np.abs(g_wick - g_fock)))
    return CheckReport.from_error("wick_isometry", err, tol,
                                  details={"max_tail_bound": float(tails.max()),
                                           "G_wick": g_wick, "G_fock": g_fock})


def series_cross_gap(generators: Sequence[TestFunction], field: GaussianField) -> dict:
    """Compare the Gram of ``exp(X_s / sqrt 2)`` with ``exp(Gamma_lam(s_j, s_k))``.

    Diagonals agree; off-diagonal entries generally do not.  Returned as a
    record of the discrepancy rather than an assertion.
    """
    n = len(generators)
    elems = [w_lambda(s, field) for s in generators]
    g_w = np.array([[elems[j].inner(elems[k]).real for k in range(n)] for j in range(n)])
    cov = covariance_matrix(field, generators).matrix
    g_eps = np.exp(cov)
    off = ~np.eye(n, dtype=bool)
    return {
        "diagonal_gap": float(np.max(np.abs(np.diag(g_w) - np.diag(g_eps)))),
        "offdiagonal_gap": float(np.max(np.abs(g_w - g_eps)[off])) if n > 1 else 0.0,
        "G_series": g_w,
        "G_exponential": g_eps,
    }


def intertwining_check(h, degree: int, field: Optional[GaussianField] = None,
                       modes: Optional[Sequence[TestFunction]] = None,
                       tol: float = 1e-10) -> CheckReport:
    """Compare multiplication by ``X_h`` with ``a(h) + a*(h)`` and with ``a*(h)`` alone.

    ``h`` holds coordinates with respect to Gamma-orthonormal modes; when
    ``modes`` are given their orthonormality under ``field`` is verified.
    Distances are Frobenius norms over basis columns of degree ``<= K - 1``.
    """
    h = np.asarray(h, dtype=float)
    if modes is not None:
        if field is None:
            raise ValueError("checking mode orthonormality needs the field")
        if len(modes) != len(h):
            raise ValueError("need one mode per coordinate of h")
        cov = covariance_matrix(field, modes).matrix
        if np.max(np.abs(cov - np.eye(len(h)))) > 1e-8:
            raise ValueError("modes are not Gamma-orthonormal")
    space = fock_space(len(h), degree)
    mult = multiplication_operator(h, degree)
    a = space.annihilation_vec(h)
    c = space.creation_vec(h)
    cols = np.flatnonzero(space.interior())

    def dist(mat):
        return float(splinalg.norm(sparse.csc_matrix(mat)[:, cols]))

    d_sum = dist(mult - (a + c))
    d_create = dist(mult - c)
    a_norm = dist(a)
    vac = space.vacuum().amps
    vacuum_gap = float(np.linalg.norm(mult @ vac - c @ vac))
    return CheckReport.from_error(
        "intertwining", d_sum, tol,
        details={"dist_mult_vs_a_plus_astar": d_sum, "dist_mult_vs_astar": d_create,
                 "norm_a_interior": a_norm, "vacuum_gap": vacuum_gap,
                 "lambda": field.lam if field is not None else None})

