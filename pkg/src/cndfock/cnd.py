"""Conditionally negative definite functions N on test functions and their kernels.

Every concrete model is a quadratic form ``N(s) = B(s, s)`` whose bilinear
form ``B`` is stored as a real symmetric matrix over the Hermite basis:

* :class:`L2Type`      ``N(s) = integral |s|^2 d mu``
* :class:`FourierType` ``N(s) = integral |s_hat|^2 d mu``
* :class:`Mixture`     ``u * L2Type + (1 - u) * FourierType``

:class:`CallableModel` wraps an arbitrary function and makes no quadratic
promise; operations that need one call :func:`require_quadratic`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ModelError, RepresentationError
from .measures import (Lebesgue, SpectralMeasure, fourier_phases,
                       indicator_spectral_pairing)
from .reporting import CheckReport, write_csv
from .testfn import TestFunction, random_hermite

PSD_RTOL = 1e-9
CND_TOL = 1e-8


class CndModel:
    is_quadratic = True

    def gram(self, size: int) -> np.ndarray:
        """Matrix of the bilinear form ``B(xi_j, xi_k)``."""
        raise NotImplementedError

    def indicator_pairing(self, t1: float, t2: float) -> float:
        raise RepresentationError(f"{type(self).__name__} has no closed form for indicators")

    def evaluate(self, s: TestFunction) -> float:
        if s.kind == "indicator":
            return float(self.indicator_pairing(s.t, s.t))
        c = s.real_coeffs()
        return float(c @ self.gram(len(c)) @ c)

    def evaluate_complex(self, coeffs) -> complex:
        """Bilinear (not sesquilinear) extension ``N_C(c) = c^T B c`` to complex coefficients."""
        coeffs = np.asarray(coeffs)
        return complex(coeffs @ self.gram(len(coeffs)) @ coeffs)

    def bilinear(self, s1: TestFunction, s2: TestFunction) -> float:
        """The native pairing ``B(s1, s2)``."""
        if s1.kind == "indicator" and s2.kind == "indicator":
            return float(self.indicator_pairing(s1.t, s2.t))
        if not (s1.is_hermite and s2.is_hermite):
            raise RepresentationError("mixed indicator/Hermite pairings are not supported")
        c1, c2 = s1.real_coeffs(), s2.real_coeffs()
        if len(c1) != len(c2):
            raise RepresentationError("test functions live on different Hermite bases")
        return float(c1 @ self.gram(len(c1)) @ c2)


@dataclass(frozen=True)
class L2Type(CndModel):
    mu: SpectralMeasure = field(default_factory=Lebesgue)

    def gram(self, size):
        return self.mu.hermite_gram(size)

    def indicator_pairing(self, t1, t2):
        if self.mu.is_atomic:
            pts, ms = np.array(self.mu.points), np.array(self.mu.masses)
            return float(np.sum(ms * ((pts >= 0) & (pts <= min(t1, t2)))))
        return float(self.mu.interval_mass(0.0, min(t1, t2)))

    def describe(self):
        return f"l2[{self.mu.describe()}]"


@dataclass(frozen=True)
class FourierType(CndModel):
    mu: SpectralMeasure = field(default_factory=Lebesgue)

    def gram(self, size):
        return _fourier_gram(self.mu, size)

    def indicator_pairing(self, t1, t2):
        return indicator_spectral_pairing(self.mu, t1, t2)

    def describe(self):
        return f"fourier[{self.mu.describe()}]"


@lru_cache(maxsize=64)
def _fourier_gram(mu, size):
    # Re <xi_j_hat, xi_k_hat>_mu; the imaginary part cancels in N(s) for real s
    p = fourier_phases(size)
    g = np.real(p[:, None] * mu.hermite_gram(size) * np.conj(p)[None, :])
    g = 0.5 * (g + g.T)
    g.setflags(write=False)
    return g


@dataclass(frozen=True)
class Mixture(CndModel):
    mu: SpectralMeasure = field(default_factory=Lebesgue)
    u: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.u <= 1.0:
            raise ValueError("mixture weight u must lie in [0, 1]")

    def gram(self, size):
        return self.u * L2Type(self.mu).gram(size) + (1 - self.u) * FourierType(self.mu).gram(size)

    def indicator_pairing(self, t1, t2):
        out = 0.0
        if self.u > 0:
            out += self.u * L2Type(self.mu).indicator_pairing(t1, t2)
        if self.u < 1:
            out += (1 - self.u) * FourierType(self.mu).indicator_pairing(t1, t2)
        return out

    def describe(self):
        return f"mixture[{self.mu.describe()},u={self.u}]"


@dataclass(frozen=True, eq=False)
class CallableModel(CndModel):
    """``N`` given as a function of the Hermite coefficient vector."""

    fn: Callable[[np.ndarray], float]
    is_quadratic = False

    def gram(self, size):
        raise ModelError("a callable model has no bilinear form")

    def evaluate(self, s):
        return float(self.fn(s.real_coeffs()))

    def bilinear(self, s1, s2):
        raise ModelError("a callable model has no bilinear form")

    def describe(self):
        return "callable"


def evaluate_N(model: CndModel, s: TestFunction) -> float:
    return model.evaluate(s)


def phi_kernel(model: CndModel, s1: TestFunction, s2: TestFunction) -> float:
    """``(N(s1) + N(s2) - N(s1 - s2)) / 2``."""
    return 0.5 * (model.evaluate(s1) + model.evaluate(s2) - model.evaluate(s1 - s2))


def q_lambda(model: CndModel, lam: float, s: TestFunction) -> float:
    """Characteristic functional ``exp(-lam^2 N(s) / 2)``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return float(np.exp(-0.5 * lam * lam * model.evaluate(s)))


def parallelogram_defect(model: CndModel, s1: TestFunction, s2: TestFunction) -> float:
    lhs = model.evaluate(s1) + model.evaluate(s2)
    rhs = 0.5 * (model.evaluate(s1 + s2) + model.evaluate(s1 - s2))
    return abs(lhs - rhs)


def require_quadratic(model: CndModel, size: int = 8, trials: int = 8, seed: int = 0) -> None:
    """Raise :class:`ModelError` unless ``model`` satisfies the parallelogram law."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        s1, s2 = random_hermite(rng, size), random_hermite(rng, size)
        scale = max(1.0, model.evaluate(s1) + model.evaluate(s2))
        if parallelogram_defect(model, s1, s2) > 1e-9 * scale:
            raise ModelError("model violates the parallelogram law; it is not a quadratic form")
    if not model.is_quadratic:
        raise ModelError("model does not expose a bilinear form")


def _difference_matrix(model, generators):
    n = len(generators)
    out = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            out[j, k] = out[k, j] = model.evaluate(generators[j] - generators[k])
    return out


def check_cnd(model: CndModel, generators: Sequence[TestFunction], trials: int = 100,
              seed: int = 0, tol: float = CND_TOL) -> CheckReport:
    """Probe ``sum_jk c_j conj(c_k) N(s_j - s_k) <= 0`` on random complex ``c`` with ``sum c = 0``.

    Coefficient vectors are normalized to unit length; the report's
    ``max_abs_error`` is the largest positive value seen.
    """
    n = len(generators)
    if n < 2:
        return CheckReport("cnd", 0.0, tol, True, details={"degenerate": True, "trials": 0})
    nmat = _difference_matrix(model, generators)
    rng = np.random.default_rng(seed)
    worst, witness = -np.inf, None
    for _ in range(trials):
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c -= c.mean()
        c /= np.linalg.norm(c)
        val = float(np.real(c @ nmat @ np.conj(c)))
        if val > worst:
            worst, witness = val, c
    violation = max(worst, 0.0)
    return CheckReport.from_error("cnd", violation, tol,
                                  witnesses=[witness] if violation > tol else [],
                                  details={"max_quadratic_form": worst, "trials": trials})


@dataclass
class KernelGram:
    matrix: np.ndarray
    generators: list
    kind: str
    lam: Optional[float] = None
    min_eig: float = 0.0
    spectral_radius: float = 0.0
    passed: bool = True

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def summary(self) -> dict:
        return {"min_eig": self.min_eig, "size": self.size, "kind": self.kind,
                "lambda": self.lam, "spectral_radius": self.spectral_radius,
                "pass": self.passed}

    def to_csv(self, path) -> None:
        header = [""] + [f"g{j}" for j in range(self.size)]
        rows = [[f"g{j}"] + list(row) for j, row in enumerate(self.matrix)]
        write_csv(path, header, rows)


def psd_check(matrix: np.ndarray, rtol: float = PSD_RTOL):
    """Return ``(min_eig, spectral_radius, passed)`` for a symmetric matrix."""
    eig = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
    radius = float(np.max(np.abs(eig))) if eig.size else 0.0
    min_eig = float(eig[0]) if eig.size else 0.0
    return min_eig, radius, min_eig >= -rtol * max(radius, np.finfo(float).tiny)


def check_pd_gram(kind: str, model: CndModel, lam: Optional[float],
                  generators: Sequence[TestFunction], rtol: float = PSD_RTOL) -> KernelGram:
    """Build the ``phi_N`` or ``Q_lambda`` Gram over ``generators`` and test it for PSD."""
    n = len(generators)
    if n < 1:
        raise ValueError("need at least one generator")
    mat = np.zeros((n, n))
    if kind == "phi_N":
        for j in range(n):
            for k in range(j, n):
                mat[j, k] = mat[k, j] = phi_kernel(model, generators[j], generators[k])
    elif kind == "Q_lambda":
        if lam is None:
            raise ValueError("Q_lambda Gram needs lambda")
        for j in range(n):
            mat[j, j] = q_lambda(model, lam, generators[j] - generators[j])
            for k in range(j + 1, n):
                mat[j, k] = mat[k, j] = q_lambda(model, lam, generators[j] - generators[k])
    else:
        raise ValueError(f"unknown Gram kind {kind!r}")
    min_eig, radius, ok = psd_check(mat, rtol)
    return KernelGram(mat, list(generators), kind, lam, min_eig, radius, bool(ok))
