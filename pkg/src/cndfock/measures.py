"""Tempered spectral measures and the Fourier transform of test functions.

Fourier convention: ``s_hat(t) = integral exp(-i t u) s(u) du`` (no
normalization), so Plancherel reads ``||s_hat||^2 = 2 pi ||s||^2`` and the
Hermite functions are eigenvectors, ``xi_n_hat = sqrt(2 pi) (-i)^(n-1) xi_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError, RepresentationError
from .hermite import (QuadratureRule, gauss_hermite_lebesgue, hermite_functions,
                      power_weight_rule)
from .testfn import TestFunction

__all__ = [
    "SpectralMeasure",
    "Lebesgue",
    "PowerLaw",
    "Atoms",
    "Density",
    "fourier_phases",
    "fourier_transform",
    "integrate_squared",
    "indicator_spectral_pairing",
    "parse_measure",
]

QUAD_RTOL = 1e-9


class SpectralMeasure:
    """A positive tempered measure on the real line.

    Subclasses provide ``quadrature(size)`` (a rule integrating products of
    the first ``size`` Hermite functions against the measure) and
    ``interval_mass(a, b)``.
    """

    is_atomic = False
    symmetric = True

    def quadrature(self, size: int, refined: bool = False):
        raise NotImplementedError

    def interval_mass(self, a: float, b: float) -> float:
        raise NotImplementedError

    def tempered_integral(self) -> float:
        """``integral d mu(u) / (1 + u^2)``, finite for every admissible measure."""
        raise NotImplementedError

    def hermite_gram(self, size: int) -> np.ndarray:
        """Matrix ``integral xi_j xi_k d mu`` for ``1 <= j, k <= size`` (read-only)."""
        return _hermite_gram(self, size)


def _rule_arrays(rule):
    if isinstance(rule, QuadratureRule):
        return rule.nodes, rule.weights
    return rule


@lru_cache(maxsize=64)
def _hermite_gram(mu: SpectralMeasure, size: int) -> np.ndarray:
    nodes, weights = _rule_arrays(mu.quadrature(size))
    vals = hermite_functions(size, nodes)
    gram = (vals * weights) @ vals.T
    gram = 0.5 * (gram + gram.T)
    gram.setflags(write=False)
    return gram


@dataclass(frozen=True)
class Lebesgue(SpectralMeasure):
    def quadrature(self, size, refined=False):
        return gauss_hermite_lebesgue(min(size + (24 if refined else 8), 150))

    def interval_mass(self, a, b):
        return max(0.0, b - a)

    def tempered_integral(self):
        return math.pi

    def describe(self):
        return "lebesgue"


@dataclass(frozen=True)
class PowerLaw(SpectralMeasure):
    """``|u|^(1 - 2H) du`` with Hurst index ``H`` in (0, 1)."""

    H: float

    def __post_init__(self):
        if not 0.0 < self.H < 1.0:
            raise ValueError("PowerLaw needs H in (0, 1) to be tempered")

    @property
    def beta(self) -> float:
        return 1.0 - 2.0 * self.H

    def quadrature(self, size, refined=False):
        upper = math.sqrt(2.0 * size + 1.0) + 12.0
        if refined:
            return power_weight_rule(self.beta, upper, order=30, panel_width=0.2)
        return power_weight_rule(self.beta, upper)

    def interval_mass(self, a, b):
        def prim(x):
            return math.copysign(abs(x) ** (self.beta + 1.0), x) / (self.beta + 1.0)
        return max(0.0, prim(b) - prim(a))

    def tempered_integral(self):
        # integral |u|^beta / (1 + u^2) du = pi / cos(pi beta / 2)
        return math.pi / math.cos(0.5 * math.pi * self.beta)

    def describe(self):
        return f"powerlaw:{self.H}"


@dataclass(frozen=True)
class Atoms(SpectralMeasure):
    """Finite sum of point masses ``sum_k masses[k] delta_{points[k]}``."""

    points: tuple
    masses: tuple

    is_atomic = True

    def __post_init__(self):
        pts = tuple(float(p) for p in np.atleast_1d(self.points))
        ms = tuple(float(m) for m in np.atleast_1d(self.masses))
        if len(pts) != len(ms) or not pts:
            raise ValueError("Atoms needs equally many points and masses (at least one)")
        if any(m <= 0 for m in ms):
            raise ValueError("atom masses must be positive")
        if len(set(pts)) != len(pts):
            raise ValueError("atom points must be distinct")
        order = np.argsort(pts)
        object.__setattr__(self, "points", tuple(pts[i] for i in order))
        object.__setattr__(self, "masses", tuple(ms[i] for i in order))

    @property
    def symmetric(self) -> bool:
        mirror = dict(zip(self.points, self.masses))
        return all(abs(mirror.get(-p, -1.0) - m) <= 1e-14 * m for p, m in mirror.items())

    def quadrature(self, size, refined=False):
        return np.array(self.points), np.array(self.masses)

    def interval_mass(self, a, b):
        return float(sum(m for p, m in zip(self.points, self.masses) if a <= p <= b))

    def tempered_integral(self):
        return float(sum(m / (1 + p * p) for p, m in zip(self.points, self.masses)))

    def describe(self):
        return "atoms:" + ";".join(f"{p}@{m}" for p, m in zip(self.points, self.masses))


@dataclass(frozen=True, eq=False)
class Density(SpectralMeasure):
    """``density(u) du`` integrated with a caller-supplied quadrature rule.

    The rule must resolve the Hermite functions of interest; ``symmetric``
    declares ``density(-u) == density(u)`` (checked on the rule's nodes).
    """

    density: Callable
    rule: QuadratureRule
    symmetric: bool = True
    refined_rule: Optional[QuadratureRule] = field(default=None)

    def __post_init__(self):
        vals = np.asarray(self.density(self.rule.nodes), dtype=float)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("density values must be finite and non-negative")
        if self.symmetric and not np.allclose(self.density(-self.rule.nodes), vals,
                                              rtol=1e-12, atol=0):
            raise ValueError("density declared symmetric but density(-u) != density(u)")
        if not math.isfinite(self.tempered_integral()):
            raise ValueError("density is not tempered")

    def quadrature(self, size, refined=False):
        rule = self.refined_rule if refined and self.refined_rule is not None else self.rule
        return rule.nodes, rule.weights * self.density(rule.nodes)

    def interval_mass(self, a, b):
        if b <= a:
            return 0.0
        return float(integrate.quad(self.density, a, b, limit=200)[0])

    def tempered_integral(self):
        nodes, weights = self.quadrature(0)
        return float(np.sum(weights / (1 + nodes * nodes)))

    def describe(self):
        return "density"


def parse_measure(spec: str, atoms_loader=None) -> SpectralMeasure:
    """Parse ``lebesgue``, ``powerlaw:H`` or ``atoms:FILE`` / ``atoms:p@m;p@m``."""
    spec = spec.strip()
    if spec == "lebesgue":
        return Lebesgue()
    if spec.startswith("powerlaw:"):
        return PowerLaw(float(spec.split(":", 1)[1]))
    if spec.startswith("atoms:"):
        body = spec.split(":", 1)[1]
        if "@" in body:
            pairs = [item.split("@") for item in body.split(";") if item]
            return Atoms(tuple(float(p) for p, _ in pairs), tuple(float(m) for _, m in pairs))
        loader = atoms_loader or _load_atoms_file
        return loader(body)
    raise ValueError(f"unrecognized measure spec {spec!r}")


def _load_atoms_file(path: str) -> Atoms:
    """Two-column text file ``point mass`` (``#`` comments allowed)."""
    data = np.loadtxt(path, ndmin=2, comments="#", delimiter=None)
    return Atoms(tuple(data[:, 0]), tuple(data[:, 1]))


def fourier_phases(size: int) -> np.ndarray:
    """Eigenvalues ``sqrt(2 pi) (-i)^(n-1)`` of the Fourier transform on ``xi_1 .. xi_size``."""
    return math.sqrt(2 * math.pi) * (-1j) ** np.arange(size)


def fourier_transform(s: TestFunction) -> TestFunction:
    """``s_hat`` in Hermite coordinates; the result has complex coefficients."""
    if not s.is_hermite:
        raise RepresentationError("indicator transforms are only available through closed-form pairings")
    return TestFunction("hermite", s.coeffs * fourier_phases(len(s.coeffs)))


def integrate_squared(mu: SpectralMeasure, s: TestFunction) -> float:
    """``integral |s(u)|^2 d mu(u)``.

    Quadrature results are cross-checked against a refined rule; a relative
    disagreement above ``QUAD_RTOL`` raises :class:`QuadratureError`.
    """
    if s.kind == "indicator":
        return float(mu.interval_mass(0.0, s.t))
    if mu.is_atomic:
        pts = np.array(mu.points)
        return float(np.sum(np.array(mu.masses) * np.abs(s(pts)) ** 2))
    size = len(s.coeffs)
    values = []
    for refined in (False, True):
        nodes, weights = _rule_arrays(mu.quadrature(size, refined=refined))
        values.append(float(np.sum(weights * np.abs(s(nodes)) ** 2)))
    err = abs(values[1] - values[0])
    if err > QUAD_RTOL * max(1.0, abs(values[1])):
        raise QuadratureError(f"integrate_squared did not converge (estimate {err:.3g})", err)
    return values[0]


def _indicator_integrand(u, t1, t2):
    """``(e^{i t1 u} - 1)(e^{-i t2 u} - 1) / u^2`` in a cancellation-free form."""
    u = np.asarray(u, dtype=float)
    safe = np.where(u == 0.0, 1.0, u)
    amp = 4.0 * np.sin(0.5 * t1 * safe) * np.sin(0.5 * t2 * safe) / (safe * safe)
    phase = 0.5 * (t1 - t2) * safe
    re = np.where(u == 0.0, t1 * t2, amp * np.cos(phase))
    im = np.where(u == 0.0, 0.0, amp * np.sin(phase))
    return re, im


_QAWF_START = 40.0


@lru_cache(maxsize=256)
def _qawf_cos(beta, x):
    """``integral_x^inf v^(beta-2) cos v dv`` for ``x >= _QAWF_START``."""
    # the Fourier-integral mode honours only the absolute tolerance
    val, _ = integrate.quad(lambda v: v ** (beta - 2.0), x, np.inf, weight="cos", wvar=1.0,
                            limlst=200, epsabs=1e-14)
    return val


@lru_cache(maxsize=256)
def _one_minus_cos_moment(beta, x):
    """``integral_0^x v^(beta-2) (1 - cos v) dv`` (smooth integrand times ``v^beta``)."""
    if x <= 0.0:
        return 0.0
    val, _ = integrate.quad(lambda v: 0.5 * np.sinc(v / (2.0 * math.pi)) ** 2, 0.0, x,
                            weight="alg", wvar=(beta, 0.0), epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def _cos_tail(beta, omega, upper):
    """``integral_upper^inf u^(beta-2) cos(omega u) du`` for ``omega > 0``."""
    x = omega * upper
    scale = omega ** (1.0 - beta)
    if x >= _QAWF_START:
        return scale * _qawf_cos(beta, x)
    # on [x, X]: v^(b-2) cos v = v^(b-2) - v^(b-2) (1 - cos v); the first part is exact
    big = _QAWF_START
    power = (big ** (beta - 1.0) - x ** (beta - 1.0)) / (beta - 1.0)
    smooth = _one_minus_cos_moment(beta, big) - _one_minus_cos_moment(beta, x)
    return scale * (power - smooth + _qawf_cos(beta, big))


def _power_pairing(beta, t2, order, panel_width):
    """``2 integral_0^inf Re[...] u^beta du`` at ``t1 = 1 >= t2`` for the power-law family."""
    upper = 40.0
    rule = power_weight_rule(beta, upper, head=1e-3, knee=1.0, panel_width=panel_width,
                             order=order, symmetric=False)
    re, _ = _indicator_integrand(rule.nodes, 1.0, t2)
    body = float(np.sum(rule.weights * re))
    # tail: integrand = u^(beta-2) (1 - cos u - cos t2 u + cos (1 - t2) u)
    tail = upper ** (beta - 1.0) / (1.0 - beta)
    for sign, omega in ((-1.0, 1.0), (-1.0, t2), (1.0, 1.0 - t2)):
        if omega == 0.0:
            tail += sign * upper ** (beta - 1.0) / (1.0 - beta)
        else:
            tail += sign * _cos_tail(beta, omega, upper)
    return 2.0 * (body + tail)


def indicator_spectral_pairing(mu: SpectralMeasure, t1: float, t2: float) -> float:
    """``integral (e^{i t1 u} - 1)(e^{-i t2 u} - 1) / u^2 d mu(u)`` for ``t1, t2 > 0``.

    This is the covariance of ``1_[0,t1]`` and ``1_[0,t2]`` under the Fourier-type
    model.  Only measures symmetric under ``u -> -u`` are accepted, since the
    value is complex otherwise.
    """
    if not (t1 > 0 and t2 > 0):
        raise ValueError("indicator pairing needs t1, t2 > 0")
    if not mu.symmetric:
        raise RepresentationError("indicator pairing needs a symmetric measure (value would be complex)")
    # evaluate in sorted order so the result is exactly symmetric in (t1, t2)
    t1, t2 = (t1, t2) if t1 >= t2 else (t2, t1)
    if mu.is_atomic:
        re, im = _indicator_integrand(np.array(mu.points), t1, t2)
        masses = np.array(mu.masses)
        imag = float(np.sum(masses * im))
        if abs(imag) > 1e-9:
            raise QuadratureError(f"imaginary part {imag:.3g} exceeds 1e-9", abs(imag))
        return float(np.sum(masses * re))
    if isinstance(mu, (Lebesgue, PowerLaw)):
        beta = 0.0 if isinstance(mu, Lebesgue) else mu.beta
        # homogeneity: I(t1, t2) = t1^(1 - beta) I(1, t2 / t1), so quadrature runs at unit scale
        r = t2 / t1
        coarse = _power_pairing(beta, r, 20, 0.5)
        fine = _power_pairing(beta, r, 30, 0.35)
        err = abs(fine - coarse)
        if err > QUAD_RTOL * max(abs(fine), 1e-300) and err > 1e-13:
            raise QuadratureError(f"indicator pairing did not converge (estimate {err:.3g})", err)
        return fine * t1 ** (1.0 - beta)
    nodes, weights = mu.quadrature(0)
    re, im = _indicator_integrand(nodes, t1, t2)
    imag = float(np.sum(weights * im))
    if abs(imag) > 1e-9:
        raise QuadratureError(f"imaginary part {imag:.3g} exceeds 1e-9", abs(imag))
    return float(np.sum(weights * re))
