"""Finite surrogate of the Schwartz space: Hermite-coefficient test functions.

A :class:`TestFunction` is either a coefficient vector over the first ``D``
Hermite functions (``kind="hermite"``) or an interval indicator
``1_[0, t]`` (``kind="indicator"``).  Linear structure exists only for the
Hermite form; indicators enter computations through closed-form pairings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import RepresentationError
from .hermite import hermite_functions

DEFAULT_BASIS_SIZE = 32

__all__ = [
    "DEFAULT_BASIS_SIZE",
    "TestFunction",
    "hermite",
    "basis_function",
    "indicator",
    "zero",
    "combine",
    "l2_mu_pairing",
    "random_hermite",
]


@dataclass(frozen=True, eq=False)
class TestFunction:
    kind: str
    coeffs: Optional[np.ndarray] = None
    t: Optional[float] = None

    # keep pytest from collecting this class
    __test__ = False

    def __post_init__(self):
        if self.kind == "hermite":
            c = np.array(self.coeffs)
            if c.ndim != 1 or c.size == 0:
                raise ValueError("Hermite coefficients must be a non-empty 1-D vector")
            if not np.iscomplexobj(c):
                c = c.astype(float)
            c.setflags(write=False)
            object.__setattr__(self, "coeffs", c)
        elif self.kind == "indicator":
            if self.t is None or not self.t > 0:
                raise ValueError("indicator 1_[0,t] needs t > 0")
            object.__setattr__(self, "t", float(self.t))
        else:
            raise ValueError(f"unknown test function kind {self.kind!r}")

    @property
    def is_hermite(self) -> bool:
        return self.kind == "hermite"

    @property
    def size(self) -> int:
        self._require_hermite("size")
        return len(self.coeffs)

    @property
    def is_real(self) -> bool:
        return self.kind == "indicator" or not np.iscomplexobj(self.coeffs) or not np.any(self.coeffs.imag)

    def real_coeffs(self) -> np.ndarray:
        """Coefficients as a real array; complex input is rejected."""
        self._require_hermite("real_coeffs")
        if not self.is_real:
            raise RepresentationError("operation is defined for real test functions only")
        return np.real(self.coeffs).astype(float)

    def _require_hermite(self, what):
        if self.kind != "hermite":
            raise RepresentationError(f"{what} is undefined for indicator test functions")

    def _check_compatible(self, other):
        if not isinstance(other, TestFunction):
            return NotImplemented
        self._require_hermite("linear combination")
        other._require_hermite("linear combination")
        if len(self.coeffs) != len(other.coeffs):
            raise RepresentationError("test functions live on different Hermite bases")
        return None

    def __add__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        return TestFunction("hermite", self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        return TestFunction("hermite", self.coeffs - other.coeffs)

    def __mul__(self, alpha):
        if not np.isscalar(alpha):
            return NotImplemented
        self._require_hermite("scaling")
        return TestFunction("hermite", alpha * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __call__(self, x):
        """Pointwise values; indicators are evaluated as ``1_[0, t]``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "indicator":
            return ((x >= 0) & (x <= self.t)).astype(float)
        return np.tensordot(self.coeffs, hermite_functions(len(self.coeffs), x), axes=1)

    def __repr__(self):
        if self.kind == "indicator":
            return f"TestFunction(indicator, t={self.t})"
        nz = np.flatnonzero(self.coeffs)
        return f"TestFunction(hermite, D={len(self.coeffs)}, nonzero={nz[:6].tolist()})"

    def to_dict(self) -> dict:
        if self.kind == "indicator":
            return {"kind": "indicator", "t": self.t}
        if self.is_real:
            coeffs = [float(c) for c in np.real(self.coeffs)]
        else:
            coeffs = [[float(c.real), float(c.imag)] for c in self.coeffs]
        return {"kind": "hermite", "coeffs": coeffs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "TestFunction":
        kind = data.get("kind")
        if kind == "indicator":
            return cls("indicator", t=float(data["t"]))
        if kind == "hermite":
            raw = data["coeffs"]
            if raw and isinstance(raw[0], (list, tuple)):
                return cls("hermite", np.array([complex(a, b) for a, b in raw]))
            return cls("hermite", np.array(raw, dtype=float))
        raise ValueError(f"unknown test function kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "TestFunction":
        return cls.from_dict(json.loads(text))


def hermite(coeffs) -> TestFunction:
    return TestFunction("hermite", np.asarray(coeffs))


def basis_function(n: int, size: int = DEFAULT_BASIS_SIZE) -> TestFunction:
    """The Hermite function ``xi_n`` (1-based) as a test function on a ``size``-term basis."""
    if not 1 <= n <= size:
        raise ValueError(f"xi_{n} is outside a basis of size {size}")
    c = np.zeros(size)
    c[n - 1] = 1.0
    return TestFunction("hermite", c)


def indicator(t: float) -> TestFunction:
    return TestFunction("indicator", t=t)


def zero(size: int = DEFAULT_BASIS_SIZE) -> TestFunction:
    return TestFunction("hermite", np.zeros(size))


def random_hermite(rng: np.random.Generator, size: int = DEFAULT_BASIS_SIZE,
                   active: Optional[int] = None, scale: float = 1.0) -> TestFunction:
    """Random real test function; only the first ``active`` coefficients are non-zero."""
    active = size if active is None else active
    c = np.zeros(size)
    c[:active] = scale * rng.standard_normal(active) / np.sqrt(active)
    return TestFunction("hermite", c)


def combine(coeffs: Sequence, functions: Sequence[TestFunction]) -> TestFunction:
    """Exact linear combination ``sum_k coeffs[k] functions[k]``."""
    if len(coeffs) != len(functions):
        raise ValueError("need one coefficient per test function")
    if not functions:
        raise ValueError("cannot combine an empty list without a basis size")
    for f in functions:
        if not f.is_hermite:
            raise RepresentationError("combine() accepts Hermite-coefficient test functions only")
    sizes = {len(f.coeffs) for f in functions}
    if len(sizes) != 1:
        raise RepresentationError("test functions live on different Hermite bases")
    stacked = np.stack([f.coeffs for f in functions])
    return TestFunction("hermite", np.asarray(coeffs) @ stacked)


def l2_mu_pairing(mu, s1: TestFunction, s2: TestFunction) -> float:
    """``integral s1(u) s2(u) d mu(u)`` for real test functions.

    Hermite pairs use the measure's Hermite Gram matrix; indicator pairs use
    ``mu([0, min(t1, t2)])``.  Atomic measures are summed exactly for any
    pair of forms.
    """
    if not (s1.is_real and s2.is_real):
        raise RepresentationError("l2_mu_pairing is defined for real test functions only")
    if getattr(mu, "is_atomic", False):
        return float(np.sum(mu.masses * s1(mu.points) * s2(mu.points)))
    if s1.kind == "indicator" and s2.kind == "indicator":
        return float(mu.interval_mass(0.0, min(s1.t, s2.t)))
    if s1.is_hermite and s2.is_hermite:
        if len(s1.coeffs) != len(s2.coeffs):
            raise RepresentationError("test functions live on different Hermite bases")
        gram = mu.hermite_gram(len(s1.coeffs))
        return float(s1.real_coeffs() @ gram @ s2.real_coeffs())
    raise RepresentationError("mixed indicator/Hermite pairings are not supported")
