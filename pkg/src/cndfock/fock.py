"""Truncated symmetric Fock space over a d-mode one-particle space.

Basis vectors ``E_alpha`` are indexed by multi-indices ``alpha`` with
``|alpha| <= K``.  Operators are scipy sparse matrices on that basis; the
truncation edge is explicit: creation on a degree-``K`` vector leaves the
space, and the norm of what falls off is reported rather than dropped
silently.
"""
from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .hermite import multiplication_matrix

DEFAULT_MODES = 6
DEFAULT_DEGREE = 10
MAX_EXACT_DEGREE = 30


class FockSpace:
    def __init__(self, modes: int = DEFAULT_MODES, degree: int = DEFAULT_DEGREE):
        if modes < 1 or degree < 0:
            raise ValueError("need modes >= 1 and degree >= 0")
        if degree > MAX_EXACT_DEGREE:
            raise ValueError(f"degree above {MAX_EXACT_DEGREE} loses exact alpha! arithmetic")
        self.modes = modes
        self.degree = degree
        rows = []
        for n in range(degree + 1):
            for combo in itertools.combinations_with_replacement(range(modes), n):
                rows.append(np.bincount(np.array(combo, dtype=int), minlength=modes))
        self.alphas = np.array(rows, dtype=np.int64).reshape(-1, modes)
        self.alphas.setflags(write=False)
        self.degrees = self.alphas.sum(axis=1)
        self.index = {tuple(a): i for i, a in enumerate(self.alphas.tolist())}

    def __len__(self):
        return len(self.alphas)

    def __repr__(self):
        return f"FockSpace(modes={self.modes}, degree={self.degree}, dim={len(self)})"

    def __eq__(self, other):
        return isinstance(other, FockSpace) and (self.modes, self.degree) == (other.modes, other.degree)

    def __hash__(self):
        return hash((self.modes, self.degree))

    @cached_property
    def alpha_factorials(self) -> list[int]:
        """Exact ``alpha! = prod_j alpha_j!`` per basis vector."""
        fact = [math.factorial(k) for k in range(self.degree + 1)]
        return [math.prod(fact[a] for a in row) for row in self.alphas.tolist()]

    @cached_property
    def sqrt_alpha_factorials(self) -> np.ndarray:
        return np.sqrt(np.array(self.alpha_factorials, dtype=float))

    def position(self, alpha) -> int:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) < self.modes:
            alpha = alpha + (0,) * (self.modes - len(alpha))
        try:
            return self.index[alpha]
        except KeyError:
            raise KeyError(f"multi-index {alpha} is outside {self}") from None

    def interior(self) -> np.ndarray:
        """Mask of basis vectors with degree ``<= K - 1``."""
        return self.degrees <= self.degree - 1

    def vacuum(self) -> "FockVector":
        return self.basis_vector((0,) * self.modes)

    def basis_vector(self, alpha) -> "FockVector":
        amps = np.zeros(len(self), dtype=complex)
        amps[self.position(alpha)] = 1.0
        return FockVector(self, amps)

    def zero(self) -> "FockVector":
        return FockVector(self, np.zeros(len(self), dtype=complex))

    def _check_mode(self, j):
        if not 1 <= j <= self.modes:
            raise IndexError(f"mode {j} is outside 1..{self.modes}")

    def annihilation(self, j: int) -> sparse.csr_matrix:
        """``A_j E_alpha = sqrt(alpha_j) E_{alpha - 1_j}`` (modes are 1-based)."""
        self._check_mode(j)
        return _annihilation(self, j)

    def creation(self, j: int) -> sparse.csr_matrix:
        """``A_j^* E_alpha = sqrt(alpha_j + 1) E_{alpha + 1_j}``, zero on degree ``K``."""
        self._check_mode(j)
        return _annihilation(self, j).T.tocsr()

    def annihilation_vec(self, h) -> sparse.csr_matrix:
        """``a(h) = sum_j conj(h_j) A_j`` (conjugate-linear in ``h``)."""
        h = self._one_particle(h)
        return sum((np.conj(h[j]) * self.annihilation(j + 1) for j in range(self.modes)),
                   sparse.csr_matrix((len(self), len(self)), dtype=complex))

    def creation_vec(self, h) -> sparse.csr_matrix:
        """``a*(h) = sum_j h_j A_j^*``."""
        h = self._one_particle(h)
        return sum((h[j] * self.creation(j + 1) for j in range(self.modes)),
                   sparse.csr_matrix((len(self), len(self)), dtype=complex))

    def _one_particle(self, h) -> np.ndarray:
        h = np.asarray(h, dtype=complex)
        if h.shape != (self.modes,):
            raise ValueError(f"one-particle vector must have {self.modes} components")
        return h

    def identity(self) -> sparse.csr_matrix:
        return sparse.identity(len(self), dtype=complex, format="csr")


@lru_cache(maxsize=None)
def fock_space(modes: int = DEFAULT_MODES, degree: int = DEFAULT_DEGREE) -> FockSpace:
    return FockSpace(modes, degree)


@lru_cache(maxsize=None)
def _annihilation(space: FockSpace, j: int) -> sparse.csr_matrix:
    col = j - 1
    src = np.flatnonzero(space.alphas[:, col] > 0)
    lowered = space.alphas[src].copy()
    lowered[:, col] -= 1
    dst = np.array([space.index[tuple(a)] for a in lowered.tolist()], dtype=np.int64)
    vals = np.sqrt(space.alphas[src, col].astype(float))
    n = len(space)
    mat = sparse.csr_matrix((vals, (dst, src)), shape=(n, n))
    return mat


@dataclass
class FockVector:
    """Amplitudes in the orthonormal ``E_alpha`` basis of a truncated Fock space.

    ``dropped_norm`` records the norm that an operator pushed past degree ``K``.
    """

    space: FockSpace
    amps: np.ndarray
    dropped_norm: float = 0.0

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (len(self.space),):
            raise ValueError("amplitude vector does not match the Fock space dimension")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "FockVector") -> complex:
        """``<self, other>``, conjugate-linear in ``self``."""
        _check_same_space(self.space, other.space)
        return complex(np.vdot(self.amps, other.amps))

    def amplitude(self, alpha) -> complex:
        return complex(self.amps[self.space.position(alpha)])

    def degree_component_norms(self) -> np.ndarray:
        out = np.zeros(self.space.degree + 1)
        np.add.at(out, self.space.degrees, np.abs(self.amps) ** 2)
        return np.sqrt(out)

    def __add__(self, other):
        _check_same_space(self.space, other.space)
        return FockVector(self.space, self.amps + other.amps)

    def __sub__(self, other):
        _check_same_space(self.space, other.space)
        return FockVector(self.space, self.amps - other.amps)

    def __mul__(self, c):
        return FockVector(self.space, c * self.amps)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        nz = np.flatnonzero(self.amps)
        return {
            "trunc": {"d": self.space.modes, "K": self.space.degree},
            "amps": [{"alpha": self.space.alphas[i].tolist(), "re": float(self.amps[i].real),
                      "im": float(self.amps[i].imag)} for i in nz],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "FockVector":
        space = fock_space(int(data["trunc"]["d"]), int(data["trunc"]["K"]))
        amps = np.zeros(len(space), dtype=complex)
        for entry in data["amps"]:
            amps[space.position(entry["alpha"])] = complex(entry["re"], entry["im"])
        return cls(space, amps)

    @classmethod
    def from_json(cls, text: str) -> "FockVector":
        return cls.from_dict(json.loads(text))


def _check_same_space(a: FockSpace, b: FockSpace):
    if a != b:
        raise ValueError(f"incompatible truncations {a} and {b}")


@dataclass(frozen=True, eq=False)
class CcrOperator:
    """A (possibly lambda-scaled) annihilation or creation operator.

    ``kind`` is one of ``annihilate``, ``create``, ``annihilate_vec``,
    ``create_vec``; ``lam`` scales annihilators by ``lam`` and creators by
    ``1 / lam``.
    """

    kind: str
    space: FockSpace
    mode: Optional[int] = None
    h: Optional[np.ndarray] = None
    lam: float = 1.0
    matrix: sparse.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        sp = self.space
        if self.kind == "annihilate":
            mat = self.lam * sp.annihilation(self.mode)
        elif self.kind == "create":
            mat = sp.creation(self.mode) / self.lam
        elif self.kind == "annihilate_vec":
            mat = self.lam * sp.annihilation_vec(self.h)
        elif self.kind == "create_vec":
            mat = sp.creation_vec(self.h) / self.lam
        else:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "matrix", sparse.csr_matrix(mat, dtype=complex))

    @property
    def is_creation(self) -> bool:
        return self.kind.startswith("create")

    def one_particle(self) -> np.ndarray:
        if self.h is not None:
            return np.asarray(self.h, dtype=complex)
        e = np.zeros(self.space.modes, dtype=complex)
        e[self.mode - 1] = 1.0
        return e


def annihilate(space, j, lam=1.0):
    return CcrOperator("annihilate", space, mode=j, lam=lam)


def create(space, j, lam=1.0):
    return CcrOperator("create", space, mode=j, lam=lam)


def annihilate_vec(space, h, lam=1.0):
    return CcrOperator("annihilate_vec", space, h=np.asarray(h, dtype=complex), lam=lam)


def create_vec(space, h, lam=1.0):
    return CcrOperator("create_vec", space, h=np.asarray(h, dtype=complex), lam=lam)


def _overflow_norm(space: FockSpace, h, v_amps, scale=1.0) -> float:
    """Norm of ``a*(h) w`` in the untruncated space, ``w`` = degree-K part of ``v``.

    Uses ``||a*(h) w||^2 = ||h||^2 ||w||^2 + ||a(h) w||^2``.
    """
    edge = space.degrees == space.degree
    if not np.any(v_amps[edge]):
        return 0.0
    w = np.where(edge, v_amps, 0.0)
    aw = space.annihilation_vec(h) @ w
    h2 = float(np.vdot(h, h).real)
    return abs(scale) * math.sqrt(h2 * float(np.vdot(w, w).real) + float(np.vdot(aw, aw).real))


def apply(op: CcrOperator, v: FockVector) -> FockVector:
    _check_same_space(op.space, v.space)
    out = FockVector(v.space, op.matrix @ v.amps)
    if op.is_creation:
        out.dropped_norm = _overflow_norm(v.space, op.one_particle(), v.amps, 1.0 / op.lam)
    return out


def _inner(h, g) -> complex:
    return complex(np.vdot(np.asarray(h, dtype=complex), np.asarray(g, dtype=complex)))


def _column_norms(mat) -> np.ndarray:
    mat = sparse.csc_matrix(mat)
    return np.sqrt(np.asarray(abs(mat).power(2).sum(axis=0)).ravel())


def commutator_profile(h, g, degree: int, lam: float = 1.0, kind: str = "mixed") -> np.ndarray:
    """Per-degree ``max_alpha ||C E_alpha||`` for the commutator defect ``C``.

    ``kind="mixed"``: ``C = [a_lam(h), a*_lam(g)] - <h, g> I``.
    ``kind="annihilators"``: ``C = [a_lam(h), a_lam(g)]``.
    """
    h = np.asarray(h, dtype=complex)
    space = fock_space(len(h), degree)
    a_h = lam * space.annihilation_vec(h)
    if kind == "mixed":
        b = space.creation_vec(g) / lam
        c = a_h @ b - b @ a_h - _inner(h, g) * space.identity()
    elif kind == "annihilators":
        b = lam * space.annihilation_vec(g)
        c = a_h @ b - b @ a_h
    else:
        raise ValueError(f"unknown commutator kind {kind!r}")
    norms = _column_norms(c)
    out = np.zeros(degree + 1)
    np.maximum.at(out, space.degrees, norms)
    return out


def commutator_defect(h, g, degree: int, lam: float = 1.0, kind: str = "mixed") -> float:
    """Largest CCR defect over basis vectors of degree ``<= K - 1``.

    At degree ``K`` the mixed commutator is expected to fail, because
    creation leaves the truncated space; see :func:`commutator_profile`.
    """
    profile = commutator_profile(h, g, degree, lam, kind)
    if kind == "annihilators":
        return float(profile.max())
    return float(profile[:degree].max()) if degree > 0 else 0.0


@dataclass
class AdjointnessReport:
    lam: float
    obstruction_norm: float
    creation_norm: float
    predicted: float

    @property
    def error(self) -> float:
        return abs(self.obstruction_norm - self.predicted)


def adjointness_obstruction(h, degree: int, lam: float) -> AdjointnessReport:
    """Frobenius norm of ``a_lam(h)^dagger - a*_lam(h)`` on the truncation.

    Equals ``|lam - 1/lam| * ||a*(h)||_F``; it vanishes only for ``lam = 1``.
    """
    space = fock_space(len(h), degree)
    a_lam = lam * space.annihilation_vec(h)
    c_lam = space.creation_vec(h) / lam
    diff = a_lam.conj().T - c_lam
    cnorm = splinalg.norm(space.creation_vec(h))
    return AdjointnessReport(lam, float(splinalg.norm(diff)), float(cnorm),
                             abs(lam - 1.0 / lam) * float(cnorm))


def exp_tail_bound(x: float, degree: int) -> float:
    """``sum_{n > degree} x^n / n!`` for ``x >= 0``, summed term by term."""
    total, term, n = 0.0, 1.0, 0
    for n in range(1, degree + 1):
        term *= x / n
    n = degree
    while True:
        n += 1
        term *= x / n
        total += term
        if term <= 1e-17 * max(total, 1e-300) or term == 0.0:
            return total


@dataclass
class ExponentialVector:
    vector: FockVector
    tail_bound: float


def exponential_vector(h, degree: int) -> ExponentialVector:
    """Truncated ``eps(h) = sum_alpha h^alpha / sqrt(alpha!) E_alpha``.

    ``tail_bound`` is ``sum_{n > K} ||h||^{2n} / n!``, the squared norm lost to
    the truncation.
    """
    h = np.asarray(h, dtype=complex)
    space = fock_space(len(h), degree)
    h2 = float(np.vdot(h, h).real)
    if h2 > degree / 3:
        warnings.warn(f"||h||^2 = {h2:.3g} > K/3; exponential-vector tail is not negligible",
                      RuntimeWarning, stacklevel=2)
    # h^alpha from a table of powers h_j^k, one lookup per mode
    powers = h[:, None] ** np.arange(degree + 1)[None, :]
    amps = np.ones(len(space), dtype=complex)
    for j in range(len(h)):
        amps *= powers[j, space.alphas[:, j]]
    amps /= space.sqrt_alpha_factorials
    return ExponentialVector(FockVector(space, amps), exp_tail_bound(h2, degree))


def exponential_inner_tail(h1, h2, degree: int) -> float:
    """Bound on ``|<eps(h1), eps(h2)> - <eps(h1), eps(h2)>_K|``."""
    return exp_tail_bound(float(np.linalg.norm(h1) * np.linalg.norm(h2)), degree)


def second_quantization(lam: float, v: FockVector) -> FockVector:
    """``Gamma(lam I)``: scale the degree-n component by ``lam^n`` (contractions only)."""
    if not 0 < lam <= 1:
        raise ValueError("second quantization of lam * I needs 0 < lam <= 1 (a contraction)")
    return FockVector(v.space, v.amps * lam ** v.space.degrees.astype(float))


def second_quantization_norm(space: FockSpace, lam: float) -> float:
    """Operator norm of ``Gamma(lam I)`` on the truncation (it is diagonal)."""
    return float(np.max(np.abs(lam ** space.degrees.astype(float))))


def chaos_multiply(h, v: FockVector) -> FockVector:
    """Multiplication by ``X_h`` in chaos coordinates: ``(a(h) + a*(h)) v``."""
    h = np.asarray(h, dtype=complex)
    sp = v.space
    out = FockVector(sp, sp.annihilation_vec(h) @ v.amps + sp.creation_vec(h) @ v.amps)
    out.dropped_norm = _overflow_norm(sp, h, v.amps)
    return out


def multiplication_operator(h, degree: int) -> sparse.csr_matrix:
    """Multiplication by ``sum_j h_j x_j`` on the truncated chaos basis, built from quadrature.

    Each mode acts through the one-variable matrix of ``x`` in the basis
    ``h_n / sqrt(n!)`` of L^2(standard normal), computed independently of the
    ladder operators.
    """
    h = np.asarray(h, dtype=float)
    space = fock_space(len(h), degree)
    xmat = multiplication_matrix(degree)
    rows, cols, vals = [], [], []
    alphas = space.alphas.tolist()
    for src, alpha in enumerate(alphas):
        for j, hj in enumerate(h):
            if hj == 0.0:
                continue
            n = alpha[j]
            for m in range(degree + 1):
                coef = xmat[m, n]
                if coef == 0.0:
                    continue
                target = list(alpha)
                target[j] = m
                dst = space.index.get(tuple(target))
                if dst is None:
                    continue
                rows.append(dst)
                cols.append(src)
                vals.append(hj * coef)
    n = len(space)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def commutator_suite(modes: int, degree: int, lams=(1.0,), seed: int = 0, pairs: int = 3) -> dict:
    """Worst CCR defects over basis pairs and random one-particle vectors."""
    rng = np.random.default_rng(seed)
    eye = np.eye(modes)
    vecs = [eye[j] for j in range(modes)]
    for _ in range(pairs):
        v = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
        vecs.append(v / np.linalg.norm(v))
    out = {}
    for lam in lams:
        mixed = annih = 0.0
        for i, h in enumerate(vecs):
            for g in vecs[i:i + 2]:
                mixed = max(mixed, commutator_defect(h, g, degree, lam))
                annih = max(annih, commutator_defect(h, g, degree, lam, kind="annihilators"))
        out[lam] = {"mixed": mixed, "annihilators": annih}
    return out
