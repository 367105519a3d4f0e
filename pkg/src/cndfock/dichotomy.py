"""Equivalence versus mutual singularity of centered Gaussian measures.

Two centered Gaussian measures with covariances ``Gamma`` and
``sum_k beta_k g_k g_k`` (``{g_k}`` orthonormal, or a Parseval frame, in
H(Gamma)) are equivalent iff every ``beta_k > 0`` and
``sum_k (1 - beta_k^2) < inf``; otherwise they are mutually singular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cnd import L2Type, Mixture
from .errors import PositivityError
from .gaussian import GaussianField, covariance_matrix, gamma_orthogonalize, sample_normal
from .hermite import hermite_functions
from .measures import Atoms, fourier_phases
from .testfn import basis_function

EQUIVALENT = "equivalent"
SINGULAR = "singular"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class BetaSequence:
    """A sequence ``beta_k > 0``, either in closed form or as raw terms.

    Closed forms (``kind``):

    * ``constant``  ``beta_k = value``
    * ``geometric`` ``beta_k = sqrt(1 - ratio^k)``, ``0 < ratio < 1``
    * ``power``     ``beta_k = sqrt(1 - (k + 1)^(-exponent))``, ``exponent > 0``
    * ``array``     the given ``terms``; no closed form
    """

    kind: str
    value: float = 1.0
    ratio: float = 0.5
    exponent: float = 2.0
    terms: tuple = ()

    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def geometric(cls, ratio):
        if not 0 < ratio < 1:
            raise ValueError("geometric gap needs 0 < ratio < 1")
        return cls("geometric", ratio=float(ratio))

    @classmethod
    def power(cls, exponent):
        if not exponent > 0:
            raise ValueError("power gap needs exponent > 0")
        return cls("power", exponent=float(exponent))

    @classmethod
    def from_array(cls, terms):
        return cls("array", terms=tuple(float(t) for t in terms))

    def head(self, horizon: int) -> np.ndarray:
        k = np.arange(1, horizon + 1, dtype=float)
        if self.kind == "constant":
            return np.full(horizon, self.value)
        if self.kind == "geometric":
            return np.sqrt(1.0 - self.ratio ** k)
        if self.kind == "power":
            return np.sqrt(1.0 - (k + 1.0) ** -self.exponent)
        if self.kind == "array":
            return np.array(self.terms[:horizon])
        raise ValueError(f"unknown beta sequence kind {self.kind!r}")

    def all_positive(self) -> Optional[bool]:
        if self.kind == "constant":
            return self.value > 0
        if self.kind in ("geometric", "power"):
            return True
        return None

    def gap_summable(self) -> Optional[bool]:
        """Whether ``sum (1 - beta_k^2)`` converges; ``None`` without a closed form."""
        if self.kind == "constant":
            return self.value ** 2 == 1.0
        if self.kind == "geometric":
            return True
        if self.kind == "power":
            return self.exponent > 1.0
        return None


@dataclass
class DichotomyVerdict:
    verdict: str
    partial_sum: float
    horizon: int
    trend: Optional[float] = None
    reason: str = ""

    def to_dict(self):
        return {"verdict": self.verdict, "partial_sum": self.partial_sum,
                "horizon": self.horizon, "trend": self.trend, "reason": self.reason}


def _trend(gaps: np.ndarray) -> Optional[float]:
    """Log-log slope of the gap terms over the second half of the horizon."""
    k = np.arange(1, len(gaps) + 1)
    tail = slice(len(gaps) // 2, None)
    g = np.abs(gaps[tail])
    if len(g) < 2 or np.any(g == 0):
        return None
    return float(np.polyfit(np.log(k[tail]), np.log(g), 1)[0])


def jorsboe_decide(betas: BetaSequence, horizon: int = 1000) -> DichotomyVerdict:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    head = betas.head(horizon)
    gaps = 1.0 - head ** 2
    partial = float(np.sum(gaps))
    positive = betas.all_positive()
    if positive is False or np.any(head <= 0):
        return DichotomyVerdict(SINGULAR, partial, len(head), reason="beta_k <= 0 for some k")
    summable = betas.gap_summable()
    if summable is None:
        slope = _trend(gaps)
        return DichotomyVerdict(UNDECIDED, partial, len(head), slope,
                                "no closed form; gap terms decay like k^slope over the horizon")
    if summable:
        return DichotomyVerdict(EQUIVALENT, partial, len(head), reason="sum (1 - beta_k^2) converges")
    return DichotomyVerdict(SINGULAR, partial, len(head), reason="sum (1 - beta_k^2) diverges")


def lambda_family_verdict(lam1: float, lam2: float, horizon: int = 1000) -> DichotomyVerdict:
    """P_lam1 versus P_lam2: ``beta_k = lam1^2 / lam2^2`` for every k."""
    if not (lam1 > 0 and lam2 > 0):
        raise ValueError("lambdas must be positive")
    verdict = jorsboe_decide(BetaSequence.constant(lam1 ** 2 / lam2 ** 2), horizon)
    # the ratio can round to 1 for adjacent floats; the criterion itself is exact
    if lam1 != lam2 and verdict.verdict != SINGULAR:
        verdict = DichotomyVerdict(SINGULAR, verdict.partial_sum, verdict.horizon,
                                   reason="lam1 != lam2: constant beta != 1")
    return verdict


def _logdet(mat: np.ndarray) -> float:
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError as exc:
        raise PositivityError("matrix is not positive definite") from exc
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def gaussian_affinity(c1: np.ndarray, c2: np.ndarray) -> float:
    """Hellinger affinity of ``N(0, c1)`` and ``N(0, c2)`` (strictly PD covariances)."""
    ld1, ld2 = _logdet(c1), _logdet(c2)
    ldm = _logdet(0.5 * (c1 + c2))
    return float(math.exp(0.25 * ld1 + 0.25 * ld2 - 0.5 * ldm))


def log_gaussian_affinity(c1, c2) -> float:
    return 0.25 * _logdet(c1) + 0.25 * _logdet(c2) - 0.5 * _logdet(0.5 * (c1 + c2))


def hellinger_affinity(field1: GaussianField, field2: GaussianField, generators) -> float:
    if field1.model != field2.model:
        raise ValueError("affinity of the lambda family needs a shared model")
    c1 = covariance_matrix(field1, generators).matrix
    c2 = covariance_matrix(field2, generators).matrix
    return gaussian_affinity(c1, c2)


def lambda_affinity_closed_form(lam1: float, lam2: float, n: int) -> float:
    return (2.0 * lam1 * lam2 / (lam1 ** 2 + lam2 ** 2)) ** (n / 2.0)


def affinity_curve(lam1, lam2, ns: Sequence[int], model=None) -> list[dict]:
    """Affinity of P_lam1 and P_lam2 on the first ``n`` Hermite functions, for each ``n``."""
    model = model or L2Type()
    rows = []
    for n in ns:
        gens = [basis_function(j, max(n, 1)) for j in range(1, n + 1)]
        la = log_gaussian_affinity(covariance_matrix(GaussianField(model, lam1), gens).matrix,
                                   covariance_matrix(GaussianField(model, lam2), gens).matrix)
        rows.append({"n": n, "affinity": math.exp(la), "log_affinity": la})
    return rows


def lr_threshold(lam1: float, lam2: float, n: int) -> float:
    """Threshold on ``sum x_i^2`` where the likelihood ratio of N(0, lam2^2 I) to N(0, lam1^2 I) is 1."""
    if lam1 == lam2:
        return n * lam1 ** 2
    return n * lam1 ** 2 * lam2 ** 2 * 2.0 * math.log(lam2 / lam1) / (lam2 ** 2 - lam1 ** 2)


@dataclass
class ExperimentReport:
    lam1: float
    lam2: float
    n: int
    trials: int
    seed: int
    threshold: float
    error_rate: float
    error_se: float
    miss_rates: tuple
    affinity_bound: float

    def to_dict(self):
        return dict(self.__dict__)


def distinguishability_experiment(lam1: float, lam2: float, n: int, trials: int,
                                  seed: int, model=None) -> ExperimentReport:
    """Classify paths from P_lam1 and P_lam2 by the likelihood-ratio test on ``n`` marginals.

    The generators are the first ``n`` Hermite functions after Gram-Schmidt
    under Gamma_1, so the marginals are i.i.d. ``N(0, lam^2)``.  Each path is
    assigned to the measure with the larger likelihood; the error rate is
    the mean of the two misclassification frequencies.
    """
    model = model or L2Type()
    base = GaussianField(model, 1.0)
    gens = gamma_orthogonalize(base, [basis_function(j, n) for j in range(1, n + 1)])
    thr = lr_threshold(lam1, lam2, n)
    big_is_2 = lam2 >= lam1
    misses = []
    for which, lam in ((1, lam1), (2, lam2)):
        cov = covariance_matrix(GaussianField(model, lam), gens).matrix
        x = sample_normal(cov, trials, seed * 2 + which)
        stat = np.sum(x * x, axis=1)
        says_2 = stat > thr if big_is_2 else stat < thr
        wrong = ~says_2 if which == 2 else says_2
        misses.append(float(np.mean(wrong)))
    err = 0.5 * (misses[0] + misses[1])
    se = 0.5 * math.sqrt(sum(m * (1 - m) for m in misses) / trials)
    return ExperimentReport(lam1, lam2, n, trials, seed, thr, err, se, tuple(misses),
                            lambda_affinity_closed_form(lam1, lam2, n))


def _range_reduce(c1, c2, rtol=1e-12):
    """Restrict two PSD matrices to the range of ``c1 + c2``; flags range mismatch."""
    w, v = np.linalg.eigh(c1 + c2)
    keep = w > rtol * w.max()
    basis = v[:, keep]
    r1, r2 = basis.T @ c1 @ basis, basis.T @ c2 @ basis
    same = (np.linalg.matrix_rank(r1, tol=rtol * w.max()) == keep.sum()
            and np.linalg.matrix_rank(r2, tol=rtol * w.max()) == keep.sum())
    return r1, r2, same


@dataclass
class MixtureReport:
    verdict: DichotomyVerdict
    u: float
    v: float
    modes: int
    frame_kernel_error: float
    frame_operator_error: float
    betas: dict
    affinity: float
    note: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = dict(self.__dict__)
        out["verdict"] = self.verdict.to_dict()
        return out


def mixture_frame(mu: Atoms, u: float, size: int):
    """Frame functionals ``sqrt(u) g_n`` and ``sqrt(1-u) g_hat_n`` as coefficient vectors.

    With ``h_n = delta_{p_n} / sqrt(m_n)`` an orthonormal basis of L2(mu),
    ``g_n(s) = sqrt(m_n) s(p_n)`` and ``g_hat_n(s) = sqrt(m_n) s_hat(p_n)``.
    Each functional is linear in the Hermite coefficients of ``s``.
    """
    pts = np.array(mu.points)
    ms = np.array(mu.masses)
    vals = hermite_functions(size, pts)              # (size, modes)
    g = (vals * np.sqrt(ms)).T                       # rows: g_n
    g_hat = (vals * np.sqrt(ms)).T * fourier_phases(size)[None, :]
    return math.sqrt(u) * g, math.sqrt(1.0 - u) * g_hat


def mixture_family_compare(mu, u: float, v: float, modes: Optional[int] = None,
                           size: int = 8, frame_tol: float = 1e-8) -> MixtureReport:
    """Compare P_mu^(u) and P_mu^(v) for an atomic ``mu`` with ``modes`` atoms.

    Checks that the frame reproduces the covariance kernel and acts as a
    Parseval frame on the truncated test-function span, reads off
    ``beta = v/u`` and ``(1-v)/(1-u)``, and reports the Hellinger affinity
    of the two truncated covariances.
    """
    if not isinstance(mu, Atoms):
        raise ValueError("frame assumption fails for this mu: only atomic measures give a "
                         "finite, checkable frame (it fails for Lebesgue measure)")
    if modes is not None and modes != len(mu.points):
        raise ValueError(f"expected {modes} atoms, got {len(mu.points)}")
    if not (0 <= u <= 1 and 0 <= v <= 1):
        raise ValueError("u and v must lie in [0, 1]")
    if u == 0.0:
        raise ValueError("u must be positive (the frame needs u^{-1})")
    gram_u = Mixture(mu, u).gram(size)
    gram_v = Mixture(mu, v).gram(size)
    g, g_hat = mixture_frame(mu, u, size)
    frame = np.vstack([g, g_hat]) if u < 1 else g
    kernel = frame.T @ frame.conj()
    kernel_err = float(np.max(np.abs(kernel - gram_u)))
    # frame operator in H(Gamma_u): Gamma_u^{+1/2} (sum f f^H) Gamma_u^{+1/2} = projection
    w, vecs = np.linalg.eigh(gram_u)
    keep = w > 1e-12 * w.max()
    half = vecs[:, keep] / np.sqrt(w[keep])
    op = half.T @ kernel @ half
    op_err = float(np.max(np.abs(op - np.eye(keep.sum()))))
    if max(kernel_err, op_err) > frame_tol:
        raise ValueError(f"frame assumption fails for this mu (defect {max(kernel_err, op_err):.3g})")

    betas = {"l2": v / u}
    seqs = [BetaSequence.constant(v / u)]
    if u < 1:
        betas["fourier"] = (1 - v) / (1 - u)
        seqs.append(BetaSequence.constant((1 - v) / (1 - u)))
    verdicts = [jorsboe_decide(b) for b in seqs]
    partial = sum(d.partial_sum for d in verdicts)
    if u == v:
        verdict = DichotomyVerdict(EQUIVALENT, 0.0, verdicts[0].horizon, reason="u == v")
    elif any(d.verdict == SINGULAR for d in verdicts):
        verdict = DichotomyVerdict(SINGULAR, partial, verdicts[0].horizon,
                                   reason="a constant beta != 1 repeats over the infinite frame")
    else:
        verdict = DichotomyVerdict(EQUIVALENT, partial, verdicts[0].horizon)
    r1, r2, same = _range_reduce(gram_u, gram_v)
    affinity = gaussian_affinity(r1, r2) if same else 0.0
    note = ("u = 1: only the L2-type summand is compared" if u == 1 else "")
    return MixtureReport(verdict, u, v, len(mu.points), kernel_err, op_err, betas, affinity, note,
                         {"rank": int(r1.shape[0])})
