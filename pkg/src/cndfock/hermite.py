"""Hermite polynomials, Hermite functions and the quadrature rules built on them.

Conventions: ``h_n`` are the probabilists' Hermite polynomials (weight
``exp(-x**2/2)``), and the Hermite functions are indexed from one,

    xi_n(x) = pi**(-1/4) ((n-1)!)**(-1/2) exp(-x**2/2) h_{n-1}(sqrt(2) x),

which makes ``{xi_n}`` an orthonormal basis of L^2(R, dx).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

__all__ = [
    "HermiteBasis",
    "QuadratureRule",
    "eval_hermite_poly",
    "eval_hermite_function",
    "hermite_functions",
    "hermite_weighted_orthogonality",
    "gauss_hermite",
    "gauss_hermite_lebesgue",
    "gauss_legendre",
    "panel_rule",
    "power_weight_rule",
    "multiplication_matrix",
]


def eval_hermite_poly(n: int, x):
    """Probabilists' Hermite polynomial ``h_n(x)`` by the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur if cur.ndim else float(cur)


def hermite_functions(count: int, x) -> np.ndarray:
    """Values of ``xi_1 .. xi_count`` at ``x``; shape ``(count,) + x.shape``.

    Uses the normalized recurrence

        psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1},

    with ``psi_k = xi_{k+1}``, so no factorials appear and the values stay
    finite for several hundred functions.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((count,) + x.shape)
    if count == 0:
        return out
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if count > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, count - 1):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def eval_hermite_function(n: int, x):
    """Hermite function ``xi_n(x)`` for ``n >= 1``."""
    if n < 1:
        raise ValueError("Hermite functions are indexed from n = 1")
    vals = hermite_functions(n, x)[n - 1]
    return vals if np.ndim(vals) else float(vals)


@dataclass(frozen=True)
class HermiteBasis:
    """The first ``max_degree`` Hermite functions ``xi_1 .. xi_D``."""

    max_degree: int = 32

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be >= 1")

    def __call__(self, x) -> np.ndarray:
        return hermite_functions(self.max_degree, x)

    def evaluate(self, coeffs, x):
        """Evaluate ``sum_n coeffs[n] xi_{n+1}(x)``."""
        coeffs = np.asarray(coeffs)
        return np.tensordot(coeffs, hermite_functions(len(coeffs), x), axes=1)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for ``integral f(x) dx ~ sum w_i f(x_i)``.

    ``domain`` is ``(lo, hi)``; infinite endpoints mark whole-line rules.
    ``exactness`` is the polynomial degree integrated exactly against the
    rule's intrinsic weight (-1 when not meaningful, e.g. composite rules).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple = (-math.inf, math.inf)
    exactness: int = -1

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f):
        return np.sum(self.weights * f(self.nodes), axis=-1)

    def scaled(self, density) -> "QuadratureRule":
        """Rule for ``integral f(x) density(x) dx`` (density must be positive on the nodes)."""
        return QuadratureRule(self.kind, self.nodes, self.weights * density(self.nodes),
                              self.domain, -1)


@lru_cache(maxsize=None)
def gauss_hermite(n: int) -> QuadratureRule:
    """Gauss-Hermite rule for the standard normal measure ``(2 pi)^{-1/2} e^{-x^2/2} dx``."""
    x, w = special.roots_hermitenorm(n)
    return QuadratureRule("gauss-hermite", x, w / math.sqrt(2 * math.pi), exactness=2 * n - 1)


@lru_cache(maxsize=None)
def gauss_hermite_lebesgue(n: int) -> QuadratureRule:
    """Gauss-Hermite rule with the Gaussian weight stripped off: ``integral f(x) dx``.

    Exact for ``f = exp(-x^2) p(x)`` with ``deg p <= 2n - 1``, in particular
    for products ``xi_j xi_k`` with ``j + k <= 2n``.
    """
    if n > 150:
        raise ValueError("stripped Gauss-Hermite weights overflow beyond n = 150")
    x, w = special.roots_hermite(n)
    return QuadratureRule("gauss-hermite", x, w * np.exp(x * x), exactness=2 * n - 1)


def gauss_legendre(lo: float, hi: float, n: int) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return QuadratureRule("gauss-legendre-panels", half * x + 0.5 * (hi + lo), half * w,
                          (lo, hi), exactness=2 * n - 1)


def panel_rule(edges, order: int = 20) -> QuadratureRule:
    """Composite Gauss-Legendre rule over consecutive panels ``edges[i], edges[i+1]``."""
    edges = np.asarray(edges, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w
    return QuadratureRule("gauss-legendre-panels", nodes.ravel(), weights.ravel(),
                          (edges[0], edges[-1]))


@lru_cache(maxsize=None)
def power_weight_rule(beta: float, upper: float, head: float = 1e-3, knee: float = 1.0,
                      log_panels: int = 12, panel_width: float = 0.25,
                      order: int = 20, symmetric: bool = True) -> QuadratureRule:
    """Rule for ``integral f(u) |u|^beta du`` over ``[-upper, upper]`` (or ``[0, upper]``).

    The head panel ``[0, head]`` uses Gauss-Jacobi nodes, which absorb the
    power singularity exactly; ``[head, knee]`` is split into log-spaced
    Gauss-Legendre panels and ``[knee, upper]`` into uniform panels.
    """
    if beta <= -1:
        raise ValueError("power weight |u|^beta needs beta > -1 to be locally integrable")
    xj, wj = special.roots_jacobi(order, 0.0, beta)
    # u = head (1 + x) / 2 maps [-1, 1] to [0, head]; (1+x)^beta = (2u/head)^beta
    head_nodes = 0.5 * head * (1.0 + xj)
    head_weights = wj * (0.5 * head) ** (beta + 1.0)
    if not 0 < head < knee < upper:
        raise ValueError("need 0 < head < knee < upper")
    edges = list(np.geomspace(head, knee, log_panels + 1))
    n_uniform = max(1, int(math.ceil((upper - knee) / panel_width)))
    edges += list(np.linspace(knee, upper, n_uniform + 1)[1:])
    body = panel_rule(edges, order)
    nodes = np.concatenate([head_nodes, body.nodes])
    weights = np.concatenate([head_weights, body.weights * body.nodes ** beta])
    if symmetric:
        nodes = np.concatenate([-nodes[::-1], nodes])
        weights = np.concatenate([weights[::-1], weights])
        domain = (-upper, upper)
    else:
        domain = (0.0, upper)
    return QuadratureRule("gauss-legendre-panels", nodes, weights, domain)


def hermite_weighted_orthogonality(n: int, m: int) -> float:
    """``integral h_n h_m d mu_1`` for the standard normal ``mu_1`` (equals ``n! delta_nm``)."""
    rule = gauss_hermite(max(n + m, 2) // 2 + 2)
    return float(rule.integrate(lambda x: eval_hermite_poly(n, x) * eval_hermite_poly(m, x)))


@lru_cache(maxsize=None)
def multiplication_matrix(max_degree: int) -> np.ndarray:
    """Matrix of ``x *`` in the normalized basis ``h_n / sqrt(n!)`` of L^2(mu_1).

    Entry ``[m, n] = integral x h_m h_n d mu_1 / sqrt(m! n!)`` for
    ``0 <= m, n <= max_degree + 1``, computed by Gauss-Hermite quadrature.
    The extra row lets callers see the component pushed past ``max_degree``.
    """
    size = max_degree + 2
    rule = gauss_hermite(size + 2)
    x = rule.nodes
    polys = np.empty((size, len(x)))
    polys[0] = 1.0
    if size > 1:
        polys[1] = x
    for k in range(1, size - 1):
        polys[k + 1] = x * polys[k] - k * polys[k - 1]
    norms = np.sqrt([math.factorial(k) for k in range(size)], dtype=float)
    polys /= norms[:, None]
    return (polys * (rule.weights * x)) @ polys.T
