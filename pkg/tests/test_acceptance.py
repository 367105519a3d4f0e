"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one ``criterion N: PASS`` or ``criterion N: FAIL`` line.
"""
import math
import time

import numpy as np
import pytest

from cndfock.cli import run_command
from cndfock.cnd import FourierType, L2Type, Mixture, check_pd_gram
from cndfock.config import RunConfig
from cndfock.dichotomy import (SINGULAR, affinity_curve, distinguishability_experiment,
                               hellinger_affinity, lambda_family_verdict, mixture_family_compare)
from cndfock.fock import (adjointness_obstruction, commutator_suite, exponential_inner_tail,
                          exponential_vector)
from cndfock.gaussian import (GaussianField, covariance_matrix, gamma_orthogonalize,
                              moment_report, sample)
from cndfock.measures import Atoms, Lebesgue, PowerLaw, indicator_spectral_pairing
from cndfock.testfn import basis_function, random_hermite
from cndfock.transforms import (L2Element, intertwining_check, mc_inner, norm_identity_error,
                                q_kernel, r_lambda, t_adjoint_isometry_gram,
                                t_lambda_on_exponential, w_lambda, wick_fock_gram)

MEASURES = [Lebesgue(), PowerLaw(0.25), PowerLaw(0.75), Atoms((-1.0, 0.0, 1.0), (1.0, 2.0, 1.0))]


class Criterion:
    def __init__(self, number, budget, capsys):
        self.number, self.budget, self.capsys = number, budget, capsys
        self.failures = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def expect(self, ok, message):
        if not ok:
            self.failures.append(message)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed > self.budget:
            self.failures.append(f"runtime {elapsed:.1f}s > {self.budget}s")
        status = "PASS" if not self.failures else "FAIL " + "; ".join(self.failures)
        with self.capsys.disabled():
            print(f"\ncriterion {self.number}: {status} ({elapsed:.2f}s)")
        assert not self.failures, self.failures
        return False


def all_models(rng):
    out = []
    for mu in MEASURES:
        out += [L2Type(mu), FourierType(mu), Mixture(mu, float(rng.uniform(0, 1)))]
    return out


def test_criterion_1_scaling_law(capsys):
    rng = np.random.default_rng(101)
    models = all_models(rng)
    with Criterion(1, 5, capsys) as c:
        worst = 0.0
        for i in range(200):
            model = models[i % len(models)]
            s = random_hermite(rng, 32)
            alpha = float(rng.uniform(-5, 5))
            n = model.evaluate(s)
            err = abs(model.evaluate(s * alpha) - alpha ** 2 * n) / max(1.0, alpha ** 2 * n)
            worst = max(worst, err)
        c.expect(worst <= 1e-9, f"scaling defect {worst:.3g}")


def test_criterion_2_schoenberg_positivity(capsys):
    rng = np.random.default_rng(102)
    with Criterion(2, 5, capsys) as c:
        for model in all_models(rng):
            gens = [random_hermite(rng, 32, active=8) for _ in range(8)]
            grams = [check_pd_gram("phi_N", model, None, gens)]
            grams += [check_pd_gram("Q_lambda", model, lam, gens) for lam in (0.5, 1.0, 2.0)]
            for g in grams:
                c.expect(g.min_eig >= -1e-9 * g.spectral_radius,
                         f"{g.kind} min eig {g.min_eig:.3g} for {model}")


def test_criterion_3_moments(capsys):
    rng = np.random.default_rng(103)
    with Criterion(3, 20, capsys) as c:
        for model in (L2Type(Lebesgue()), FourierType(PowerLaw(0.3)), Mixture(Lebesgue(), 0.5)):
            s = random_hermite(rng, 32, active=6)
            for lam in (1.0, 2.0):
                f = GaussianField(model, lam)
                x = sample(f, [s], 1_000_000, int(rng.integers(2 ** 31))).values[:, 0]
                for row in moment_report(f, s, x, range(1, 7), n_se=4.0):
                    c.expect(row["pass"], f"{model} lam={lam}: {row}")


def test_criterion_4_brownian_fbm(capsys):
    ts = [0.5, 1.0, 1.5, 2.0, 2.5]
    with Criterion(4, 30, capsys) as c:
        model = FourierType(Lebesgue())
        for a in ts:
            for b in ts:
                ratio = model.indicator_pairing(a, b) / (2 * math.pi * min(a, b))
                c.expect(abs(ratio - 1) <= 1e-5, f"Brownian ratio at ({a}, {b}) = {ratio}")
        for H in (0.25, 0.5, 0.75):
            mu = PowerLaw(H)
            grid = np.array([[indicator_spectral_pairing(mu, a, b) for b in ts] for a in ts])
            norm = grid / grid[1, 1]
            exact = np.array([[0.5 * (a ** (2 * H) + b ** (2 * H) - abs(a - b) ** (2 * H))
                               for b in ts] for a in ts])
            err = float(np.max(np.abs(norm - exact)))
            c.expect(err <= 1e-3, f"fBm H={H} error {err:.3g}")


def test_criterion_5_ccr(capsys):
    with Criterion(5, 10, capsys) as c:
        suite = commutator_suite(6, 10, lams=(1.0, 0.5, 3.0), seed=5)
        for lam, row in suite.items():
            c.expect(row["mixed"] <= 1e-12, f"mixed defect {row['mixed']:.3g} at lam={lam}")
            c.expect(row["annihilators"] <= 1e-12, f"[a, a] defect at lam={lam}")
        h = np.random.default_rng(105).standard_normal(6)
        for lam in (1.0, 0.5, 3.0):
            rep = adjointness_obstruction(h, 10, lam)
            c.expect(rep.error <= 1e-10 * max(1.0, rep.predicted),
                     f"adjointness error {rep.error:.3g} at lam={lam}")
            c.expect((rep.obstruction_norm == 0.0) == (lam == 1.0), f"zero iff lam = 1 at {lam}")


def test_criterion_6_exponential_vectors(capsys):
    rng = np.random.default_rng(106)
    with Criterion(6, 5, capsys) as c:
        for _ in range(50):
            hs = []
            for _ in range(2):
                h = rng.standard_normal(3) + 1j * rng.standard_normal(3)
                hs.append(h / np.linalg.norm(h) * rng.uniform(0, 1))
            v1, v2 = (exponential_vector(h, 20).vector for h in hs)
            gap = abs(v1.inner(v2) - np.exp(np.vdot(hs[0], hs[1])))
            bound = exponential_inner_tail(hs[0], hs[1], 20) + 1e-12
            c.expect(gap <= bound, f"gap {gap:.3g} > bound {bound:.3g}")


def test_criterion_7_transforms(capsys):
    rng = np.random.default_rng(107)
    models = [L2Type(Lebesgue()), FourierType(PowerLaw(0.3)), Mixture(Lebesgue(), 0.4)]
    with Criterion(7, 30, capsys) as c:
        for model in models:
            for lam in (0.5, 1.0, 2.0):
                f = GaussianField(model, lam)

                def unit(scale=1.0):
                    s = random_hermite(rng, 16, active=5)
                    return s * (scale / (lam * math.sqrt(model.evaluate(s))))

                # (a) norm identity, closed form
                for _ in range(5):
                    err = norm_identity_error(unit(rng.uniform(0.1, 1.2)), f)
                    c.expect(err <= 1e-10, f"(a) norm identity {err:.3g}")
                # (b) Wick map against exponential vectors
                rep = wick_fock_gram([unit(0.5) for _ in range(4)], f, tol=1e-8)
                c.expect(rep.passed, f"(b) Wick Gram {rep.max_abs_error:.3g}")
                # (c) adjoint isometry and kernel identity
                centers = [unit() for _ in range(4)]
                rep = t_adjoint_isometry_gram(centers, f, tol=1e-12)
                c.expect(rep.passed, f"(c) isometry Gram {rep.max_abs_error:.3g}")
                for s in centers:
                    for p in centers:
                        ref = math.exp(-0.5 * lam ** 2 * model.evaluate(s - p))
                        err = abs(t_lambda_on_exponential(-1j, s, p, f) - ref)
                        c.expect(err <= 1e-12, f"(c) kernel identity {err:.3g}")
                # (d) R_lambda on a 5 x 5 grid
                ss, ps = [unit() for _ in range(5)], [unit() for _ in range(5)]
                worst = max(r_lambda(s, p, f).error for s in ss for p in ps)
                c.expect(worst <= 1e-10, f"(d) R_lambda {worst:.3g}")
                # (e) intertwining on Gamma-orthonormal modes
                modes = gamma_orthogonalize(f, [basis_function(j, 16) for j in (1, 2, 3)])
                rep = intertwining_check(rng.standard_normal(3) / 2, 8, f, modes, tol=1e-10)
                c.expect(rep.passed, f"(e) intertwining {rep.max_abs_error:.3g}")
        # (a) Monte Carlo leg
        f = GaussianField(L2Type(Lebesgue()), 1.0)
        w = w_lambda(basis_function(1, 8), f)
        est, se = mc_inner(w, w, 1_000_000, 7)
        c.expect(abs(est - w.norm2()) <= 4 * se, f"(a) MC z = {abs(est - w.norm2()) / se:.2f}")


def test_criterion_8_dichotomy(capsys):
    with Criterion(8, 60, capsys) as c:
        for l1, l2 in [(1, 1), (1, 2), (2, 2 + 1e-12), (0.3, 0.3), (3, 0.5)]:
            v = lambda_family_verdict(l1, l2).verdict
            c.expect((v == SINGULAR) == (l1 != l2), f"verdict {v} for ({l1}, {l2})")
        model = L2Type(Lebesgue())
        affs = []
        for n in (2, 10, 20):
            gens = [basis_function(j, n) for j in range(1, n + 1)]
            a = hellinger_affinity(GaussianField(model, 1), GaussianField(model, 2), gens)
            c.expect(abs(a - 0.8 ** (n / 2)) <= 1e-12, f"affinity n={n}: {a}")
            affs.append(a)
        c.expect(all(np.diff(affs) < 0), "affinity not strictly decreasing")
        rows = affinity_curve(1, 2, [10, 20, 40])
        c.expect(all(np.diff([r["affinity"] for r in rows]) < 0), "curve not decreasing")
        exp = distinguishability_experiment(1, 2, 50, 2000, seed=8)
        c.expect(exp.error_rate < 0.01, f"error rate {exp.error_rate}")
        eq = distinguishability_experiment(1, 1, 50, 2000, seed=8)
        c.expect(abs(eq.error_rate - 0.5) <= 0.05, f"equal-lambda error rate {eq.error_rate}")
        rep = mixture_family_compare(Atoms((-1.0, 0.0, 1.0), (1.0, 2.0, 1.0)), 0.3, 0.7, modes=3)
        c.expect(rep.verdict.verdict == SINGULAR, f"mixture verdict {rep.verdict.verdict}")
        frame = max(rep.frame_kernel_error, rep.frame_operator_error)
        c.expect(frame <= 1e-8, f"frame identity {frame:.3g}")


def test_criterion_9_determinism(capsys, tmp_path):
    with Criterion(9, 180, capsys) as c:
        dirs = [tmp_path / "a", tmp_path / "b"]
        for d in dirs:
            status, summary = run_command("all", RunConfig(out=str(d)))
            c.expect(status == 0, f"`all` failed: {summary}")
        data = sorted(p.name for p in dirs[0].iterdir() if not p.name.endswith(".meta.json"))
        c.expect(data == sorted(p.name for p in dirs[1].iterdir()
                                if not p.name.endswith(".meta.json")), "artifact sets differ")
        for name in data:
            c.expect((dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(),
                     f"{name} differs between runs")
