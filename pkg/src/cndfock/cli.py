"""Command-line harness: every check and experiment, with JSON and CSV artifacts.

Each subcommand writes ``<command>.json`` (config echo, tolerances, one
entry per assertion) plus CSV data into the output directory, and a
``<command>.meta.json`` holding wall-clock information.  Only the meta
files vary between identical runs.

Exit status: 0 when every assertion passes, 1 on any failure, 2 on a
configuration error.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

import numpy as np

from . import dichotomy as dch
from . import fock
from . import transforms as tr
from .cnd import (FourierType, L2Type, Mixture, check_cnd, check_pd_gram)
from .config import DEFAULT_TOLERANCES, ConfigError, RunConfig, load_config
from .errors import CndFockError
from .gaussian import (GaussianField, covariance_matrix, gamma_orthogonalize,
                       moment_report, sample, scaling_defect)
from .measures import Atoms, Lebesgue, PowerLaw, indicator_spectral_pairing
from .reporting import SCHEMA_VERSION, CheckReport, dump_json, write_csv
from .testfn import basis_function, random_hermite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

FBM_GRID = (0.5, 1.0, 1.5, 2.0, 2.5)
FBM_HURST = (0.25, 0.5, 0.75)
DEFAULT_ATOMS = Atoms((-1.0, 0.0, 1.0), (1.0, 2.0, 1.0))


class Run:
    """Collects assertions and writes artifacts for one subcommand."""

    def __init__(self, command: str, cfg: RunConfig, out: Path):
        self.command = command
        self.cfg = cfg
        self.out = out
        self.checks: list[CheckReport] = []
        self.results: dict = {}
        self.used_tolerances: dict = {}
        self.files: list[str] = []

    def tol(self, key: str) -> float:
        value = self.cfg.tolerance(key)
        self.used_tolerances[key] = value
        return value

    def rng(self, tag: int) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, tag])

    def check(self, name: str, fn: Callable[[], CheckReport]) -> CheckReport:
        """Run one assertion; numerical exceptions become failed reports."""
        try:
            rep = fn()
        except CndFockError as exc:
            rep = CheckReport(name, math.inf, math.nan, False,
                              details={"error": f"{type(exc).__name__}: {exc}"})
        rep.check = name
        self.checks.append(rep)
        return rep

    def csv(self, name: str, header, rows) -> None:
        write_csv(self.out / name, header, rows)
        self.files.append(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def report(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.cfg.echo(),
            "tolerances": dict(sorted(self.used_tolerances.items())),
            "assertions": [c.to_dict() for c in self.checks],
            "results": self.results,
            "files": sorted(self.files),
            "pass": self.passed,
        }


def _bounded(name, error, tol, **details) -> CheckReport:
    return CheckReport.from_error(name, error, tol, details=details)


def _flag(name, ok: bool, **details) -> CheckReport:
    return CheckReport(name, 0.0 if ok else 1.0, 0.0, bool(ok), details=details)


def _variants(cfg: RunConfig):
    mu = cfg.measure()
    return {"l2": L2Type(mu), "fourier": FourierType(mu), "mixture": Mixture(mu, cfg.u)}


# ---------------------------------------------------------------- kernel-check

def cmd_kernel_check(run: Run) -> None:
    cfg = run.cfg
    model = cfg.build_model()
    size = cfg.basis_size
    rng = run.rng(1)
    gens = [random_hermite(rng, size, active=min(size, 8)) for _ in range(8)]

    run.check("cnd", lambda: check_cnd(model, gens, trials=100, seed=cfg.seed, tol=run.tol("cnd")))

    psd_tol = run.tol("psd")
    grams = {}
    lams = sorted({0.5, 1.0, 2.0, cfg.lam})
    for kind, lam in [("phi_N", None)] + [("Q_lambda", lam) for lam in lams]:
        label = kind if lam is None else f"{kind}[{lam:g}]"

        def one(kind=kind, lam=lam, label=label):
            g = check_pd_gram(kind, model, lam, gens, rtol=psd_tol)
            grams[label] = g
            rel = max(0.0, -g.min_eig) / max(g.spectral_radius, np.finfo(float).tiny)
            return _bounded(label, rel, psd_tol, **g.summary())

        run.check(f"psd:{label}", one)
    for label, g in grams.items():
        g.to_csv(run.out / f"gram_{label.replace('[', '_').replace(']', '')}.csv")
        run.files.append(f"gram_{label.replace('[', '_').replace(']', '')}.csv")

    def scaling():
        srng = run.rng(2)
        variants = list(_variants(cfg).items())
        worst, witness = 0.0, None
        for trial in range(200):
            name, m = variants[trial % len(variants)]
            s = random_hermite(srng, size, active=min(size, 8))
            alpha = float(srng.uniform(-5.0, 5.0))
            ns = m.evaluate(s)
            err = abs(m.evaluate(s * alpha) - alpha * alpha * ns) / max(1.0, alpha * alpha * ns)
            if err > worst:
                worst, witness = err, {"variant": name, "alpha": alpha, "trial": trial}
        return _bounded("scaling_law", worst, run.tol("scaling"), worst_case=witness, triples=200)

    run.check("scaling_law", scaling)

    def cov_scaling():
        c1 = covariance_matrix(GaussianField(model, cfg.lam1), gens)
        c2 = covariance_matrix(GaussianField(model, cfg.lam2), gens)
        scale = max(1.0, float(np.max(np.abs(c1.matrix))) / cfg.lam1 ** 2)
        return _bounded("covariance_scaling", scaling_defect(c1, c2) / scale, run.tol("scaling"))

    run.check("covariance_scaling", cov_scaling)
    run.results["grams"] = {k: g.summary() for k, g in grams.items()}


# ---------------------------------------------------------------------- sample

def _sample_generators(cfg: RunConfig, model, count: int = 4):
    rng = np.random.default_rng([cfg.seed, 3])
    gens = [random_hermite(rng, cfg.basis_size, active=min(cfg.basis_size, 6)) for _ in range(count)]
    # unit N so the moment targets are (2k-1)!! lam^{2k}
    return [g * (1.0 / math.sqrt(model.evaluate(g))) for g in gens]


def cmd_sample(run: Run) -> None:
    cfg = run.cfg
    model = cfg.build_model()
    field = GaussianField(model, cfg.lam)
    gens = _sample_generators(cfg, model)
    cov = covariance_matrix(field, gens)
    cov.to_csv(run.out / "covariance.csv")
    run.files.append("covariance.csv")

    paths = sample(field, gens, cfg.count, cfg.seed)
    rows = min(len(paths), cfg.csv_rows)
    n = len(gens)
    run.csv("samples.csv", ["replicate"] + [f"x{j}" for j in range(n)],
            ([r] + list(v) for r, v in enumerate(paths.values[:rows])))
    run.results.update({"lambda": cfg.lam, "n": n, "seed": cfg.seed, "count": cfg.count,
                        "csv_rows": rows})

    if cfg.count >= 2:
        n_se = run.tol("moments_n_se")
        table = moment_report(field, gens[0], paths.values[:, 0], range(1, 7), n_se=n_se)
        run.results["moments"] = {str(r["order"]): r for r in table}
        worst = max(r["z"] for r in table)
        run.check("moments", lambda: _bounded("moments", worst, n_se, max_z=worst))

        def vector_cov():
            m = min(cfg.count, cfg.vector_count)
            x = paths.values[:m]
            emp = x.T @ x / m
            c = cov.matrix
            se = np.sqrt((np.outer(np.diag(c), np.diag(c)) + c * c) / m)
            z = float(np.max(np.abs(emp - c) / se))
            return _bounded("covariance", z, n_se, samples=m, max_z=z)

        run.check("covariance", vector_cov)
    else:
        run.results["moments"] = {}


# -------------------------------------------------------------- fbm-covariance

def fbm_closed_form(h: float, t1: float, t2: float) -> float:
    return 0.5 * (abs(t1) ** (2 * h) + abs(t2) ** (2 * h) - abs(t1 - t2) ** (2 * h))


def _pairing_grid(mu, ts):
    n = len(ts)
    grid = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            grid[i, j] = grid[j, i] = indicator_spectral_pairing(mu, ts[i], ts[j])
    return grid


def cmd_fbm_covariance(run: Run) -> None:
    ts = FBM_GRID
    rows = []

    def brownian():
        grid = _pairing_grid(Lebesgue(), ts)
        mins = np.minimum.outer(ts, ts)
        ratio = grid / mins
        err = float(np.max(np.abs(ratio / (2 * math.pi) - 1.0)))
        for i, a in enumerate(ts):
            for j, b in enumerate(ts):
                rows.append(["lebesgue", "", a, b, grid[i, j], ratio[i, j] / (2 * math.pi),
                             mins[i, j], abs(ratio[i, j] / (2 * math.pi) - 1.0)])
        return _bounded("brownian", err, run.tol("brownian"),
                        ratio_min=float(ratio.min()), ratio_max=float(ratio.max()),
                        constant=2 * math.pi)

    run.check("brownian", brownian)

    for h in FBM_HURST:
        def fbm(h=h):
            grid = _pairing_grid(PowerLaw(h), ts)
            k = ts.index(1.0)
            norm = grid / grid[k, k]
            exact = np.array([[fbm_closed_form(h, a, b) for b in ts] for a in ts])
            rel = np.abs(norm - exact) / np.abs(exact)
            for i, a in enumerate(ts):
                for j, b in enumerate(ts):
                    rows.append(["powerlaw", h, a, b, grid[i, j], norm[i, j], exact[i, j], rel[i, j]])
            return _bounded(f"fbm[H={h}]", float(rel.max()), run.tol("fbm"),
                            scale=float(grid[k, k]))

        run.check(f"fbm[H={h}]", fbm)

    run.csv("fbm_grid.csv", ["measure", "H", "t1", "t2", "quadrature", "normalized",
                             "closed_form", "rel_error"], rows)


# -------------------------------------------------------------------- fock-ccr

def cmd_fock_ccr(run: Run) -> None:
    cfg = run.cfg
    d, k = cfg.modes, cfg.degree
    lams = sorted({1.0, 0.5, 3.0, cfg.lam})
    suite = {}

    def ccr():
        suite.update(fock.commutator_suite(d, k, lams, seed=cfg.seed))
        worst = max(max(v.values()) for v in suite.values())
        return _bounded("ccr", worst, run.tol("ccr"), modes=d, degree=k,
                        per_lambda={f"{lam:g}": v for lam, v in suite.items()})

    run.check("ccr", ccr)

    rng = run.rng(4)
    h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    h /= np.linalg.norm(h)
    profile_rows = []
    for lam in lams:
        prof = fock.commutator_profile(h, h, k, lam)
        profile_rows += [[lam, deg, v] for deg, v in enumerate(prof)]
    run.csv("commutator_profile.csv", ["lambda", "degree", "defect"], profile_rows)

    adj = {}

    def adjointness():
        worst = 0.0
        for lam in lams:
            rep = fock.adjointness_obstruction(h, k, lam)
            adj[f"{lam:g}"] = {"obstruction": rep.obstruction_norm, "predicted": rep.predicted,
                               "creation_norm": rep.creation_norm}
            scale = max(1.0, rep.creation_norm)
            worst = max(worst, rep.error / scale)
            # zero exactly at lam = 1, positive otherwise
            if (rep.obstruction_norm == 0.0) != (lam == 1.0):
                worst = math.inf
        return _bounded("adjointness", worst, run.tol("adjointness"), per_lambda=adj)

    run.check("adjointness", adjointness)

    def exp_vectors():
        erng = run.rng(5)
        kk = cfg.exp_degree
        worst = 0.0
        for _ in range(50):
            pair = []
            for _ in range(2):
                v = erng.standard_normal(d) + 1j * erng.standard_normal(d)
                pair.append(v / np.linalg.norm(v) * erng.uniform(0, 1))
            e1 = fock.exponential_vector(pair[0], kk)
            e2 = fock.exponential_vector(pair[1], kk)
            gap = abs(e1.vector.inner(e2.vector) - np.exp(np.vdot(pair[0], pair[1])))
            bound = fock.exponential_inner_tail(pair[0], pair[1], kk)
            worst = max(worst, gap - bound)
        return _bounded("exponential_vectors", max(worst, 0.0), run.tol("exp_vector"),
                        pairs=50, degree=kk, max_excess_over_tail=worst)

    run.check("exponential_vectors", exp_vectors)

    def second_quant():
        space = fock.fock_space(d, k)
        v = fock.FockVector(space, run.rng(6).standard_normal(len(space)))
        growth = max(fock.second_quantization(lam, v).norm() / v.norm() for lam in (0.25, 0.5, 1.0))
        return _bounded("second_quantization_contraction", max(growth - 1.0, 0.0), 1e-12,
                        max_norm_ratio=growth)

    run.check("second_quantization_contraction", second_quant)
    run.results.update({"space_size": len(fock.fock_space(d, k)), "adjointness": adj})


# ------------------------------------------------------------------ transforms

def _unit_variance(field, s, target=1.0):
    return s * math.sqrt(target / field.variance(s))


def cmd_transforms(run: Run) -> None:
    cfg = run.cfg
    model = cfg.build_model()
    field = GaussianField(model, cfg.lam)
    size = cfg.basis_size
    rng = run.rng(7)
    rand = lambda: random_hermite(rng, size, active=min(size, 6), scale=0.7)  # noqa: E731

    def norm_identity():
        worst = 0.0
        for lam in sorted({0.5, 2.0, cfg.lam}):
            f = field.rescaled(lam)
            for _ in range(10):
                s = rand()
                if f.variance(s) > 50:
                    s = _unit_variance(f, s, 4.0)
                worst = max(worst, tr.norm_identity_error(s, f))
        return _bounded("norm_identity", worst, run.tol("norm_identity"))

    run.check("norm_identity", norm_identity)

    def norm_identity_mc():
        s = _unit_variance(field, rand())
        w = tr.w_lambda(s, field)
        est, se = tr.mc_inner(w, w, cfg.count, cfg.seed)
        z = abs(est - math.e) / se if se > 0 else 0.0
        return _bounded("norm_identity_mc", z, run.tol("moments_n_se"),
                        estimate=est, se=se, exact=math.e, samples=cfg.count)

    if cfg.count >= 2:
        run.check("norm_identity_mc", norm_identity_mc)

    def wick():
        worst = 0.0
        details = {}
        for rep_i in range(3):
            gens = [_unit_variance(field, rand(), 0.5) for _ in range(4)]
            rep = tr.wick_fock_gram(gens, field, degree=cfg.exp_degree, tol=run.tol("wick"))
            worst = max(worst, rep.max_abs_error)
            details[str(rep_i)] = rep.max_abs_error
        return _bounded("wick_isometry", worst, run.tol("wick"), per_set=details)

    run.check("wick_isometry", wick)
    gens = [_unit_variance(field, rand(), 0.5) for _ in range(4)]
    run.results["series_map_cross_terms"] = {
        k: v for k, v in tr.series_cross_gap(gens, field).items() if k.endswith("gap")}

    centers = [rand() for _ in range(4)]
    iso = run.check("t_adjoint_isometry", lambda: tr.t_adjoint_isometry_gram(
        centers, field, tol=run.tol("t_isometry"), mc_count=cfg.count if cfg.count >= 2 else 0,
        seed=cfg.seed + 1, n_se=run.tol("moments_n_se")))
    run.check("t_injectivity", lambda: _flag(
        "t_injectivity", iso.details.get("min_eig_G1", -1.0) > 0,
        min_eig=iso.details.get("min_eig_G1")))

    probes = [rand() for _ in range(5)]

    def kernel_identity():
        worst = 0.0
        for c in centers:
            for p in probes:
                lhs = tr.t_lambda_on_exponential(-1j, c, p, field)
                worst = max(worst, abs(lhs - tr.q_kernel(field, c, p)))
        return _bounded("t_kernel_identity", worst, run.tol("t_isometry"))

    run.check("t_kernel_identity", kernel_identity)

    grid_rows = []

    def r_grid():
        ss = [rand() for _ in range(5)]
        worst = 0.0
        for i, s in enumerate(ss):
            for j, p in enumerate(probes):
                r = tr.r_lambda(s, p, field)
                rel = r.error / max(1.0, abs(r.right))
                worst = max(worst, rel)
                grid_rows.append([i, j, r.left.real, r.left.imag, r.right.real, r.right.imag, r.error])
        return _bounded("r_lambda", worst, run.tol("r_lambda"))

    run.check("r_lambda", r_grid)
    run.csv("r_lambda_grid.csv", ["s", "probe", "left_re", "left_im", "right_re", "right_im",
                                  "abs_error"], grid_rows)

    def intertwining():
        base = [basis_function(j, size) for j in range(1, cfg.modes + 1)]
        modes = gamma_orthogonalize(field, base)
        h = run.rng(8).standard_normal(len(modes))
        h /= np.linalg.norm(h)
        return tr.intertwining_check(h, cfg.degree, field, modes, tol=run.tol("intertwining"))

    run.check("intertwining", intertwining)


# ----------------------------------------------------------------- singularity

def cmd_singularity(run: Run) -> None:
    cfg = run.cfg
    lam1, lam2, n = cfg.lam1, cfg.lam2, cfg.n
    model = cfg.build_model()
    verdict = dch.lambda_family_verdict(lam1, lam2)
    run.results["verdict"] = verdict.verdict
    run.results["verdict_detail"] = verdict.to_dict()
    run.check("verdict", lambda: _flag("verdict", (verdict.verdict == dch.SINGULAR) == (lam1 != lam2),
                                       verdict=verdict.verdict))

    def affinity():
        size = max(n, cfg.basis_size)
        gens = [basis_function(j, size) for j in range(1, n + 1)]
        val = dch.hellinger_affinity(GaussianField(model, lam1), GaussianField(model, lam2), gens)
        exact = dch.lambda_affinity_closed_form(lam1, lam2, n)
        run.results["affinity"] = val
        run.results["affinity_closed_form"] = exact
        return _bounded("affinity", abs(val - exact), run.tol("affinity"), n=n)

    run.check("affinity", affinity)

    ns = sorted({2, 10, 20, 40, n})
    curve = []

    def decay():
        curve.extend(dch.affinity_curve(lam1, lam2, ns, model))
        logs = np.array([r["log_affinity"] for r in curve])
        slope = 0.5 * math.log(2 * lam1 * lam2 / (lam1 ** 2 + lam2 ** 2))
        err = float(np.max(np.abs(logs - slope * np.array(ns))))
        decreasing = bool(np.all(np.diff(logs) < 0)) if lam1 != lam2 else True
        rep = _bounded("affinity_decay", err, 1e-10, slope=slope, strictly_decreasing=decreasing)
        rep.passed = rep.passed and decreasing
        return rep

    run.check("affinity_decay", decay)
    run.csv("affinity_curve.csv", ["n", "affinity", "log_affinity"],
            ([r["n"], r["affinity"], r["log_affinity"]] for r in curve))

    def experiment():
        exp = dch.distinguishability_experiment(lam1, lam2, cfg.experiment_n, cfg.trials,
                                                cfg.seed, model)
        ctrl = dch.distinguishability_experiment(lam1, lam1, cfg.experiment_n, cfg.trials,
                                                 cfg.seed, model)
        run.results["experiment"] = exp.to_dict()
        run.results["control"] = ctrl.to_dict()
        # Bayes error is at most half the Hellinger affinity
        bound = 0.5 * exp.affinity_bound + 4 * exp.error_se
        band = run.tol("equal_error_band")
        ok_ctrl = abs(ctrl.error_rate - 0.5) <= band
        rep = _bounded("distinguishability", max(exp.error_rate - bound, 0.0), 0.0,
                       error_rate=exp.error_rate, hellinger_bound=bound,
                       control_error_rate=ctrl.error_rate, control_band=band)
        rep.passed = rep.passed and ok_ctrl
        return rep

    if cfg.trials > 0:
        run.check("distinguishability", experiment)

    def mixture():
        mu = cfg.measure()
        if not isinstance(mu, Atoms):
            mu = DEFAULT_ATOMS
        rep = dch.mixture_family_compare(mu, cfg.mix_u, cfg.mix_v, frame_tol=run.tol("frame"))
        run.results["mixture"] = rep.to_dict()
        ok = (rep.verdict.verdict == dch.SINGULAR) == (cfg.mix_u != cfg.mix_v)
        out = _bounded("mixture_frame", max(rep.frame_kernel_error, rep.frame_operator_error),
                       run.tol("frame"), verdict=rep.verdict.verdict, affinity=rep.affinity)
        out.passed = out.passed and ok
        return out

    def mixture_guarded():
        try:
            return mixture()
        except ValueError as exc:
            return _flag("mixture_frame", False, error=str(exc))

    run.check("mixture_frame", mixture_guarded)


COMMANDS: dict[str, Callable[[Run], None]] = {
    "kernel-check": cmd_kernel_check,
    "sample": cmd_sample,
    "fbm-covariance": cmd_fbm_covariance,
    "fock-ccr": cmd_fock_ccr,
    "transforms": cmd_transforms,
    "singularity": cmd_singularity,
}


def _write_meta(out: Path, command: str, started: float, cfg: RunConfig, extra=None) -> None:
    meta = {"command": command, "timestamp": datetime.now(timezone.utc).isoformat(),
            "runtime_seconds": time.perf_counter() - started, "out": str(out)}
    meta.update(extra or {})
    dump_json(meta, out / f"{command}.meta.json")


def run_command(command: str, cfg: RunConfig) -> tuple[int, dict]:
    """Execute one subcommand (or ``all``) and write its artifacts."""
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    names = list(COMMANDS) if command == "all" else [command]
    summary = {}
    started_all = time.perf_counter()
    for name in names:
        started = time.perf_counter()
        run = Run(name, cfg, out)
        try:
            COMMANDS[name](run)
        except CndFockError as exc:
            run.checks.append(CheckReport(name, math.inf, math.nan, False,
                                          details={"error": f"{type(exc).__name__}: {exc}"}))
        report = run.report()
        dump_json(report, out / f"{name}.json")
        _write_meta(out, name, started, cfg)
        summary[name] = {"pass": run.passed,
                         "failed": [c.check for c in run.checks if not c.passed]}
    status = EXIT_OK if all(v["pass"] for v in summary.values()) else EXIT_FAIL
    if command == "all":
        dump_json({"schema_version": SCHEMA_VERSION, "command": "all", "config": cfg.echo(),
                   "tolerances": dict(sorted({k: cfg.tolerance(k) for k in DEFAULT_TOLERANCES}.items())),
                   "commands": summary, "pass": status == EXIT_OK}, out / "all.json")
        _write_meta(out, "all", started_all, cfg)
    return status, summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cndfock", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", metavar="DIR", help="output directory (default $CNDFOCK_OUT)")
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--lambda1", dest="lam1", type=float)
    common.add_argument("--lambda2", dest="lam2", type=float)
    common.add_argument("--model", choices=("l2", "fourier", "mixture"))
    common.add_argument("--mu", help="lebesgue | powerlaw:H | atoms:FILE | atoms:p@m;p@m")
    common.add_argument("--u", type=float, help="mixture weight")
    common.add_argument("--n", type=int, help="number of marginals for the affinity")
    common.add_argument("--modes", type=int, help="Fock modes d")
    common.add_argument("--degree", type=int, help="Fock truncation degree K")
    common.add_argument("--count", type=int, help="Monte Carlo sample count")
    common.add_argument("--tol", type=float, help="override every tolerance")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["all"]:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    overrides = {k: getattr(args, k) for k in ("seed", "out", "lam", "lam1", "lam2", "model",
                                               "mu", "u", "n", "modes", "degree", "count", "tol")}
    try:
        cfg = load_config(args.config, **overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status, summary = run_command(args.command, cfg)
    for name, res in summary.items():
        mark = "PASS" if res["pass"] else "FAIL " + ", ".join(res["failed"])
        print(f"{name}: {mark}")
    return status


if __name__ == "__main__":
    sys.exit(main())
