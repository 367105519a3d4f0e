"""Run configuration: defaults, ``key = value`` files and flag overrides."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .cnd import CndModel, FourierType, L2Type, Mixture
from .errors import CndFockError
from .measures import parse_measure

OUT_ENV = "CNDFOCK_OUT"
MODELS = ("l2", "fourier", "mixture")

# module-level tolerances; every report echoes the ones it used
DEFAULT_TOLERANCES = {
    "scaling": 1e-9,
    "psd": 1e-9,
    "cnd": 1e-8,
    "moments_n_se": 4.0,
    "brownian": 1e-5,
    "fbm": 1e-3,
    "ccr": 1e-12,
    "adjointness": 1e-10,
    "exp_vector": 1e-12,
    "norm_identity": 1e-10,
    "wick": 1e-8,
    "t_isometry": 1e-12,
    "r_lambda": 1e-10,
    "intertwining": 1e-10,
    "affinity": 1e-12,
    "frame": 1e-8,
    "error_rate": 0.01,
    "equal_error_band": 0.05,
}


# statistical settings (standard-error multipliers, rate bands) are not numeric
# tolerances and ignore the global ``tol`` override
STATISTICAL = frozenset({"moments_n_se", "error_rate", "equal_error_band"})


class ConfigError(CndFockError, ValueError):
    """Invalid configuration; the CLI exits with status 2."""


@dataclass
class RunConfig:
    model: str = "l2"
    mu: str = "lebesgue"
    u: float = 0.5
    mix_u: float = 0.3
    mix_v: float = 0.7
    lam: float = 1.0
    lam1: float = 1.0
    lam2: float = 2.0
    n: int = 10
    basis_size: int = 32
    modes: int = 6
    degree: int = 10
    exp_degree: int = 20
    count: int = 1_000_000
    vector_count: int = 100_000
    csv_rows: int = 10_000
    trials: int = 2000
    experiment_n: int = 50
    seed: int = 0
    out: Optional[str] = None
    tol: Optional[float] = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        for name in ("u", "mix_u", "mix_v"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        for name in ("lam", "lam1", "lam2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("n", "basis_size", "modes", "experiment_n"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("degree", "exp_degree", "count", "vector_count", "csv_rows", "trials", "seed"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        try:
            self.measure()
        except (ValueError, OSError) as exc:
            raise ConfigError(f"bad measure spec {self.mu!r}: {exc}") from exc

    def measure(self):
        return parse_measure(self.mu)

    def build_model(self, mu=None) -> CndModel:
        mu = mu if mu is not None else self.measure()
        if self.model == "l2":
            return L2Type(mu)
        if self.model == "fourier":
            return FourierType(mu)
        return Mixture(mu, self.u)

    def tolerance(self, key: str) -> float:
        if key in self.tolerances:
            return self.tolerances[key]
        if self.tol is not None and key not in STATISTICAL:
            return self.tol
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get(OUT_ENV) or "cndfock-out")

    def echo(self) -> dict:
        """Every setting that affects data artifacts (the output directory does not)."""
        d = dataclasses.asdict(self)
        d.pop("out")
        return d

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_INT = {"n", "basis_size", "modes", "degree", "exp_degree", "count", "vector_count",
        "csv_rows", "trials", "experiment_n", "seed"}
_FLOAT = {"u", "mix_u", "mix_v", "lam", "lam1", "lam2"}
_ALIASES = {"lambda": "lam", "lambda1": "lam1", "lambda2": "lam2", "d": "modes", "K": "degree",
            "M": "count", "D": "basis_size"}


def _coerce(key: str, raw: str):
    try:
        if key in _INT:
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        if key in _FLOAT:
            return float(raw)
        if key == "tol":
            return None if raw.lower() in ("", "none") else float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    ``tol_<name> = x`` sets the tolerance of one check.
    """
    values: dict = {}
    tolerances: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key.startswith("tol_"):
            try:
                tolerances[key[4:]] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad tolerance {raw!r}") from exc
            continue
        if key not in _FIELDS or key == "tolerances":
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    if tolerances:
        values["tolerances"] = tolerances
    return values


def load_config(path=None, **overrides) -> RunConfig:
    """Defaults, then the file at ``path``, then non-None ``overrides``."""
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        values.update(parse_config_text(text))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
