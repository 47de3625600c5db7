"""Run configuration: flat key-value files plus flag overrides."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

__all__ = ["RunConfig", "load_config_file", "config_from_args"]


@dataclass(frozen=True)
class RunConfig:
    family: str = ""
    radius: int = 1
    p_values: tuple[float, ...] = ()
    threshold: float = 0.99
    k_max: int = 200
    tol: float = 1e-10
    decay_tol: float = 1e-11
    seed: int = 0
    budget: int = 50_000
    out: str = "out"
    figures: bool = True
    workers: int = 1
    witness_samples: int = 2000

    def __post_init__(self):
        if self.budget <= 0 or self.k_max <= 0 or self.workers <= 0:
            raise ConfigError("budgets, k_max and workers must be positive")
        if self.tol <= 0 or self.decay_tol <= 0:
            raise ConfigError("tolerances must be positive")

    def out_dir(self) -> Path:
        return Path(self.out)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "radius": self.radius,
            "p_values": list(self.p_values),
            "threshold": self.threshold,
            "k_max": self.k_max,
            "tol": self.tol,
            "decay_tol": self.decay_tol,
            "seed": self.seed,
            "budget": self.budget,
            "out": self.out,
            "figures": self.figures,
            "workers": self.workers,
            "witness_samples": self.witness_samples,
        }


_PARSERS = {
    "family": str,
    "radius": int,
    "p_values": lambda s: tuple(float(t) for t in str(s).split(",") if t.strip()),
    "threshold": float,
    "k_max": int,
    "tol": float,
    "decay_tol": float,
    "seed": int,
    "budget": int,
    "out": str,
    "figures": lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
    "workers": int,
    "witness_samples": int,
}


def load_config_file(path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key == "p":
                key = "p_values"
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _PARSERS[key](val.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def config_from_args(args) -> RunConfig:
    """File values first, command-line flags on top."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    mapping = {
        "family": "family", "radius": "radius", "threshold": "threshold",
        "kmax": "k_max", "tol": "tol", "seed": "seed", "budget": "budget",
        "out": "out", "workers": "workers", "witness_samples": "witness_samples",
        "decay_tol": "decay_tol",
    }
    for arg_name, key in mapping.items():
        val = getattr(args, arg_name, None)
        if val is not None:
            values[key] = val
    p_arg = getattr(args, "p", None)
    if p_arg is not None:
        values["p_values"] = _PARSERS["p_values"](p_arg)
    if getattr(args, "no_figures", False):
        values["figures"] = False
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
