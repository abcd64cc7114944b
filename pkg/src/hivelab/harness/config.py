"""Experiment configuration and its flat key=value file format."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

PROBE_NAMES = ("midpoint", "centroid", "corner")


def probe_vertex(name: str, n: int) -> tuple[int, int]:
    """Named probe positions in T = {0 <= i <= j <= n}."""
    if name == "midpoint":
        return (n // 2, n // 2)
    if name == "centroid":
        return (n // 3, 2 * n // 3)
    if name == "corner":
        return (1, n - 1)
    raise ValueError(f"unknown probe {name!r}; choose from {PROBE_NAMES}")


@dataclass
class ExperimentConfig:
    ns: list[int] = field(default_factory=lambda: [8, 32])
    trials: int = 200
    sigma_lambda: float = 1.0
    sigma_mu: float = 1.0
    seed: int = 0
    probes: list[str] = field(default_factory=lambda: list(PROBE_NAMES))
    output: str | None = None
    format: str = "csv"
    bootstrap: int = 1000
    validate: bool = True
    trace_tol: float = 1e-7
    weyl_tol: float = 1e-9
    max_failure_rate: float = 0.01
    workers: int = 1
    backend: str = "jacobi"

    def __post_init__(self):
        if self.trials < 2:
            raise ValueError("need at least 2 trials")
        if not (self.sigma_lambda > 0 and self.sigma_mu > 0):
            raise ValueError("sigma values must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        for n in self.ns:
            for p in self.probes:
                i, j = probe_vertex(p, n)
                if not (0 <= i <= j <= n) or (i, j) in ((0, 0), (0, n), (n, n)):
                    raise ValueError(f"probe {p} at {(i, j)} is a corner of T for n={n}")

    def effective_workers(self) -> int:
        cap = os.environ.get("HIVELAB_WORKERS")
        w = self.workers
        if cap:
            w = min(w, max(1, int(cap)))
        return max(1, w)


def _convert(name: str, raw: str):
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    if name not in kinds:
        raise KeyError(f"unknown config key {name!r}")
    kind = str(kinds[name])
    raw = raw.strip()
    if kind.startswith("list[int]"):
        return [int(t) for t in raw.replace(",", " ").split()]
    if kind.startswith("list[str]"):
        return [t for t in raw.replace(",", " ").split()]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "bool":
        return raw.lower() in ("1", "true", "yes", "on")
    if raw.lower() in ("", "none"):
        return None
    return raw


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys map to ExperimentConfig fields."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _convert(key, value)
    return out


def load_config(path=None, **overrides) -> ExperimentConfig:
    """File values first, then non-None overrides (e.g. from CLI flags)."""
    values = parse_config_text(Path(path).read_text()) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, list):
            v = " ".join(str(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


__all__ = ["ExperimentConfig", "PROBE_NAMES", "dump_config", "load_config", "parse_config_text", "probe_vertex"]
