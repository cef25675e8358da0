"""Run configuration: one JSON document, every field defaulted."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # input: either the two wiki directories or a prebuilt edge list
    catalogue_dir: str | None = None
    pages_dir: str | None = None
    edge_list: str | None = None
    out_dir: str = "out"
    # noise model
    p: float = 0.1
    samples: int = 1000
    master_seed: int = 0
    workers: int = 1
    # solvers
    alpha: float = 0.85
    eig_tol: float = 1e-10
    pr_tol: float = 1e-10
    max_iter: int = 1000
    # reporting
    top_k: int = 35
    precision: int = 2

    def validate(self) -> "RunConfig":
        wiki_mode = self.catalogue_dir is not None or self.pages_dir is not None
        if wiki_mode and self.edge_list is not None:
            raise ConfigError("choose one input mode: wiki directories or edge_list")
        if wiki_mode and (self.catalogue_dir is None or self.pages_dir is None):
            raise ConfigError("wiki input needs both catalogue_dir and pages_dir")
        if not wiki_mode and self.edge_list is None:
            raise ConfigError("no input configured: set catalogue_dir/pages_dir "
                              "or edge_list")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must be in [0, 1], got {self.p}")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.precision < 0:
            raise ConfigError(f"precision must be >= 0, got {self.precision}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        return self


def load_config(path) -> RunConfig:
    """Read the JSON config; the 'noise' sub-object holds p/samples/
    master_seed, everything else is a top-level field."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    noise = data.pop("noise", {})
    if not isinstance(noise, dict):
        raise ConfigError("'noise' must be an object")
    merged = {**data, **{k: v for k, v in noise.items()}}
    known = {f.name for f in fields(RunConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return RunConfig(**merged).validate()


def apply_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """CLI flag overrides; None means 'not given'."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    if not changes:
        return cfg
    return replace(cfg, **changes).validate()
