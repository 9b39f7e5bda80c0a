"""Run configuration: defaults, JSON config files and the environment hook."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

ENV_VAR = "RADIAL_SYNTH_CONFIG"

DEFAULT_TOLERANCES = {
    "product-formula": 1e-8,
    "laplacian": 1e-5,
    "monomial": 1e-7,
    "commutativity": 1e-9,
    "eigenfunction": 1e-8,
    "lift-axis": 1e-14,
}


@dataclass(frozen=True)
class RunConfig:
    quad_order: int = 64
    series_tol: float = 1e-16
    max_terms: int = 200
    depth_cap: int = 3
    grid: str = "0:4:0.125"
    laplacian_grid: str = "0.1:5:0.1"
    laplacian_h: float = 1e-3
    richardson_band: tuple = (12.0, 20.0)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        for name in ("quad_order", "series_tol", "max_terms", "depth_cap", "laplacian_h"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")
        tols = dict(DEFAULT_TOLERANCES)
        tols.update(self.tolerances)
        if any(not v > 0 for v in tols.values()):
            raise ValueError("tolerances must be positive")
        object.__setattr__(self, "tolerances", tols)
        object.__setattr__(self, "richardson_band", tuple(float(x) for x in self.richardson_band))

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def merged(self, overrides: dict) -> "RunConfig":
        """A copy with ``overrides`` applied; ``tolerances`` merge key by key."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        overrides = dict(overrides)
        if "tolerances" in overrides:
            tols = dict(self.tolerances)
            tols.update(overrides["tolerances"])
            overrides["tolerances"] = tols
        return replace(self, **overrides)

    def to_json(self) -> dict:
        return asdict(self)


def load_config(path=None, env=None) -> RunConfig:
    """Defaults, then the file named by ``$RADIAL_SYNTH_CONFIG``, then ``path``."""
    env = os.environ if env is None else env
    cfg = RunConfig()
    for p in (env.get(ENV_VAR), path):
        if p:
            with open(p) as fh:
                cfg = cfg.merged(json.load(fh))
    return cfg


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:step`` inclusive of ``hi`` (within half a step), or a comma list."""
    if ":" not in text:
        return np.array([float(x) for x in text.split(",") if x.strip()])
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like lo:hi:step, got {text!r}")
    lo, hi, step = (float(x) for x in parts)
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {text!r}")
    n = int(np.floor((hi - lo) / step + 0.5)) + 1
    return lo + step * np.arange(n)


def parse_complex(text: str) -> complex:
    """``-1``, ``2.5``, ``1+1i``, ``1-2j``, ``3i``."""
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    return complex(t)


def parse_list(text: str, kind=float) -> list:
    return [kind(x) for x in text.split(",") if x.strip()]
