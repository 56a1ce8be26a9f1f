"""Experiment configuration and run records."""

from __future__ import annotations

import csv
import hashlib
import json
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy

EXPERIMENTS = ("tfim", "tfim-noise", "peqnn-variance", "hw-encode", "bench")
STOCHASTIC = ("tfim", "tfim-noise", "peqnn-variance", "bench")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    n: list[int] = field(default_factory=lambda: [4])
    seed: int | None = None
    runs: int = 10
    max_iter: int = 2000
    gtol: float = 1e-9
    ftol: float = 1e-15
    # transverse-field Ising
    J: float = 1.0
    g: float = 1.0
    boundary: str = "open"
    layers: int | None = None  # defaults to n
    sigmas: list[float] = field(default_factory=lambda: [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1])
    # permutation-equivariant QNN
    samples: int = 2000
    depth_mode: str = "deep"  # "deep" or "practical"
    deep_factor: int = 10
    graphs: int = 10
    max_component: int = 10
    # fixed-Hamming-weight encoder
    k: int = 2
    q: float = 1.5
    beta: float = 2.0
    grid: tuple[float, float] = (-2.0, 2.0)
    ordering: str = "revolving-door"
    # benchmarks
    families: list[str] = field(default_factory=lambda: ["tfim", "tfim-sum", "cycle", "orbit", "orbit-targeted", "mggm"])
    repeats: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        if isinstance(self.n, int):
            self.n = [self.n]
        self.n = [int(v) for v in self.n]
        if not self.n or min(self.n) < 1:
            raise ConfigError("n must be a non-empty list of positive integers")
        if self.boundary not in ("open", "periodic"):
            raise ConfigError(f"boundary must be open or periodic, got {self.boundary!r}")
        if self.depth_mode not in ("deep", "practical"):
            raise ConfigError(f"depth_mode must be deep or practical, got {self.depth_mode!r}")
        if self.runs < 0 or self.samples < 2 or self.max_iter < 1:
            raise ConfigError("runs must be >= 0, samples >= 2 and max_iter >= 1")
        self.grid = tuple(float(v) for v in self.grid)

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError(f"experiment {self.experiment!r} is stochastic and needs a seed")
        return int(self.seed)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        if "experiment" not in data:
            raise ConfigError("config needs an 'experiment' field")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]


def environment_stamp() -> dict:
    return {
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
        "time": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }


@dataclass
class RunRecord:
    experiment: str
    config_hash: str
    n: int
    seed: int | None
    metrics: dict
    status: str = "ok"

    def row(self) -> dict:
        out = {"experiment": self.experiment, "config_hash": self.config_hash, "n": self.n, "seed": self.seed, "status": self.status}
        for k, v in self.metrics.items():
            out[k] = v
        return out


def write_records(records: list[RunRecord], out_dir, name: str, config: ExperimentConfig | None = None, extra: dict | None = None) -> Path:
    """Append rows to ``<out>/<name>.csv`` and write a JSON manifest next to it."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.csv"
    rows = [r.row() for r in records]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    new = not path.exists()
    if not new:
        with open(path) as fh:
            header = next(csv.reader(fh), [])
        if header != cols:
            path = out / f"{name}-{int(time.time())}.csv"
            new = True
    with open(path, "a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        if new:
            w.writeheader()
        w.writerows(rows)
    manifest = {
        "csv": path.name,
        "rows": len(rows),
        "config": config.to_dict() if config else None,
        "config_hash": config.digest() if config else None,
        "environment": environment_stamp(),
        **(extra or {}),
    }
    with open(out / f"{name}.manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=_jsonable)
    return path


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x).__name__)
