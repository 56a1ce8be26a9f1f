"""Preprocessing benchmarks: structure-constant timings per family, power-law
fits of runtime against size, and candidate counts of the targeted orbit
bracket."""

from __future__ import annotations

import math
import time

import numpy as np
from scipy import stats

from . import models
from .config import ExperimentConfig, RunRecord
from .engine import lie_closure, structure_constants
from .mggm import mggm_structure_constants
from .orbits import OpCounter, labels_up_to_weight, orbit_bracket_targeted
from .reps import CycleRep, PauliRep

FAMILIES = ("tfim", "tfim-sum", "cycle", "orbit", "orbit-targeted", "mggm")


def _timed(fn, repeats: int) -> tuple[float, object]:
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _tfim(n: int, k: int):
    basis, _ = models.tfim_hva(n, 1)
    return len(basis), len(structure_constants(basis).entries)


def _tfim_sum(n: int, k: int):
    basis = lie_closure(models.tfim_summed_generators(n), PauliRep(n))
    return len(basis), len(structure_constants(basis).entries)


def _cycle(n: int, k: int):
    basis = lie_closure(models.tfim_cycle_generators(n), CycleRep(n))
    return len(basis), len(structure_constants(basis).entries)


def _orbit(n: int, k: int):
    basis = models.peqnn_basis(n, full=True)
    return len(basis), len(structure_constants(basis).entries)


def _orbit_targeted(n: int, k: int):
    return 0, targeted_candidate_count(n)


def _mggm(n: int, k: int):
    elems, table = mggm_structure_constants(math.comb(n, k))
    return len(elems), sum(len(v) for v in table.values())


BENCHES = {"tfim": _tfim, "tfim-sum": _tfim_sum, "cycle": _cycle, "orbit": _orbit, "orbit-targeted": _orbit_targeted, "mggm": _mggm}


def power_law_fit(sizes, seconds) -> dict:
    """Least-squares slope of log(time) on log(size) with a 95% interval."""
    x, y = np.log(np.asarray(sizes, float)), np.log(np.asarray(seconds, float))
    if len(x) < 3:
        return {"slope": float("nan"), "ci_low": float("nan"), "ci_high": float("nan")}
    res = stats.linregress(x, y)
    half = stats.t.ppf(0.975, len(x) - 2) * res.stderr
    return {"slope": float(res.slope), "ci_low": float(res.slope - half), "ci_high": float(res.slope + half), "r2": float(res.rvalue**2)}


def run_bench(cfg: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    """Time every requested family at every size.

    For mggm the sector dimension is C(n, k) with k from the config; for
    orbit-targeted the ``nonzeros`` column holds the candidate count.
    """
    records = []
    for fam in cfg.families:
        if fam not in BENCHES:
            raise ValueError(f"unknown benchmark family {fam!r}; expected one of {FAMILIES}")
        for n in cfg.n:
            sec, (dim, nnz) = _timed(lambda: BENCHES[fam](n, cfg.k), cfg.repeats)
            records.append(RunRecord("bench", cfg.digest(), n, cfg.seed, {"family": fam, "k": cfg.k, "dim": dim, "nonzeros": nnz, "seconds": sec}))
    return records


def fits(records: list[RunRecord]) -> dict[str, dict]:
    by: dict[str, list] = {}
    for r in records:
        by.setdefault(r.metrics["family"], []).append((r.n, r.metrics["seconds"]))
    return {f: power_law_fit(*zip(*rows)) for f, rows in by.items()}


def targeted_candidate_count(n: int, max_weight: int = 2) -> int:
    """Candidate tables enumerated when bracketing all pairs of weight at
    most ``max_weight`` onto every target of weight at most twice that."""
    labs = labels_up_to_weight(max_weight)[1:]
    targets = labels_up_to_weight(2 * max_weight)[1:]
    counter = OpCounter()
    for a in labs:
        for b in labs:
            orbit_bracket_targeted(n, a, b, targets, counter)
    return counter.candidates


__all__ = ["run_bench", "fits", "power_law_fit", "targeted_candidate_count"]
