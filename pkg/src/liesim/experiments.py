"""The three numerical studies: TFIM variational optimization (with a noise
sweep), peQNN loss variance, and the fixed-Hamming-weight amplitude encoder."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.optimize import minimize

from . import models
from .config import ExperimentConfig, RunRecord
from .dense import tfim_exact_energy
from .engine import (
    Simulator,
    g_purity_coords,
    ideal_decomposition,
    observable_coordinates,
    predict_variance,
    predict_variance_ideals,
    state_coordinates,
)
from .mggm import P
from .states import StateSpec

log = logging.getLogger(__name__)


# -- TFIM variational optimization ---------------------------------------------


class TfimProblem:
    def __init__(self, n: int, layers: int, J: float, g: float, boundary: str = "open"):
        self.n = n
        self.basis, self.circuit = models.tfim_hva(n, layers, boundary)
        self.sim = Simulator(self.basis, self.circuit)
        self.e_in = state_coordinates(StateSpec("plus"), self.basis)
        self.w = observable_coordinates(models.tfim_hamiltonian(n, J, g, boundary), self.basis)
        self.e0 = tfim_exact_energy(n, J, g, boundary)

    def loss_and_grad(self, theta):
        return self.sim.value_and_grad(theta, self.e_in, self.w)

    def relative_error(self, energy: float) -> float:
        return (energy - self.e0) / abs(self.e0)


def optimize_once(problem: TfimProblem, seed: int, sigma: float = 0.0, max_iter: int = 2000, gtol: float = 1e-9, ftol: float = 1e-15) -> dict:
    """One L-BFGS-B run from Uniform[0, 2pi) parameters.

    With ``sigma > 0`` every loss value and every gradient component the
    optimizer sees is perturbed by independent N(0, sigma^2) noise; the
    reported error uses the noiseless energy at the returned point.
    """
    rng = np.random.default_rng(seed)
    theta0 = rng.uniform(0.0, 2 * np.pi, problem.circuit.num_params)
    calls = 0

    def fun(theta):
        nonlocal calls
        calls += 1
        f, g = problem.loss_and_grad(theta)
        if sigma:
            f = f + sigma * rng.standard_normal()
            g = g + sigma * rng.standard_normal(g.shape)
        return f, g

    t0 = time.perf_counter()
    res = minimize(fun, theta0, jac=True, method="L-BFGS-B", options={"maxiter": max_iter, "gtol": gtol, "ftol": ftol})
    energy, grad = problem.loss_and_grad(res.x)
    return {
        "energy": energy,
        "e0": problem.e0,
        "rel_error": problem.relative_error(energy),
        "grad_norm": float(np.linalg.norm(grad)),
        "iterations": int(res.nit),
        "evaluations": calls,
        "converged": bool(res.success),
        "message": str(res.message),
        "seconds": time.perf_counter() - t0,
        "sigma": sigma,
    }


def _tfim_task(args):
    n, layers, J, g, boundary, seed, sigma, max_iter, gtol, ftol = args
    problem = _problem_cache(n, layers, J, g, boundary)
    return optimize_once(problem, seed, sigma, max_iter, gtol, ftol)


_PROBLEMS: dict = {}


def _problem_cache(n, layers, J, g, boundary) -> TfimProblem:
    key = (n, layers, J, g, boundary)
    if key not in _PROBLEMS:
        _PROBLEMS[key] = TfimProblem(n, layers, J, g, boundary)
    return _PROBLEMS[key]


def _run_tasks(tasks, threads: int):
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_tfim_task, tasks))
    return [_tfim_task(t) for t in tasks]


def run_seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def run_tfim(cfg: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    seed = cfg.require_seed()
    records = []
    for n in cfg.n:
        layers = cfg.layers or n
        seeds = run_seeds(seed + n, cfg.runs)
        dim = len(_problem_cache(n, layers, cfg.J, cfg.g, cfg.boundary).basis)
        tasks = [(n, layers, cfg.J, cfg.g, cfg.boundary, s, 0.0, cfg.max_iter, cfg.gtol, cfg.ftol) for s in seeds]
        for s, m in zip(seeds, _run_tasks(tasks, threads)):
            m["layers"] = layers
            m["dim"] = dim
            records.append(RunRecord("tfim", cfg.digest(), n, s, m, "ok" if m["converged"] else "not-converged"))
            log.info("tfim n=%d seed=%d rel_error=%.3e", n, s, m["rel_error"])
    return records


def run_tfim_noise(cfg: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    seed = cfg.require_seed()
    records = []
    for n in cfg.n:
        layers = cfg.layers or n
        for sigma in cfg.sigmas:
            seeds = run_seeds(seed + n, cfg.runs)  # same starts for every sigma
            tasks = [(n, layers, cfg.J, cfg.g, cfg.boundary, s, float(sigma), cfg.max_iter, cfg.gtol, cfg.ftol) for s in seeds]
            for s, m in zip(seeds, _run_tasks(tasks, threads)):
                m["layers"] = layers
                records.append(RunRecord("tfim-noise", cfg.digest(), n, s, m, "ok" if m["converged"] else "not-converged"))
    return records


def summarize_noise(records: list[RunRecord]) -> dict[float, float]:
    """Mean relative error per noise level."""
    by: dict[float, list[float]] = {}
    for r in records:
        by.setdefault(r.metrics["sigma"], []).append(r.metrics["rel_error"])
    return {s: float(np.mean(v)) for s, v in sorted(by.items())}


# -- peQNN variance -----------------------------------------------------------


def variance_standard_error(x: np.ndarray) -> tuple[float, float]:
    """Unbiased sample variance and its standard error (fourth central moment formula)."""
    x = np.asarray(x, dtype=float)
    m = len(x)
    var = float(np.var(x, ddof=1))
    mu4 = float(np.mean((x - x.mean()) ** 4))
    se2 = (mu4 - (m - 3) / (m - 1) * var**2) / m
    return var, math.sqrt(max(se2, 0.0))


def peqnn_inputs(n: int, rng: np.random.Generator, graphs: int, max_component: int, basis):
    """Label-weighted mean of graph-state coordinates, (1/M) sum_i y_i e_i, with y = -1 for disconnected graphs."""
    e = np.zeros(len(basis))
    edge_sets = []
    for _ in range(graphs):
        edges = models.random_disconnected_graph(n, rng, max_component)
        edge_sets.append(edges)
        e -= state_coordinates(StateSpec("graph", edges=edges), basis)
    return e / graphs, edge_sets


def run_peqnn_variance(cfg: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    seed = cfg.require_seed()
    records = []
    for n in cfg.n:
        rng = np.random.default_rng([seed, n])
        t0 = time.perf_counter()
        basis = models.peqnn_basis(n)
        practical = models.peqnn_practical_layers(n)
        layers = practical * cfg.deep_factor if cfg.depth_mode == "deep" else practical
        circuit = models.peqnn_circuit(layers)
        sim = Simulator(basis, circuit)
        e_bar, _ = peqnn_inputs(n, rng, cfg.graphs, cfg.max_component, basis)
        w = observable_coordinates(models.peqnn_observable(), basis)
        losses = []
        batch = 250
        remaining = cfg.samples
        while remaining:
            b = min(batch, remaining)
            thetas = rng.uniform(0.0, 2 * np.pi, (b, circuit.num_params))
            losses.append(w @ sim.propagate_batch(thetas, e_bar))
            remaining -= b
        losses = np.concatenate(losses)
        var, se = variance_standard_error(losses)
        ideals = ideal_decomposition(basis)
        pred = predict_variance_ideals(e_bar, w, basis, ideals)
        obs_purity = float(np.sum((w * np.sqrt(basis.norms)) ** 2) * basis.rep.hs_scale)
        naive = predict_variance(g_purity_coords(e_bar, basis), obs_purity, len(basis))
        metrics = {
            "dim": len(basis),
            "layers": layers,
            "samples": cfg.samples,
            "mean": float(losses.mean()),
            "variance": var,
            "variance_se": se,
            "predicted": pred,
            "predicted_simple_formula": naive,
            "z_score": (var - pred) / se if se > 0 else float("nan"),
            "ideal_dims": ";".join(str(i.dim) for i in ideals),
            "seconds": time.perf_counter() - t0,
        }
        records.append(RunRecord("peqnn-variance", cfg.digest(), n, seed, metrics))
        log.info("peqnn n=%d var=%.4e +- %.1e pred=%.4e", n, var, se, pred)
    return records


def fit_power_law(ns, values) -> tuple[float, float]:
    """Slope of log(values) against log(n) and its standard error."""
    from scipy.stats import linregress

    res = linregress(np.log(ns), np.log(values))
    return float(res.slope), float(res.stderr)


# -- fixed-Hamming-weight encoder ------------------------------------------------


def run_hw_encoder(cfg: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    records = []
    for n in cfg.n:
        t0 = time.perf_counter()
        d = math.comb(n, cfg.k)
        target = models.q_gaussian_amplitudes(d, cfg.q, cfg.beta, cfg.grid) ** 2
        probs = encode_probabilities(n, cfg.k, cfg.q, cfg.beta, cfg.grid)
        rel = np.abs(probs - target) / target
        metrics = {
            "k": cfg.k,
            "d": d,
            "prob_sum": float(probs.sum()),
            "sum_error": float(abs(probs.sum() - 1.0)),
            "max_rel_error": float(rel.max()),
            "seconds": time.perf_counter() - t0,
        }
        records.append(RunRecord("hw-encode", cfg.digest(), n, cfg.seed, metrics))
    return records


def encode_probabilities(n: int, k: int, q: float = 1.5, beta: float = 2.0, grid=(-2.0, 2.0)) -> np.ndarray:
    """Probabilities read from the projector coordinates after the RBS cascade."""
    d = math.comb(n, k)
    amps = models.q_gaussian_amplitudes(d, q, beta, grid)
    theta = models.encoder_angles(amps)
    basis = models.full_mggm_basis(d, n, k)
    sim = Simulator(basis, models.encoder_circuit(d))
    e_in = np.zeros(len(basis))
    e_in[basis.index(P(1))] = 1.0
    e_out = sim.propagate(theta, e_in)
    return np.array([e_out[basis.index(P(a))] for a in range(1, d + 1)])


RUNNERS = {
    "tfim": run_tfim,
    "tfim-noise": run_tfim_noise,
    "peqnn-variance": run_peqnn_variance,
    "hw-encode": run_hw_encoder,
}
