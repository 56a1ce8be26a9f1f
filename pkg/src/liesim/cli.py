"""Command-line front end.

    liesim closure  problem.json [--out DIR]
    liesim adjoint  problem.json [--out DIR]
    liesim simulate problem.json [--seed S] [--out DIR]
    liesim grad     problem.json [--seed S] [--out DIR]
    liesim experiment ID --config cfg.json [--seed S] [--out DIR] [--threads T]
    liesim bench --config cfg.json [--out DIR]

Results go to stdout as JSON (and to files under --out when given).  On
failure the exit code is nonzero and a JSON error object goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import bench, experiments
from .config import STOCHASTIC, ExperimentConfig, write_records
from .engine import (
    Simulator,
    adjoint_matrix,
    observable_coordinates,
    state_coordinates,
    structure_constants,
)
from .io import Problem, write_coordinates

log = logging.getLogger("liesim")


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, indent=2, default=float)
    sys.stdout.write("\n")


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cmd_closure(args) -> dict:
    prob = Problem.load(args.problem)
    t0 = time.perf_counter()
    basis = prob.closure()
    res = {"dim": len(basis), "truncated": basis.truncated, "single_label": basis.is_single_label, "seconds": time.perf_counter() - t0}
    out = _out_dir(args)
    if out:
        (out / "basis.json").write_text(json.dumps(basis.manifest(), indent=1))
        res["basis_file"] = str(out / "basis.json")
    return res


def cmd_adjoint(args) -> dict:
    prob = Problem.load(args.problem)
    basis = prob.closure()
    t0 = time.perf_counter()
    tensor = structure_constants(basis)
    res = {"dim": len(basis), "nonzero_pairs": len(tensor.entries), "seconds": time.perf_counter() - t0}
    out = _out_dir(args)
    if out:
        tensor.export(out / "structure.txt")
        res["structure_file"] = str(out / "structure.txt")
        if prob.circuit is not None:
            mats = {}
            for g, h in prob.circuit.generators.items():
                m = adjoint_matrix(h, basis).tocoo()
                mats[g] = [[int(i), int(j), float(v)] for i, j, v in zip(m.row, m.col, m.data)]
            (out / "adjoint.json").write_text(json.dumps(mats))
    return res


def _prepared(args):
    prob = Problem.load(args.problem)
    if prob.circuit is None or prob.state is None or not prob.observable:
        raise ValueError("simulate/grad need 'circuit', 'state' and 'observable'")
    basis = prob.closure()
    sim = Simulator(basis, prob.circuit)
    params = prob.params
    if params is None:
        rng = np.random.default_rng(args.seed)
        params = rng.uniform(0.0, 2 * np.pi, prob.circuit.num_params)
    e_in = state_coordinates(prob.state, basis)
    w = observable_coordinates(prob.observable, basis)
    offset = sum(c for k, c in prob.observable.items() if basis.rep.is_identity(k))
    return basis, sim, params, e_in, w, offset


def cmd_simulate(args) -> dict:
    basis, sim, params, e_in, w, offset = _prepared(args)
    e_out = sim.propagate(params, e_in)
    res = {"dim": len(basis), "expectation": float(w @ e_out) + offset, "params": params.tolist()}
    out = _out_dir(args)
    if out:
        write_coordinates(out / "e_out.csv", basis, e_out)
    return res


def cmd_grad(args) -> dict:
    basis, sim, params, e_in, w, offset = _prepared(args)
    val, grad = sim.value_and_grad(params, e_in, w)
    return {"dim": len(basis), "expectation": val + offset, "gradient": grad.tolist(), "params": params.tolist()}


def _config(args, experiment: str) -> ExperimentConfig:
    data = json.loads(Path(args.config).read_text()) if args.config else {}
    data.setdefault("experiment", experiment)
    if data["experiment"] != experiment:
        raise ValueError(f"config is for {data['experiment']!r}, not {experiment!r}")
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = ExperimentConfig.from_dict(data)
    if experiment in STOCHASTIC and experiment != "bench":
        cfg.require_seed()
    return cfg


def cmd_experiment(args) -> dict:
    cfg = _config(args, args.id)
    if args.id == "bench":
        return cmd_bench(args)
    t0 = time.perf_counter()
    records = experiments.RUNNERS[args.id](cfg, threads=args.threads)
    summary: dict = {"experiment": args.id, "records": len(records), "seconds": time.perf_counter() - t0}
    if args.id == "tfim-noise":
        summary["mean_rel_error_by_sigma"] = {str(s): v for s, v in experiments.summarize_noise(records).items()}
    if args.id == "peqnn-variance" and len(records) >= 2:
        ns = [r.n for r in records]
        slope, err = experiments.fit_power_law(ns, [r.metrics["variance"] for r in records])
        summary["variance_exponent"] = {"slope": slope, "stderr": err}
    out = _out_dir(args)
    if out:
        summary["csv"] = str(write_records(records, out, args.id, cfg, {"summary": summary}))
    else:
        summary["rows"] = [r.row() for r in records]
    return summary


def cmd_bench(args) -> dict:
    cfg = _config(args, "bench")
    records = bench.run_bench(cfg)
    fits = bench.fits(records)
    summary = {"experiment": "bench", "records": len(records), "fits": fits}
    out = _out_dir(args)
    if out:
        summary["csv"] = str(write_records(records, out, "bench", cfg, {"fits": fits}))
    else:
        summary["rows"] = [r.row() for r in records]
    return summary


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liesim", description="Lie-algebraic simulation of structured quantum circuits")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, problem=True):
        if problem:
            p.add_argument("problem", help="problem JSON file")
        p.add_argument("--config", help="experiment config JSON")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, default=1)

    for name, fn in (("closure", cmd_closure), ("adjoint", cmd_adjoint), ("simulate", cmd_simulate), ("grad", cmd_grad)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)
    p = sub.add_parser("experiment")
    p.add_argument("id", choices=sorted(experiments.RUNNERS) + ["bench"])
    common(p, problem=False)
    p.set_defaults(func=cmd_experiment)
    p = sub.add_parser("bench")
    common(p, problem=False)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        _emit(args.func(args))
    except Exception as exc:  # report every failure as JSON
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
