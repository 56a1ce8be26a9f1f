"""Run one experiment config and write CSV plus manifest.

    python scripts/run_experiment.py scripts/configs/tfim.json --out results
"""

import argparse
import json
import logging
import time

from liesim import bench, experiments
from liesim.config import ExperimentConfig, write_records


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("--out", default="results")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    t0 = time.perf_counter()
    extra = {}
    if cfg.experiment == "bench":
        records = bench.run_bench(cfg)
        extra["fits"] = bench.fits(records)
    else:
        records = experiments.RUNNERS[cfg.experiment](cfg, threads=args.threads)
    if cfg.experiment == "tfim-noise":
        extra["mean_rel_error_by_sigma"] = experiments.summarize_noise(records)
    if cfg.experiment == "peqnn-variance" and len(cfg.n) > 1:
        slope, err = experiments.fit_power_law([r.n for r in records], [r.metrics["variance"] for r in records])
        extra["variance_exponent"] = {"slope": slope, "stderr": err}
    path = write_records(records, args.out, cfg.experiment, cfg, extra)
    print(f"{len(records)} rows -> {path} in {time.perf_counter() - t0:.1f}s")
    if extra:
        print(json.dumps(extra, indent=2, default=str))


if __name__ == "__main__":
    main()
