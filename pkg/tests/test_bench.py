import math

import numpy as np
import pytest

from liesim import bench
from liesim.config import ExperimentConfig


def test_power_law_fit_recovers_synthetic_exponent():
    sizes = np.array([4, 8, 16, 32, 64])
    noise = np.exp(np.random.default_rng(0).normal(0, 0.01, len(sizes)))
    fit = bench.power_law_fit(sizes, 3e-4 * sizes**2.5 * noise)
    assert fit["slope"] == pytest.approx(2.5, abs=0.05)
    assert fit["ci_low"] < 2.5 < fit["ci_high"]


def test_single_size_gives_one_row_and_no_fit():
    cfg = ExperimentConfig("bench", n=[4], families=["tfim", "mggm"], k=1)
    recs = bench.run_bench(cfg)
    assert len(recs) == 2
    assert all(math.isnan(f["slope"]) for f in bench.fits(recs).values())


def test_bench_dimensions():
    cfg = ExperimentConfig("bench", n=[4], families=["tfim", "tfim-sum", "cycle", "orbit", "mggm"], k=2)
    dims = {r.metrics["family"]: r.metrics["dim"] for r in bench.run_bench(cfg)}
    assert dims == {"tfim": 28, "tfim-sum": 16, "cycle": 11, "orbit": 34, "mggm": 36}


@pytest.mark.parametrize("n", [10, 20, 40])
def test_targeted_candidate_count_is_size_independent(n):
    assert bench.targeted_candidate_count(n) == bench.targeted_candidate_count(8)


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        bench.run_bench(ExperimentConfig("bench", n=[4], families=["nope"]))
