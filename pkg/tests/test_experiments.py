import numpy as np
import pytest

from liesim import experiments, models
from liesim.config import ConfigError, ExperimentConfig
from liesim.engine import Simulator, observable_coordinates


def _strip(records):
    return [{k: v for k, v in r.row().items() if k != "seconds"} for r in records]


def test_tfim_two_qubits_exact():
    cfg = ExperimentConfig("tfim", n=[2], layers=2, runs=4, seed=3)
    recs = experiments.run_tfim(cfg)
    best = min(recs, key=lambda r: r.metrics["energy"])
    assert abs(best.metrics["energy"] - best.metrics["e0"]) < 1e-8


def test_tfim_zero_runs_gives_no_records():
    assert experiments.run_tfim(ExperimentConfig("tfim", n=[3], runs=0, seed=1)) == []


def test_stochastic_runs_need_seed():
    with pytest.raises(ConfigError):
        experiments.run_tfim(ExperimentConfig("tfim", n=[3], runs=1))


def test_tfim_variational_lower_bound_and_reproducibility():
    cfg = ExperimentConfig("tfim", n=[4], runs=3, seed=11)
    a = experiments.run_tfim(cfg)
    for r in a:
        if r.status == "ok":
            assert r.metrics["energy"] >= r.metrics["e0"] - 1e-9
    assert _strip(a) == _strip(experiments.run_tfim(cfg))


def test_zero_noise_reproduces_noiseless_runs():
    base = ExperimentConfig("tfim", n=[3], runs=2, seed=5)
    noisy = ExperimentConfig("tfim-noise", n=[3], runs=2, seed=5, sigmas=[0.0])
    a = [r.metrics["energy"] for r in experiments.run_tfim(base)]
    b = [r.metrics["energy"] for r in experiments.run_tfim_noise(noisy)]
    assert a == b


def test_huge_noise_gives_order_one_error():
    cfg = ExperimentConfig("tfim-noise", n=[4], runs=4, seed=2, sigmas=[10.0])
    mean = experiments.summarize_noise(experiments.run_tfim_noise(cfg))[10.0]
    assert mean > 0.3


def test_worker_pool_matches_serial():
    cfg = ExperimentConfig("tfim", n=[3], runs=2, seed=9)
    assert _strip(experiments.run_tfim(cfg, threads=2)) == _strip(experiments.run_tfim(cfg))


def test_variance_standard_error_against_resampling():
    rng = np.random.default_rng(0)
    x = rng.normal(size=400)
    var, se = experiments.variance_standard_error(x)
    assert var == pytest.approx(np.var(x, ddof=1))
    boots = [np.var(rng.choice(x, len(x)), ddof=1) for _ in range(2000)]
    assert se == pytest.approx(np.std(boots), rel=0.15)


def test_zero_observable_has_zero_variance():
    n = 3
    basis = models.peqnn_basis(n)
    sim = Simulator(basis, models.peqnn_circuit(2))
    rng = np.random.default_rng(0)
    e, _ = experiments.peqnn_inputs(n, rng, 3, 10, basis)
    losses = np.zeros(len(basis)) @ sim.propagate_batch(rng.uniform(0, 6.3, (50, 6)), e)
    assert experiments.variance_standard_error(losses)[0] == 0.0


def test_peqnn_deep_variance_matches_prediction_small():
    cfg = ExperimentConfig("peqnn-variance", n=[3], samples=1000, seed=4, deep_factor=5)
    r = experiments.run_peqnn_variance(cfg)[0]
    assert abs(r.metrics["z_score"]) < 3


def test_peqnn_practical_variance_decreases():
    cfg = ExperimentConfig("peqnn-variance", n=[4, 6, 8], samples=300, seed=1, depth_mode="practical")
    recs = experiments.run_peqnn_variance(cfg)
    slope, _ = experiments.fit_power_law([r.n for r in recs], [r.metrics["variance"] for r in recs])
    assert slope < 0


def test_hw_encoder_two_points_single_angle():
    th = 0.37
    assert models.encoder_angles(np.array([np.cos(th), np.sin(th)])) == pytest.approx([th])


def test_hw_encoder_basis_vector_stays_put():
    a = np.zeros(5)
    a[0] = 1.0
    np.testing.assert_allclose(models.encoder_angles(a), 0.0, atol=0)


def test_hw_encoder_small_sector():
    cfg = ExperimentConfig("hw-encode", n=[6], k=2)
    m = experiments.run_hw_encoder(cfg)[0].metrics
    assert m["d"] == 15 and m["sum_error"] < 1e-12 and m["max_rel_error"] < 1e-10


def test_encoder_probabilities_match_target():
    probs = experiments.encode_probabilities(5, 2)
    np.testing.assert_allclose(probs, models.q_gaussian_amplitudes(10) ** 2, rtol=1e-11)


def test_hamiltonian_coordinates_reproduce_exact_energy_at_optimum():
    # at n=2 the HVA reaches the ground state; its coordinates give E0 via w
    p = experiments.TfimProblem(2, 2, 1.0, 1.0)
    w = observable_coordinates(models.tfim_hamiltonian(2, 1.0, 1.0), p.basis)
    np.testing.assert_array_equal(w, p.w)
