import json

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from circuit_cases import CASES
from liesim.cycles import PauliCycle
from liesim.dense import commutator, finite_difference_gradient, hermitian
from liesim.engine import (
    AdjointAction,
    CircuitSpec,
    ClosureViolation,
    LieBasis,
    Simulator,
    StructureTensor,
    adjoint_matrix,
    adjoint_of,
    g_purity,
    g_purity_coords,
    ideal_decomposition,
    lie_closure,
    observable_coordinates,
    predict_variance,
    predict_variance_ideals,
    state_coordinates,
    structure_constants,
)
from liesim.models import tfim_cycle_generators, tfim_free_generators, tfim_summed_generators
from liesim.pauli import PauliString
from liesim.reps import CycleRep, PauliRep
from liesim.states import StateSpec


def _dense_vec(v, size=None):
    return sum(c * hermitian(lab, size) for lab, c in v.items())


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tfim_closure_dimensions(n):
    assert len(lie_closure(list(tfim_free_generators(n).values()), PauliRep(n))) == n * (2 * n - 1)
    assert len(lie_closure(tfim_summed_generators(n), PauliRep(n))) == n * n
    assert len(lie_closure(tfim_cycle_generators(n), CycleRep(n))) == 3 * n - 1


def test_pairs_mode_matches_generator_mode():
    gens = tfim_summed_generators(4)
    a = lie_closure(gens, PauliRep(4))
    b = lie_closure(gens, PauliRep(4), mode="pairs")
    assert len(a) == len(b)


def test_identity_generators_dropped():
    basis = lie_closure([{PauliString.from_text("II"): 1.0}, {PauliString.from_text("XI"): 1.0}], PauliRep(2))
    assert len(basis) == 1


def test_truncation_flag():
    gens = [{PauliString.from_text(s): 1.0} for s in ("XY", "ZI", "IX")]
    basis = lie_closure(gens, PauliRep(2), max_dim=4)
    assert basis.truncated and len(basis) == 4


def test_basis_is_orthogonal():
    basis = lie_closure(tfim_summed_generators(4), PauliRep(4))
    mats = [_dense_vec(v) for v in basis.vectors]
    gram = np.array([[np.trace(a @ b).real for b in mats] for a in mats]) / 16
    np.testing.assert_allclose(gram, np.diag(basis.norms), atol=1e-10)


def _structure_case():
    basis = lie_closure(tfim_summed_generators(3), PauliRep(3))
    return basis, structure_constants(basis)


def test_structure_constants_match_dense_brackets():
    basis, t = _structure_case()
    f = t.dense()
    mats = [_dense_vec(v) for v in basis.vectors]
    for a in range(len(basis)):
        for b in range(len(basis)):
            want = 1j * commutator(mats[a], mats[b])
            got = sum(f[a, b, c] * mats[c] for c in range(len(basis)))
            np.testing.assert_allclose(got, want, atol=1e-10)


def test_structure_constants_antisymmetric_and_jacobi():
    basis, t = _structure_case()
    f = t.dense()
    np.testing.assert_allclose(f, -f.transpose(1, 0, 2), atol=1e-12)
    # sum_d f[a,b,d] f[d,c,e] + cyclic = 0
    jac = np.einsum("abd,dce->abce", f, f)
    total = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
    assert np.abs(total).max() < 1e-10


def test_structure_export_round_trip(tmp_path):
    basis, t = _structure_case()
    path = tmp_path / "f.txt"
    t.export(path)
    header = json.loads(path.read_text().splitlines()[0][2:])
    assert header["dim"] == len(basis)
    back = StructureTensor.load(path, PauliRep(3))
    np.testing.assert_array_equal(back.dense(), t.dense())


def test_adjoint_from_tensor_matches_direct():
    basis, t = _structure_case()
    h = basis.vectors[0]
    coords = np.zeros(len(basis))
    coords[0] = 1.0
    np.testing.assert_allclose(adjoint_of(coords, t).toarray(), adjoint_matrix(h, basis).toarray(), atol=1e-12)


def test_observable_outside_span_rejected():
    basis = lie_closure([{PauliString.from_text("XI"): 1.0}], PauliRep(2))
    with pytest.raises(ClosureViolation):
        observable_coordinates({PauliString.from_text("ZZ"): 1.0}, basis)


def test_manifest_round_trip():
    basis = lie_closure(tfim_summed_generators(3), PauliRep(3))
    back = LieBasis.from_manifest(PauliRep(3), json.loads(json.dumps(basis.manifest())))
    assert len(back) == len(basis)
    for u, v in zip(back.vectors, basis.vectors):
        assert u.keys() == v.keys() and all(abs(u[k] - v[k]) < 1e-15 for k in u)


def test_circuit_spec_validation_and_round_trip():
    rep = PauliRep(2)
    gens = {"a": {PauliString.from_text("XI"): 1.0}}
    with pytest.raises(ValueError):
        CircuitSpec(gens, [("b", 0)])
    with pytest.raises(ValueError):
        CircuitSpec(gens, [("a", 1)])
    c = CircuitSpec(gens, [("a", 0), ("a", 1), ("a", 0)])
    assert c.num_params == 2
    assert CircuitSpec.from_dict(c.to_dict(rep), rep) == c


@pytest.mark.parametrize("family", sorted(CASES))
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_simulation_matches_dense(family, seed):
    rng = np.random.default_rng(seed)
    case = CASES[family](rng)
    sim = Simulator(case.basis, case.circuit)
    theta = rng.uniform(0, 2 * np.pi, case.circuit.num_params)
    val, grad = sim.value_and_grad(theta, case.e_in, case.w)
    assert val == pytest.approx(case.dense_value(theta), abs=1e-9)
    assert sim.expectation(theta, case.e_in, case.w) == pytest.approx(val, abs=1e-12)
    fd = finite_difference_gradient(case.dense_value, theta)
    np.testing.assert_allclose(grad, fd, atol=1e-6)


@given(st.integers(0, 10_000))
def test_adjoint_action_matches_expm_and_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    case = CASES["pauli"](rng, n=3)
    sq = np.sqrt(case.basis.norms)
    gid = next(iter(case.circuit.generators))
    phi = adjoint_matrix(case.circuit.generators[gid], case.basis)
    act = AdjointAction(phi, sq)
    u = rng.normal(size=len(case.basis))
    th = rng.uniform(-3, 3)
    want = sla.expm(th * act.s.toarray()) @ u
    got = act.apply(th, u)
    np.testing.assert_allclose(got, want, atol=1e-10)
    assert np.linalg.norm(got) == pytest.approx(np.linalg.norm(u))


def test_batched_propagation_matches_loop():
    rng = np.random.default_rng(5)
    case = CASES["orbit"](rng, n=4)
    sim = Simulator(case.basis, case.circuit)
    thetas = rng.uniform(0, 2 * np.pi, (7, case.circuit.num_params))
    batch = sim.propagate_batch(thetas, case.e_in)
    for i, th in enumerate(thetas):
        np.testing.assert_allclose(batch[:, i], sim.propagate(th, case.e_in), atol=1e-12)


def test_expm_fallback_agrees_with_spectral_path():
    rng = np.random.default_rng(3)
    case = CASES["mggm"](rng, n=5, k=2)
    sq = np.sqrt(case.basis.norms)
    h = next(iter(case.circuit.generators.values()))
    spectral = AdjointAction(adjoint_matrix(h, case.basis), sq)
    forced = AdjointAction(adjoint_matrix(h, case.basis), sq)
    forced.path = "expm"
    u = rng.normal(size=len(case.basis))
    np.testing.assert_allclose(spectral.apply(0.8, u), forced.apply(0.8, u), atol=1e-10)


def test_wrong_parameter_count_rejected():
    case = CASES["pauli"](np.random.default_rng(0), n=2)
    sim = Simulator(case.basis, case.circuit)
    with pytest.raises(ValueError):
        sim.propagate(np.zeros(case.circuit.num_params + 1), case.e_in)


def test_g_purity_operator_and_coordinate_forms_agree():
    n = 3
    basis = lie_closure(list(tfim_free_generators(n).values()), PauliRep(n))
    e = state_coordinates(StateSpec("plus"), basis)
    # |+><+| = 2^-n sum over X-type strings; only those in the basis count
    from itertools import product

    rho = {PauliString.from_text("".join(s)): 2.0**-n for s in product("IX", repeat=n)}
    assert g_purity(rho, basis) == pytest.approx(g_purity_coords(e, basis))


def test_ideals_of_simple_algebra():
    basis = lie_closure(list(tfim_free_generators(3).values()), PauliRep(3))
    ideals = ideal_decomposition(basis)
    assert [i.dim for i in ideals] == [15]  # so(6) is simple
    e = state_coordinates(StateSpec("plus"), basis)
    w = np.zeros(len(basis))
    w[0] = 1.0
    naive = predict_variance(g_purity_coords(e, basis), basis.rep.hs_scale * basis.norms[0], len(basis))
    assert predict_variance_ideals(e, w, basis, ideals) == pytest.approx(naive)


def test_ideals_split_reductive_algebra():
    # u(1) + su(2): {Z1} commutes with {X2, Y2, Z2}
    gens = [{PauliString.from_text(s): 1.0} for s in ("ZI", "IX", "IY")]
    basis = lie_closure(gens, PauliRep(2))
    dims = sorted(i.dim for i in ideal_decomposition(basis))
    assert dims == [1, 3]
    for ideal in ideal_decomposition(basis):
        p = ideal.projector
        np.testing.assert_allclose(p.T @ p, np.eye(ideal.dim), atol=1e-10)


def test_cycle_basis_state_coordinates_match_dense():
    from liesim.dense import basis_state, density

    n = 4
    basis = lie_closure([{PauliCycle.from_text("XXII"): 1.0}, {PauliCycle.from_text("ZIII"): 1.0}], CycleRep(n))
    rho = density(basis_state("0110"))
    e = state_coordinates(StateSpec("basis", bits="0110"), basis)
    want = [np.trace(_dense_vec(v) @ rho).real for v in basis.vectors]
    np.testing.assert_allclose(e, want, atol=1e-12)
