import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pauli_strings
from liesim.dense import basis_state, density, graph_state, hermitian, pauli_matrix
from liesim.orbits import OrbitLabel, all_labels
from liesim.states import (
    StateSpec,
    graph_orbit_sums,
    graph_pauli_expectation,
    graph_state_orbit_coords,
    krawtchouk_orbit_value,
    pauli_expectation,
)


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, sorted(edges)


@given(graphs(), st.data())
def test_graph_pauli_expectation_matches_statevector(g, data):
    n, edges = g
    p = data.draw(pauli_strings(n))
    psi = graph_state(n, edges)
    want = np.vdot(psi, pauli_matrix(p) @ psi).real
    assert graph_pauli_expectation(n, edges, p) == pytest.approx(want, abs=1e-12)


@given(graphs(max_n=5))
def test_graph_orbit_coordinates_match_dense(g):
    n, edges = g
    rho = density(graph_state(n, edges))
    coords = graph_state_orbit_coords(n, edges)
    for lab in all_labels(n):
        want = np.trace(hermitian(lab, n) @ rho).real
        assert coords.get(lab, 0.0) == pytest.approx(want, abs=1e-12), lab


def test_empty_graph_is_plus_state():
    coords = graph_state_orbit_coords(5, [])
    for lab in all_labels(5):
        expected = 1.0 if lab.q == 0 and lab.r == 0 else 0.0
        assert coords.get(lab, 0.0) == expected


def test_two_disjoint_edges_combine_componentwise():
    sums = graph_orbit_sums(4, [(1, 2), (3, 4)])
    single = graph_orbit_sums(2, [(1, 2)])
    # convolution of two identical component histograms
    conv: dict = {}
    for (a, ca), (b, cb) in itertools.product(single.items(), single.items()):
        k = tuple(x + y for x, y in zip(a, b))
        conv[k] = conv.get(k, 0) + ca * cb
    assert sums == {k: v for k, v in conv.items() if v}


def test_oversized_component_rejected():
    path = [(i, i + 1) for i in range(1, 11)]  # 11 vertices in one component
    with pytest.raises(ValueError):
        graph_orbit_sums(11, path)


@given(st.integers(1, 6), st.data())
def test_basis_state_expectations(n, data):
    bits = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    p = data.draw(pauli_strings(n))
    psi = basis_state(bits)
    want = np.vdot(psi, pauli_matrix(p) @ psi).real
    assert pauli_expectation(p, StateSpec("basis", bits=bits)) == pytest.approx(want)
    r = data.draw(st.integers(0, n))
    dense = np.trace(hermitian(OrbitLabel(0, 0, r), n) @ density(psi)).real
    assert krawtchouk_orbit_value(n, bits.count("1"), r) == pytest.approx(dense, abs=1e-12)


def test_state_spec_from_dict():
    s = StateSpec.from_dict({"kind": "graph", "edges": [[1, 2]]})
    assert s.edges == [(1, 2)]
    with pytest.raises(ValueError):
        StateSpec.from_dict({"kind": "bogus"})
