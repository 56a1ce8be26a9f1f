import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liesim.dense import commutator, hermitian, mggm_skew
from liesim.engine import lie_closure
from liesim.mggm import (
    A,
    HWParams,
    MemoryBudgetError,
    MGGMElement,
    MGGMSum,
    P,
    S,
    SectorIndexer,
    all_elements,
    hw_algebra_dim,
    hw_generator_pauli,
    is_universal,
    mggm_bracket,
    mggm_norm_sq,
    mggm_structure_constants,
    partners,
    restrict_generator,
    revolving_door,
    traceless_part,
)
from liesim.models import hw_universal_generators
from liesim.reps import MGGMRep


def _skew_sum(terms: dict, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    for e, c in terms.items():
        out += c * mggm_skew(e, d)
    return out


@given(st.integers(1, 9), st.data())
def test_revolving_door_neighbours_swap_one_element(n, data):
    k = data.draw(st.integers(0, n))
    seq = revolving_door(n, k)
    assert len(seq) == math.comb(n, k) == len(set(seq))
    for s, t in zip(seq, seq[1:]):
        assert len(set(s) ^ set(t)) == 2


@pytest.mark.parametrize("ordering", ["lexicographic", "revolving-door"])
def test_indexer_round_trip(ordering):
    idx = SectorIndexer(6, 3, ordering)
    assert idx.dim == 20
    for i in range(1, idx.dim + 1):
        b = idx.bitstring(i)
        assert b.count("1") == 3
        assert idx.index(b) == i
    with pytest.raises(ValueError):
        idx.index("111100")


def test_lexicographic_order_starts_with_leftmost_ones():
    idx = SectorIndexer(4, 2)
    assert [idx.bitstring(i) for i in range(1, 7)] == ["1100", "1010", "1001", "0110", "0101", "0011"]


def test_label_text_round_trip_and_validation():
    for e in all_elements(4):
        assert MGGMElement.from_text(str(e)) == e
    with pytest.raises(ValueError):
        MGGMElement.from_text("A:2,1")
    assert str(A(1, 2)) == "A:1,2" and str(P(3)) == "P:3"


def test_norms_match_dense():
    d = 4
    for e in all_elements(d):
        m = mggm_skew(e, d)
        assert np.trace(m.conj().T @ m).real == mggm_norm_sq(e)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_brackets_match_matrix_units_exactly(d):
    els = all_elements(d)
    for u, v in itertools.product(els, els):
        got = _skew_sum(mggm_bracket(u, v), d)
        want = commutator(mggm_skew(u, d), mggm_skew(v, d))
        assert np.array_equal(got, want), (u, v)


@pytest.mark.parametrize("d", [3, 6])
def test_non_partners_commute(d):
    els = all_elements(d)
    for u in els:
        ps = set(partners(u, d))
        for v in els:
            if v not in ps:
                assert not mggm_bracket(u, v)


def test_structure_table_agrees_with_brackets():
    d = 5
    elems, table = mggm_structure_constants(d)
    for (i, j), items in table.items():
        assert {elems[z]: c for z, c in items} == mggm_bracket(elems[i], elems[j])
    nonzero = sum(1 for u, v in itertools.product(elems, elems) if mggm_bracket(u, v))
    assert nonzero == len(table)
    with pytest.raises(MemoryBudgetError):
        mggm_structure_constants(50, max_entries=1000)


hw_params = st.builds(HWParams, *(st.floats(-2, 2, allow_nan=False) for _ in range(4)))


@given(hw_params, st.integers(2, 5), st.data())
def test_restriction_matches_dense_sector_block(prm, n, data):
    k = data.draw(st.integers(1, n - 1))
    i, j = sorted(data.draw(st.lists(st.integers(1, n), min_size=2, max_size=2, unique=True)))
    if data.draw(st.booleans()):
        i, j = j, i
    ordering = data.draw(st.sampled_from(["lexicographic", "revolving-door"]))
    idx = SectorIndexer(n, k, ordering)
    h = hermitian(hw_generator_pauli(n, i, j, prm))
    rows = idx.states
    block = h[np.ix_(rows, rows)]
    np.testing.assert_allclose(_skew_sum(restrict_generator(idx, i, j, prm).terms, idx.dim), 1j * block, atol=1e-12)


def test_traceless_part_removes_trace():
    x = MGGMSum(3, {P(1): 1.0, P(2): 2.0, A(1, 2): 0.5})
    t = traceless_part(x)
    assert abs(sum(v for e, v in t.terms.items() if e.kind == "P")) < 1e-12
    assert t.terms[A(1, 2)] == 0.5


def test_universality_rule():
    assert is_universal(HWParams(e=1, j=1))
    assert is_universal(HWParams(e=1, r=1, s=1))
    assert not is_universal(HWParams(r=1, s=1))


@given(st.integers(1, 30))
def test_sector_dimensions_sum(n):
    total, sectors = hw_algebra_dim(n)
    assert sum(sectors) == total


@pytest.mark.parametrize("n", [3, 4, 5])
def test_single_excitation_closure_is_su_n(n):
    basis = lie_closure(hw_universal_generators(n, 1), MGGMRep.for_sector(n, 1))
    assert len(basis) == n * n - 1


def test_dict_round_trip():
    s = MGGMSum(6, {A(1, 2): 1.0, S(2, 5): -0.5, P(4): 2.0})
    back = MGGMSum.from_dict(s.to_dict(n=4, k=2))
    assert back.allclose(s)
