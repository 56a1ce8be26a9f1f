import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pauli_pairs
from liesim.dense import commutator, hermitian
from liesim.orbits import (
    ContingencyTable,
    OpCounter,
    OrbitLabel,
    OrbitSum,
    all_labels,
    factorials,
    labels_up_to_weight,
    orbit_bracket_full,
    orbit_bracket_targeted,
    orbit_expand,
    orbit_norm_sq,
    orbit_of,
    orbit_strings,
    orbit_sum_bracket,
    orbit_term_count,
    pi_algebra_dim,
    validate_label,
)
from liesim.pauli import PauliSum, ps_bracket

LETTER = {"X": 0, "Y": 1, "Z": 2, "I": 3}


def _table(p, q) -> ContingencyTable:
    cells = [[0] * 4 for _ in range(4)]
    for a, b in zip(str(p), str(q)):
        cells[LETTER[a]][LETTER[b]] += 1
    return ContingencyTable(tuple(map(tuple, cells)))


def brute_orbit_bracket(n, a, b) -> OrbitSum:
    """Expand both orbits into strings, bracket every pair, regroup by letter counts."""
    acc: dict = {}
    sa, sb = list(orbit_strings(n, a)), list(orbit_strings(n, b))
    for p in sa:
        for q in sb:
            c, r = ps_bracket(p, q)
            if c:
                acc[r] = acc.get(r, 0) + c
    out: dict = {}
    for r, c in acc.items():
        if c == 0:
            continue
        lab = orbit_of(r)
        # S_c averages N_c strings, so a per-string coefficient scales by N_c
        v = Fraction(c * orbit_term_count(n, lab), len(sa) * len(sb))
        assert out.setdefault(lab, v) == v, "output orbit must be uniformly populated"
    return OrbitSum(n, {k: float(v) for k, v in out.items()})


def test_sign_calibration_against_single_qubit_products():
    # i[S_100, S_001] at n=3: i[X_i, Z_i] = 2 Y_i, averaged over 3*3 pairs -> (2/3) S_010
    got = orbit_bracket_full(3, OrbitLabel(1, 0, 0), OrbitLabel(0, 0, 1))
    assert got.terms == pytest.approx({OrbitLabel(0, 1, 0): 2 / 3})


@given(pauli_pairs(max_n=6))
def test_table_sign_matches_string_bracket(pq):
    p, q = pq
    c, _ = ps_bracket(p, q)
    t = _table(p, q)
    if t.anticommuting_sites() % 2 == 0:
        assert c == 0
    else:
        assert c == 2 * t.sign()
        _, r = ps_bracket(p, q)
        assert t.output_label() == orbit_of(r)


@given(pauli_pairs(max_n=6))
def test_table_margins(pq):
    p, q = pq
    t = _table(p, q)
    assert t.row_sums()[:3] == p.letter_counts()
    assert t.col_sums()[:3] == q.letter_counts()
    assert t.multiplicity(factorials(p.n)) >= 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_full_bracket_matches_brute_force(n):
    labs = all_labels(n, include_identity=False)
    for a, b in itertools.product(labs, labs):
        assert orbit_bracket_full(n, a, b).allclose(brute_orbit_bracket(n, a, b), 1e-12), (a, b)


@pytest.mark.parametrize("n", [2, 3])
def test_full_bracket_matches_dense(n):
    labs = all_labels(n, include_identity=False)
    for a, b in itertools.product(labs, labs):
        got = orbit_bracket_full(n, a, b)
        want = 1j * commutator(hermitian(a, n), hermitian(b, n))
        have = hermitian(got) if got.terms else np.zeros_like(want)
        np.testing.assert_allclose(have, want, atol=1e-12)


@pytest.mark.parametrize("n", [4, 7, 12])
def test_targeted_equals_full(n):
    labs = labels_up_to_weight(3)[1:]
    targets = all_labels(n, include_identity=False)
    for a, b in itertools.product(labs, labs):
        if a.weight > n or b.weight > n:
            continue
        assert orbit_bracket_targeted(n, a, b, targets).allclose(orbit_bracket_full(n, a, b), 1e-12)


def test_targeted_candidate_count_independent_of_n():
    a, b = OrbitLabel(1, 1, 0), OrbitLabel(0, 1, 1)
    targets = labels_up_to_weight(4)
    counts = []
    for n in (10, 20, 40, 80):
        c = OpCounter()
        orbit_bracket_targeted(n, a, b, targets, c)
        counts.append(c.candidates)
    assert len(set(counts)) == 1 and counts[0] > 0


@given(st.integers(1, 7), st.data())
def test_term_count_matches_enumeration(n, data):
    lab = data.draw(st.sampled_from(all_labels(n)))
    assert orbit_term_count(n, lab) == sum(1 for _ in orbit_strings(n, lab))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_norm_matches_dense(n):
    for lab in all_labels(n):
        h = hermitian(lab, n)
        assert np.trace(h @ h).real / 2**n == pytest.approx(orbit_norm_sq(n, lab), rel=1e-12)


def test_term_count_overflow_guard():
    lab = OrbitLabel(20, 20, 20)
    exact = orbit_term_count(80, lab)
    assert exact > 2**63
    with pytest.raises(OverflowError):
        orbit_term_count(80, lab, fixed_width=True)


def test_label_validation():
    with pytest.raises(ValueError):
        validate_label(OrbitLabel(2, 2, 1), 4)
    assert OrbitLabel.from_text("1,0,2") == OrbitLabel(1, 0, 2)
    with pytest.raises(ValueError):
        OrbitLabel.from_text("1,2")


@given(st.integers(1, 200))
def test_sector_sum_identity(n):
    total, blocks = pi_algebra_dim(n)
    assert sum(blocks) == total == math.comb(n + 3, 3)


@given(st.integers(1, 30))
def test_vandermonde_identity(n):
    assert sum(math.comb(n, k) ** 2 for k in range(n + 1)) == math.comb(2 * n, n)


@given(st.integers(2, 5), st.data())
def test_bracket_antisymmetry_and_jacobi(n, data):
    labs = all_labels(n, include_identity=False)
    a, b, c = (OrbitSum(n, {data.draw(st.sampled_from(labs)): 1.0}) for _ in range(3))
    ab, ba = orbit_sum_bracket(a, b), orbit_sum_bracket(b, a)
    assert all(abs(ab.terms.get(k, 0) + ba.terms.get(k, 0)) < 1e-12 for k in set(ab.terms) | set(ba.terms))
    jac = OrbitSum(n)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        for k, v in orbit_sum_bracket(x, orbit_sum_bracket(y, z)).terms.items():
            jac.add(k, v)
    assert all(abs(v) < 1e-10 for v in jac.terms.values())


def test_expand_cap_and_dict_round_trip():
    with pytest.raises(ValueError):
        orbit_expand(13, OrbitLabel(1, 0, 0))
    s = OrbitSum(5, {OrbitLabel(1, 0, 2): 0.5})
    assert OrbitSum.from_dict(s.to_dict()).allclose(s)
    assert orbit_expand(3, OrbitLabel(1, 0, 0)).allclose(PauliSum.from_dict(3, {"XII": 1 / 3, "IXI": 1 / 3, "IIX": 1 / 3}))
