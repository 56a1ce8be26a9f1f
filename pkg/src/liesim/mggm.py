"""Fixed-Hamming-weight sectors and the modified generalized Gell-Mann basis.

Sector basis states are indexed 1..d, d = C(n, k).  The skew-Hermitian
basis elements are

    A(a,b) = |a><b| - |b><a|,   S(a,b) = i(|a><b| + |b><a|),   P(a) = i|a><a|

for a < b.  Their Hermitian partners (the engine convention) are -i times
these; brackets carry the same coefficients in either form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from .pauli import PRUNE_TOL, PauliString, PauliSum


# -- sector indexing ------------------------------------------------------------


@lru_cache(maxsize=None)
def revolving_door(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """k-subsets of range(n) in revolving-door order: neighbours swap one element."""
    if k == 0:
        return ((),)
    if k == n:
        return (tuple(range(n)),)
    head = revolving_door(n - 1, k)
    tail = tuple(c + (n - 1,) for c in reversed(revolving_door(n - 1, k - 1)))
    return head + tail


class SectorIndexer:
    """Bijection between weight-k bitstrings on n qubits and indices 1..C(n,k).

    Bitstrings are written with qubit 1 first.  ``ordering`` is either
    "lexicographic" (positions of the ones in lexicographic order) or
    "revolving-door" (consecutive states differ in exactly two bits).
    """

    def __init__(self, n: int, k: int, ordering: str = "lexicographic"):
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
        if ordering == "lexicographic":
            subsets = list(combinations(range(n), k))
        elif ordering in ("revolving-door", "gray"):
            subsets = list(revolving_door(n, k))
        else:
            raise ValueError(f"unknown ordering {ordering!r}")
        self.n, self.k, self.ordering = n, k, ordering
        self.states: list[int] = [sum(1 << (n - 1 - s) for s in c) for c in subsets]
        self._index = {v: i + 1 for i, v in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, bits: int | str) -> int:
        if isinstance(bits, str):
            bits = int(bits, 2)
        try:
            return self._index[bits]
        except KeyError:
            raise ValueError(f"{bits:0{self.n}b} is not in the weight-{self.k} sector") from None

    def bitstring(self, idx: int) -> str:
        return format(self.states[idx - 1], f"0{self.n}b")

    def state(self, idx: int) -> int:
        return self.states[idx - 1]

    def active_pairs(self, i: int, j: int) -> list[tuple[int, int]]:
        """Pairs (u, v): u has bits (0,1) on qubits (i, j), v is u with those bits swapped."""
        if i == j:
            raise ValueError("qubits must differ")
        bi, bj = 1 << (self.n - i), 1 << (self.n - j)
        out = []
        for u, s in enumerate(self.states, start=1):
            if not s & bi and s & bj:
                out.append((u, self._index[s ^ bi ^ bj]))
        return out


# -- basis elements -------------------------------------------------------------


class MGGMElement(NamedTuple):
    kind: str  # "A", "S" or "P"
    a: int
    b: int  # equals a for "P"

    def __str__(self) -> str:
        return f"P:{self.a}" if self.kind == "P" else f"{self.kind}:{self.a},{self.b}"

    @classmethod
    def from_text(cls, text: str) -> "MGGMElement":
        kind, _, rest = text.partition(":")
        idx = [int(t) for t in rest.split(",")]
        if kind == "P" and len(idx) == 1:
            return cls("P", idx[0], idx[0])
        if kind in ("A", "S") and len(idx) == 2 and idx[0] < idx[1]:
            return cls(kind, idx[0], idx[1])
        raise ValueError(f"bad MGGM label {text!r}")


def A(a: int, b: int) -> MGGMElement:
    return MGGMElement("A", a, b)


def S(a: int, b: int) -> MGGMElement:
    return MGGMElement("S", a, b)


def P(a: int) -> MGGMElement:
    return MGGMElement("P", a, a)


def validate_element(e: MGGMElement, d: int) -> None:
    ok = 1 <= e.a <= d and 1 <= e.b <= d
    ok = ok and (e.a == e.b if e.kind == "P" else e.a < e.b and e.kind in ("A", "S"))
    if not ok:
        raise ValueError(f"element {e} invalid for d={d}")


def all_elements(d: int) -> list[MGGMElement]:
    """Projectors first, then A and S over pairs a<b."""
    out = [P(a) for a in range(1, d + 1)]
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            out.append(A(a, b))
            out.append(S(a, b))
    return out


def mggm_norm_sq(e: MGGMElement) -> float:
    return 1.0 if e.kind == "P" else 2.0


class MGGMSum:
    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: dict[MGGMElement, float] | None = None):
        self.d = d
        self.terms: dict[MGGMElement, float] = {}
        for e, v in (terms or {}).items():
            if abs(v) > PRUNE_TOL:
                self.terms[e] = float(v)

    def add(self, e: MGGMElement, v: float) -> None:
        self.terms[e] = self.terms.get(e, 0.0) + v

    def pruned(self, tol: float = PRUNE_TOL) -> "MGGMSum":
        self.terms = {e: v for e, v in self.terms.items() if abs(v) > tol}
        return self

    def to_dict(self, n: int | None = None, k: int | None = None) -> dict:
        out = {"d": self.d, "terms": {str(e): v for e, v in sorted(self.terms.items())}}
        if n is not None:
            out["n"], out["k"] = n, k
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MGGMSum":
        d = int(data["d"]) if "d" in data else math.comb(int(data["n"]), int(data["k"]))
        out = cls(d)
        for text, v in data["terms"].items():
            e = MGGMElement.from_text(text)
            validate_element(e, d)
            out.add(e, float(v))
        return out.pruned()

    def allclose(self, other: "MGGMSum", tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys)

    def __repr__(self) -> str:
        return f"MGGMSum({self.to_dict()})"


# Formal index helpers: the closed-form rules produce A(x,y), S(x,y) with
# arbitrary order and possibly x == y.


def _a_term(x: int, y: int, c: int, out: dict) -> None:
    if x == y:
        return
    e, c = (A(x, y), c) if x < y else (A(y, x), -c)
    out[e] = out.get(e, 0) + c


def _s_term(x: int, y: int, c: int, out: dict) -> None:
    if x == y:
        e, c = P(x), 2 * c  # S(a,a) = 2i|a><a|
    else:
        e = S(min(x, y), max(x, y))
    out[e] = out.get(e, 0) + c


def _raw_bracket(u: MGGMElement, v: MGGMElement) -> dict[MGGMElement, int]:
    """Closed-form rules for the six kind pairs in canonical order."""
    out: dict[MGGMElement, int] = {}
    a, b, c, d = u.a, u.b, v.a, v.b
    ku, kv = u.kind, v.kind
    if ku == "P" and kv == "P":
        return out
    if ku == "A" and kv == "P":
        if b == c:
            _s_term(a, c, 1, out)
        if a == c:
            _s_term(b, c, -1, out)
    elif ku == "S" and kv == "P":
        if b == c:
            _a_term(a, c, -1, out)
        if a == c:
            _a_term(b, c, -1, out)
    elif ku == "A" and kv == "A":
        if b == c:
            _a_term(a, d, 1, out)
        if b == d:
            _a_term(a, c, -1, out)
        if a == c:
            _a_term(b, d, -1, out)
        if a == d:
            _a_term(b, c, 1, out)
    elif ku == "S" and kv == "S":
        if b == c:
            _a_term(a, d, -1, out)
        if b == d:
            _a_term(a, c, -1, out)
        if a == c:
            _a_term(b, d, -1, out)
        if a == d:
            _a_term(b, c, -1, out)
    elif ku == "A" and kv == "S":
        if b == c:
            _s_term(a, d, 1, out)
        if b == d:
            _s_term(a, c, 1, out)
        if a == c:
            _s_term(b, d, -1, out)
        if a == d:
            _s_term(b, c, -1, out)
    else:
        raise AssertionError((ku, kv))
    return {e: v for e, v in out.items() if v}


_CANONICAL = {("P", "P"), ("A", "P"), ("S", "P"), ("A", "A"), ("S", "S"), ("A", "S")}


def mggm_bracket(u: MGGMElement, v: MGGMElement) -> dict[MGGMElement, int]:
    """[u, v] over skew elements (equivalently i[H_u, H_v] over Hermitian ones).

    Coefficients are integers in {-2, ..., 2}.
    """
    if (u.kind, v.kind) in _CANONICAL:
        return _raw_bracket(u, v)
    return {e: -c for e, c in _raw_bracket(v, u).items()}


def mggm_sum_bracket(x: MGGMSum, y: MGGMSum) -> MGGMSum:
    out = MGGMSum(x.d)
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            for e, c in mggm_bracket(u, v).items():
                out.add(e, cu * cv * c)
    return out.pruned()


def partners(e: MGGMElement, d: int) -> list[MGGMElement]:
    """Basis elements that can have a nonzero bracket with ``e`` (they share an index)."""
    idx = {e.a, e.b}
    out = set()
    for x in idx:
        out.add(P(x))
        for y in range(1, d + 1):
            if y != x:
                out.add(A(min(x, y), max(x, y)))
                out.add(S(min(x, y), max(x, y)))
    return sorted(out)


# -- restriction of two-qubit HW-preserving generators --------------------------


@dataclass(frozen=True)
class HWParams:
    """Coefficients of E, S, R, J in H = e E + s S + r R + j J on a qubit pair."""

    e: float = 0.0
    s: float = 0.0
    r: float = 0.0
    j: float = 0.0


def hw_generator_pauli(n: int, i: int, j: int, prm: HWParams) -> PauliSum:
    """H_ij as a Pauli sum on all n qubits (qubits 1-based)."""

    def ps(letters: dict[int, str]) -> PauliString:
        return PauliString.from_sites(n, letters)

    out = PauliSum(n)
    out.add(PauliString.identity(n), prm.e / 2)
    out.add(ps({i: "Z", j: "Z"}), -prm.e / 2)
    out.add(ps({i: "Z"}), prm.s / 2)
    out.add(ps({j: "Z"}), -prm.s / 2)
    out.add(ps({i: "X", j: "X"}), prm.r / 2)
    out.add(ps({i: "Y", j: "Y"}), prm.r / 2)
    out.add(ps({i: "X", j: "Y"}), prm.j / 2)
    out.add(ps({i: "Y", j: "X"}), -prm.j / 2)
    return out.pruned()


def restrict_generator(idx: SectorIndexer, i: int, j: int, prm: HWParams) -> MGGMSum:
    """i*H_ij restricted to the sector, expanded over skew MGGM elements.

    For each active pair, u carries bits (0,1) on (i,j) and v carries (1,0).
    On span{u, v}: iE = P(u) + P(v), iS = P(u) - P(v), iR = S(u,v) and
    iJ = |v><u| - |u><v|, which is A(v,u) as a formal element.
    """
    out = MGGMSum(idx.dim)
    for u, v in idx.active_pairs(i, j):
        if prm.j:
            lo, hi = min(u, v), max(u, v)
            out.add(A(lo, hi), prm.j if v < u else -prm.j)
        if prm.r:
            out.add(S(min(u, v), max(u, v)), prm.r)
        out.add(P(u), prm.s + prm.e)
        out.add(P(v), prm.e - prm.s)
    return out.pruned()


def traceless_part(x: MGGMSum) -> MGGMSum:
    """Drop the component along the sector identity (sum of all P), i.e. the global phase."""
    d = x.d
    tr = sum(v for e, v in x.terms.items() if e.kind == "P")
    out = MGGMSum(d, dict(x.terms))
    for a in range(1, d + 1):
        out.add(P(a), -tr / d)
    return out.pruned()


def is_universal(prm: HWParams) -> bool:
    return prm.e != 0 and (prm.j != 0 or (prm.r != 0 and prm.s != 0))


def hw_algebra_dim(n: int) -> tuple[int, list[int]]:
    """sum_k C(n,k)^2 = C(2n, n) and the per-sector dimensions."""
    sectors = [math.comb(n, k) ** 2 for k in range(n + 1)]
    return math.comb(2 * n, n), sectors


# -- structure constants by index-pattern enumeration --------------------------


class MemoryBudgetError(MemoryError):
    pass


def mggm_structure_constants(d: int, max_entries: int = 50_000_000):
    """All nonzero brackets [x, y] = sum_z f z for x, y in ``all_elements(d)``.

    Only pairs sharing an index are visited, so the work is O(d^3).
    Returns (elements, {(ix, iy): [(iz, f), ...]}) over 0-based positions.
    """
    elems = all_elements(d)
    # each element has at most ~4d partners, each bracket at most 4 outputs
    estimate = len(elems) * 4 * d * 4
    if estimate > max_entries:
        raise MemoryBudgetError(f"d={d}: about {estimate} entries exceeds budget {max_entries}")
    pos = {e: i for i, e in enumerate(elems)}
    table: dict[tuple[int, int], list[tuple[int, float]]] = {}
    for x in elems:
        ix = pos[x]
        for y in partners(x, d):
            iy = pos[y]
            if iy <= ix:
                continue
            res = mggm_bracket(x, y)
            if not res:
                continue
            entry = [(pos[z], float(c)) for z, c in sorted(res.items(), key=lambda t: pos[t[0]])]
            table[(ix, iy)] = entry
            table[(iy, ix)] = [(z, -c) for z, c in entry]
    return elems, table
