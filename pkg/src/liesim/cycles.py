"""Translation-invariant Pauli cycles on a ring of n qubits.

A cycle is stored by its canonical representative string.  The Hermitian
element it names is the translation twirl ``T(P) = (1/n) sum_k shift^k(P)``;
the skew form ``O_P = i T(P)`` only matters for the dense oracle.  A string
whose shift orbit has ``period`` distinct members therefore expands to
``(1/period) * sum`` over the distinct shifts.

Canonical form: the smallest shift under letterwise lexicographic order with
I < X < Y < Z, qubit 1 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .pauli import PRUNE_TOL, PauliParseError, PauliString, PauliSum, ps_bracket


def _letter_code(p: PauliString) -> int:
    # interleave so each qubit contributes 2*y + x: I=0, X=1, Y=2, Z=3
    code = 0
    for j in range(p.n - 1, -1, -1):
        code = (code << 2) | (((p.y >> j) & 1) << 1) | ((p.x >> j) & 1)
    return code


@lru_cache(maxsize=1 << 18)
def _canon(p: PauliString) -> tuple[PauliString, int]:
    seen = {}
    for k in range(p.n):
        s = p.shift(k)
        if s in seen:
            break
        seen[s] = _letter_code(s)
    rep = min(seen, key=seen.__getitem__)
    return rep, len(seen)


@dataclass(frozen=True, slots=True)
class PauliCycle:
    rep: PauliString

    @property
    def n(self) -> int:
        return self.rep.n

    @classmethod
    def of(cls, p: PauliString) -> "PauliCycle":
        return cls(_canon(p)[0])

    @classmethod
    def from_text(cls, text: str) -> "PauliCycle":
        return cls.of(PauliString.from_text(text))

    @property
    def period(self) -> int:
        return _canon(self.rep)[1]

    def members(self) -> list[PauliString]:
        """The distinct shifts of the representative."""
        return [self.rep.shift(k) for k in range(self.period)]

    def is_identity(self) -> bool:
        return self.rep.is_identity()

    def __str__(self) -> str:
        return str(self.rep)

    def __repr__(self) -> str:
        return f"PauliCycle({str(self.rep)!r})"


def canonical_cycle(p: PauliString) -> PauliCycle:
    return PauliCycle.of(p)


def cycle_norm_sq(c: PauliCycle) -> float:
    """tr(T(P)^2) / 2^n = 1 / period."""
    return 1.0 / c.period


class CycleSum:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[PauliCycle, float] | None = None):
        self.n = n
        self.terms: dict[PauliCycle, float] = {}
        for c, v in (terms or {}).items():
            if abs(v) > PRUNE_TOL:
                self.terms[c] = float(v)

    def add(self, c: PauliCycle, v: float) -> None:
        self.terms[c] = self.terms.get(c, 0.0) + v

    def pruned(self, tol: float = PRUNE_TOL) -> "CycleSum":
        self.terms = {c: v for c, v in self.terms.items() if abs(v) > tol}
        return self

    def to_dict(self) -> dict:
        return {"n": self.n, "terms": {str(c): v for c, v in sorted(self.terms.items(), key=lambda t: str(t[0]))}}

    @classmethod
    def from_dict(cls, data: dict) -> "CycleSum":
        n = int(data["n"])
        out = cls(n)
        for text, v in data["terms"].items():
            c = PauliCycle.from_text(text)
            if c.n != n:
                raise PauliParseError(f"{text!r} has length {c.n}, expected {n}")
            out.add(c, float(v))
        return out.pruned()

    def allclose(self, other: "CycleSum", tol: float = 1e-10) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys)

    def __repr__(self) -> str:
        return f"CycleSum({self.to_dict()})"


def cycle_expand(c: PauliCycle | CycleSum, coeff: float = 1.0) -> PauliSum:
    """Pauli-string expansion of T(P) (or of a sum of such)."""
    if isinstance(c, CycleSum):
        out = PauliSum(c.n)
        for cyc, v in c.terms.items():
            for p, w in cycle_expand(cyc, v).terms.items():
                out.add(p, w)
        return out.pruned()
    w = coeff / c.period
    return PauliSum(c.n, {p: w for p in c.members()})


def cycle_bracket(a: PauliCycle, b: PauliCycle) -> CycleSum:
    """i[T(P), T(P')] = (1/n) sum_k T(i[P, shift^k P'])."""
    n = a.n
    out = CycleSum(n)
    for k in range(n):
        coeff, r = ps_bracket(a.rep, b.rep.shift(k))
        if coeff:
            out.add(PauliCycle.of(r), coeff / n)
    return out.pruned()


def active_shifts(p: PauliString, q: PauliString) -> list[int]:
    """Shifts k for which p and shift^k(q) have overlapping support."""
    n = p.n
    return sorted({(x - y) % n for x in p.support() for y in q.support()})


def cycle_bracket_bounded(a: PauliCycle, b: PauliCycle) -> CycleSum:
    """Same result as ``cycle_bracket`` visiting at most weight(a)*weight(b) shifts."""
    n = a.n
    out = CycleSum(n)
    for k in active_shifts(a.rep, b.rep):
        coeff, r = ps_bracket(a.rep, b.rep.shift(k))
        if coeff:
            out.add(PauliCycle.of(r), coeff / n)
    return out.pruned()


def cycle_sum_bracket(a: CycleSum, b: CycleSum, bounded: bool = True) -> CycleSum:
    br = cycle_bracket_bounded if bounded else cycle_bracket
    out = CycleSum(a.n)
    for ca, va in a.terms.items():
        for cb, vb in b.terms.items():
            for c, v in br(ca, cb).terms.items():
                out.add(c, va * vb * v)
    return out.pruned()


def cycle_project(s: PauliSum, tol: float = 1e-10) -> CycleSum:
    """Inverse of ``cycle_expand`` for translation-invariant sums.

    Raises ValueError when ``s`` is not translation invariant.
    """
    out = CycleSum(s.n)
    seen: dict[PauliCycle, float] = {}
    for p, v in s.terms.items():
        c = PauliCycle.of(p)
        if c in seen:
            if abs(seen[c] - v) > tol:
                raise ValueError(f"sum is not translation invariant at {p}")
            continue
        seen[c] = v
        for m in c.members():
            if abs(s.terms.get(m, 0.0) - v) > tol:
                raise ValueError(f"sum is not translation invariant at {m}")
        out.add(c, v * c.period)
    return out.pruned()


# -- open chains: translation-invariant bulk plus boundary corrections --------


@dataclass
class ChainOperator:
    bulk: CycleSum
    defect: PauliSum

    def expand(self) -> PauliSum:
        return cycle_expand(self.bulk) + self.defect


class ChainStructureError(ValueError):
    pass


def open_chain_sum(s: PauliSum) -> tuple[CycleSum, PauliSum, PauliSum]:
    """Split a shift-structured open-chain sum into (bulk, left, right).

    All terms must be shifts of one template with a common coefficient.  The
    bulk is the full periodic sum; the missing wrap-around shifts become
    negative defect terms.  A missing term touching qubit n is a right defect,
    any other missing term is a left defect.
    """
    if not s.terms:
        raise ChainStructureError("empty sum")
    cycles = {PauliCycle.of(p) for p in s.terms}
    if len(cycles) != 1:
        raise ChainStructureError(f"terms are not shifts of one template: {sorted(map(str, s.terms))}")
    coeffs = set(round(v, 12) for v in s.terms.values())
    if len(coeffs) != 1:
        raise ChainStructureError("terms carry different coefficients")
    (cyc,) = cycles
    c = next(iter(s.terms.values()))
    n = s.n
    bulk = CycleSum(n, {cyc: c * cyc.period})
    left, right = PauliSum(n), PauliSum(n)
    last = 1  # bit of qubit n
    for m in cyc.members():
        if m in s.terms:
            continue
        target = right if (m.support_mask & last) else left
        target.add(m, -c)
    return bulk, left.pruned(), right.pruned()


def _cycle_local_bracket(cyc: PauliCycle, v: float, d: PauliSum, sign: float) -> PauliSum:
    """sign * i[v T(cyc), d], touching only shifts overlapping the defect terms."""
    n = cyc.n
    out = PauliSum(n)
    w = sign * v / n
    for q, cq in d.terms.items():
        for k in active_shifts(q, cyc.rep):
            shifted = cyc.rep.shift(k)
            coeff, r = ps_bracket(shifted, q)
            if coeff:
                out.add(r, w * coeff * cq)
    return out


def chain_bracket(a: ChainOperator, b: ChainOperator) -> ChainOperator:
    """Bracket of bulk+defect operators: bulk part by cycles, the rest locally."""
    from .pauli import sum_bracket

    n = a.bulk.n
    bulk = cycle_sum_bracket(a.bulk, b.bulk)
    defect = sum_bracket(a.defect, b.defect)
    for cyc, v in a.bulk.terms.items():
        defect = defect + _cycle_local_bracket(cyc, v, b.defect, 1.0)
    for cyc, v in b.bulk.terms.items():
        defect = defect + _cycle_local_bracket(cyc, v, a.defect, -1.0)
    return ChainOperator(bulk, defect.pruned() if defect.n == n else defect)
