"""Permutation-invariant Pauli orbits.

The orbit labelled (p, q, r) on n qubits is the set of strings with p X's,
q Y's and r Z's.  Its Hermitian element is the uniform average
``S_pqr = (1/N) sum_{P in orbit} P`` with ``N = n!/(p!q!r!s!)``; the skew
form used by the dense oracle is ``i S_pqr``.

Brackets come from summing over 4x4 contingency tables ``eta`` whose rows
(X, Y, Z, I) carry the letter counts of the first orbit and whose columns
carry the second.  Each admissible table contributes ``sign * W`` with
``W = n! / prod eta!`` to a single output orbit.  Sums are kept as exact
integers and converted to floats once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .pauli import PRUNE_TOL, PauliString, PauliSum

# Global sign relating the table parity rule to the engine bracket i[A, B].
# The per-table sign (-1)^(E + (D-1)/2) taken at face value gives
# i[S_100, S_001] = -(2/n) S_010, while a direct product of single-qubit
# Paulis gives +(2/n).  The dense-oracle tests pin this constant.
ORBIT_SIGN = -1

X, Y, Z, I = 0, 1, 2, 3


class OrbitLabel(NamedTuple):
    p: int
    q: int
    r: int

    def __str__(self) -> str:
        return f"{self.p},{self.q},{self.r}"

    @classmethod
    def from_text(cls, text: str) -> "OrbitLabel":
        parts = [int(t) for t in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != 3 or min(parts) < 0:
            raise ValueError(f"bad orbit label {text!r}")
        return cls(*parts)

    @property
    def weight(self) -> int:
        return self.p + self.q + self.r


def validate_label(label: OrbitLabel, n: int) -> None:
    if min(label) < 0 or label.weight > n:
        raise ValueError(f"orbit {tuple(label)} invalid for n={n}")


def all_labels(n: int, include_identity: bool = True) -> list[OrbitLabel]:
    out = []
    for w in range(0 if include_identity else 1, n + 1):
        for p in range(w, -1, -1):
            for q in range(w - p, -1, -1):
                out.append(OrbitLabel(p, q, w - p - q))
    return out


class FactorialTable:
    """Exact factorials 0..n_max as Python integers."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        self.values = [1] * (n_max + 1)
        for k in range(1, n_max + 1):
            self.values[k] = self.values[k - 1] * k

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def multinomial(self, parts) -> int:
        total = sum(parts)
        out = self.values[total]
        for k in parts:
            out //= self.values[k]
        return out


@lru_cache(maxsize=64)
def factorials(n: int) -> FactorialTable:
    return FactorialTable(n)


MAX_FIXED_WIDTH = (1 << 63) - 1


def orbit_term_count(n: int, label: OrbitLabel, fixed_width: bool = False) -> int:
    validate_label(label, n)
    s = n - label.weight
    count = factorials(n).multinomial((label.p, label.q, label.r, s))
    if fixed_width and count > MAX_FIXED_WIDTH:
        raise OverflowError(
            f"term count of {tuple(label)} at n={n} exceeds 64 bits; use fixed_width=False for exact integers"
        )
    return count


def orbit_norm_sq(n: int, label: OrbitLabel) -> float:
    """tr(S^2)/2^n = 1/N."""
    return 1.0 / orbit_term_count(n, label)


class OrbitSum:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[OrbitLabel, float] | None = None):
        self.n = n
        self.terms: dict[OrbitLabel, float] = {}
        for lab, v in (terms or {}).items():
            if abs(v) > PRUNE_TOL:
                self.terms[OrbitLabel(*lab)] = float(v)

    def add(self, lab: OrbitLabel, v: float) -> None:
        self.terms[lab] = self.terms.get(lab, 0.0) + v

    def pruned(self, tol: float = PRUNE_TOL) -> "OrbitSum":
        self.terms = {k: v for k, v in self.terms.items() if abs(v) > tol}
        return self

    def to_dict(self) -> dict:
        return {"n": self.n, "terms": {str(k): v for k, v in sorted(self.terms.items())}}

    @classmethod
    def from_dict(cls, data: dict) -> "OrbitSum":
        n = int(data["n"])
        out = cls(n)
        for text, v in data["terms"].items():
            lab = OrbitLabel.from_text(text)
            validate_label(lab, n)
            out.add(lab, float(v))
        return out.pruned()

    def allclose(self, other: "OrbitSum", tol: float = 1e-10) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys)

    def __repr__(self) -> str:
        return f"OrbitSum({self.to_dict()})"


# -- contingency tables -------------------------------------------------------

# off-diagonal non-identity pairs and the letter their product leaves behind
_PRODUCT = {(X, Y): Z, (Y, X): Z, (Y, Z): X, (Z, Y): X, (Z, X): Y, (X, Z): Y}
# pairs whose product carries -i (anticyclic order)
_ANTICYCLIC = ((Y, X), (Z, Y), (X, Z))


@dataclass(frozen=True)
class ContingencyTable:
    """4x4 table over (X, Y, Z, I); entry [A][B] counts sites with A on the left, B on the right."""

    cells: tuple[tuple[int, int, int, int], ...]

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.cells)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(self.cells[a][b] for a in range(4)) for b in range(4))

    def anticommuting_sites(self) -> int:
        return sum(self.cells[a][b] for (a, b) in _PRODUCT)

    def output_label(self) -> OrbitLabel:
        e = self.cells
        return OrbitLabel(
            e[X][I] + e[I][X] + e[Y][Z] + e[Z][Y],
            e[Y][I] + e[I][Y] + e[Z][X] + e[X][Z],
            e[Z][I] + e[I][Z] + e[X][Y] + e[Y][X],
        )

    def sign(self) -> int:
        d = self.anticommuting_sites()
        e = sum(self.cells[a][b] for (a, b) in _ANTICYCLIC)
        return ORBIT_SIGN * (-1 if (e + (d - 1) // 2) % 2 else 1)

    def multiplicity(self, fact: FactorialTable) -> int:
        out = fact[sum(self.row_sums())]
        for row in self.cells:
            for v in row:
                out //= fact[v]
        return out


def _sign_weight(e, fact: FactorialTable) -> tuple[int, OrbitLabel] | None:
    """Signed multiplicity and output label of a table given as a flat 16-tuple, or None if it commutes."""
    d = e[1] + e[2] + e[4] + e[6] + e[8] + e[9]
    if d % 2 == 0:
        return None
    anti = e[4] + e[9] + e[2]  # YX, ZY, XZ
    sgn = ORBIT_SIGN * (-1 if (anti + (d - 1) // 2) % 2 else 1)
    w = fact.values[sum(e)]
    for v in e:
        w //= fact.values[v]
    lab = OrbitLabel(e[3] + e[12] + e[6] + e[9], e[7] + e[13] + e[8] + e[2], e[11] + e[14] + e[1] + e[4])
    return sgn * w, lab


@dataclass
class OpCounter:
    """Counts enumerated candidate tables (innermost loop iterations)."""

    candidates: int = 0
    admissible: int = 0


def _compositions3(total: int, caps: tuple[int, int, int]):
    """Triples (a, b, c) with a+b+c <= total and a <= caps[0] etc."""
    for a in range(min(total, caps[0]) + 1):
        for b in range(min(total - a, caps[1]) + 1):
            for c in range(min(total - a - b, caps[2]) + 1):
                yield a, b, c


def _exact_bracket(n: int, a: OrbitLabel, b: OrbitLabel, counter: OpCounter | None = None) -> dict[OrbitLabel, int]:
    """Full enumeration.  Returns output label -> sum of sign * W (exact)."""
    validate_label(a, n)
    validate_label(b, n)
    fact = factorials(n)
    rows = (a.p, a.q, a.r, n - a.weight)
    cols = (b.p, b.q, b.r, n - b.weight)
    acc: dict[OrbitLabel, int] = {}
    cx, cy, cz = cols[0], cols[1], cols[2]
    for xx, xy, xz in _compositions3(rows[0], (cx, cy, cz)):
        xi = rows[0] - xx - xy - xz
        if xi > cols[3]:
            continue
        for yx, yy, yz in _compositions3(rows[1], (cx - xx, cy - xy, cz - xz)):
            yi = rows[1] - yx - yy - yz
            if xi + yi > cols[3]:
                continue
            for zx, zy, zz in _compositions3(rows[2], (cx - xx - yx, cy - xy - yy, cz - xz - yz)):
                if counter is not None:
                    counter.candidates += 1
                zi = rows[2] - zx - zy - zz
                # the identity row is forced by the column sums
                ix = cx - xx - yx - zx
                iy = cy - xy - yy - zy
                iz = cz - xz - yz - zz
                ii = cols[3] - xi - yi - zi
                if ii < 0 or ix + iy + iz + ii != rows[3]:
                    continue
                e = (xx, xy, xz, xi, yx, yy, yz, yi, zx, zy, zz, zi, ix, iy, iz, ii)
                res = _sign_weight(e, fact)
                if res is None:
                    continue
                if counter is not None:
                    counter.admissible += 1
                sw, lab = res
                acc[lab] = acc.get(lab, 0) + sw
    return acc


def _to_float(n: int, a: OrbitLabel, b: OrbitLabel, acc: dict[OrbitLabel, int]) -> OrbitSum:
    denom = orbit_term_count(n, a) * orbit_term_count(n, b)
    out = OrbitSum(n)
    for lab, total in acc.items():
        if total:
            out.terms[lab] = float(Fraction(2 * total, denom))
    return out


def orbit_bracket_full(n: int, a: OrbitLabel, b: OrbitLabel, counter: OpCounter | None = None) -> OrbitSum:
    """i[S_a, S_b] expanded over orbits, by enumerating every admissible table."""
    return _to_float(n, OrbitLabel(*a), OrbitLabel(*b), _exact_bracket(n, OrbitLabel(*a), OrbitLabel(*b), counter))


def _partitions4(total: int, caps: tuple[int, int, int, int]):
    for a in range(min(total, caps[0]) + 1):
        for b in range(min(total - a, caps[1]) + 1):
            for c in range(min(total - a - b, caps[2]) + 1):
                d = total - a - b - c
                if d <= caps[3]:
                    yield a, b, c, d


def orbit_bracket_targeted(
    n: int,
    a: OrbitLabel,
    b: OrbitLabel,
    targets,
    counter: OpCounter | None = None,
) -> OrbitSum:
    """Coefficients of i[S_a, S_b] on the requested target orbits only.

    Each target fixes how its X, Y and Z counts split over the four table
    cells that can produce that letter; the diagonal cells then follow from
    the row sums.  Targets with weight above n are skipped.
    """
    a, b = OrbitLabel(*a), OrbitLabel(*b)
    validate_label(a, n)
    validate_label(b, n)
    fact = factorials(n)
    rp, rq, rr, rs = a.p, a.q, a.r, n - a.weight
    cp, cq, cr, cs = b.p, b.q, b.r, n - b.weight
    acc: dict[OrbitLabel, int] = {}
    for t in targets:
        t = OrbitLabel(*t)
        if min(t) < 0 or t.weight > n:
            continue
        total = 0
        # X output: (XI, IX, YZ, ZY); Y output: (YI, IY, ZX, XZ); Z output: (ZI, IZ, XY, YX)
        for xi, ix, yz, zy in _partitions4(t.p, (min(rp, cs), min(rs, cp), min(rq, cr), min(rr, cq))):
            for yi, iy, zx, xz in _partitions4(t.q, (min(rq, cs), min(rs, cq), min(rr, cp), min(rp, cr))):
                for zi, iz, xy, yx in _partitions4(t.r, (min(rr, cs), min(rs, cr), min(rp, cq), min(rq, cp))):
                    if counter is not None:
                        counter.candidates += 1
                    xx = rp - xi - xy - xz
                    yy = rq - yi - yx - yz
                    zz = rr - zi - zx - zy
                    ii = rs - ix - iy - iz
                    if xx < 0 or yy < 0 or zz < 0 or ii < 0:
                        continue
                    if xx + yx + zx + ix != cp or xy + yy + zy + iy != cq or xz + yz + zz + iz != cr:
                        continue
                    if xi + yi + zi + ii != cs:
                        continue
                    e = (xx, xy, xz, xi, yx, yy, yz, yi, zx, zy, zz, zi, ix, iy, iz, ii)
                    res = _sign_weight(e, fact)
                    if res is None:
                        continue
                    if counter is not None:
                        counter.admissible += 1
                    total += res[0]
        if total:
            acc[t] = acc.get(t, 0) + total
    return _to_float(n, a, b, acc)


def orbit_sum_bracket(x: OrbitSum, y: OrbitSum) -> OrbitSum:
    out = OrbitSum(x.n)
    for la, va in x.terms.items():
        for lb, vb in y.terms.items():
            for lab, v in orbit_bracket_full(x.n, la, lb).terms.items():
                out.add(lab, va * vb * v)
    return out.pruned()


def orbit_strings(n: int, label: OrbitLabel):
    """Every string in the orbit (sites chosen for X, then Y, then Z)."""
    from itertools import combinations

    validate_label(label, n)
    sites = range(n)
    for xs in combinations(sites, label.p):
        rest = [s for s in sites if s not in xs]
        for ys in combinations(rest, label.q):
            rest2 = [s for s in rest if s not in ys]
            for zs in combinations(rest2, label.r):
                chars = ["I"] * n
                for s in xs:
                    chars[s] = "X"
                for s in ys:
                    chars[s] = "Y"
                for s in zs:
                    chars[s] = "Z"
                yield PauliString.from_text("".join(chars))


def orbit_expand(n: int, label: OrbitLabel | OrbitSum, coeff: float = 1.0, max_n: int = 12) -> PauliSum:
    """Pauli-string expansion of S_label; refuses n above ``max_n``."""
    if n > max_n:
        raise ValueError(f"orbit expansion at n={n} exceeds cap {max_n}")
    if isinstance(label, OrbitSum):
        out = PauliSum(n)
        for lab, v in label.terms.items():
            for p, w in orbit_expand(n, lab, v, max_n).terms.items():
                out.add(p, w)
        return out.pruned()
    label = OrbitLabel(*label)
    w = coeff / orbit_term_count(n, label)
    return PauliSum(n, {p: w for p in orbit_strings(n, label)})


def orbit_of(p: PauliString) -> OrbitLabel:
    return OrbitLabel(*p.letter_counts())


def pi_algebra_dim(n: int) -> tuple[int, list[int]]:
    """Dimension C(n+3,3) of the permutation-invariant algebra and its block sizes (n-2k+1)^2."""
    sectors = [(n - 2 * k + 1) ** 2 for k in range(n // 2 + 1)]
    return math.comb(n + 3, 3), sectors


def labels_up_to_weight(w: int) -> list[OrbitLabel]:
    return [OrbitLabel(p, q, r) for p in range(w + 1) for q in range(w + 1 - p) for r in range(w + 1 - p - q)]
