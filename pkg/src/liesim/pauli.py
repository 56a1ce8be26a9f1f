"""Pauli strings in binary symplectic form and sparse Pauli sums.

Letters are encoded as bit pairs (x, y) with I=(0,0), X=(1,0), Y=(0,1),
Z=(1,1).  Qubit 1 is the leftmost letter and sits in the most significant
bit of the packed integers, so ``format(p.x, f"0{n}b")`` reads left to right.

The engine-facing bracket is ``i[P, Q] = coeff * R`` with ``coeff`` in {+2, -2}
for anticommuting strings and zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

PRUNE_TOL = 1e-12

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (0, 1), "Z": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class PauliParseError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PauliString:
    n: int
    x: int
    y: int

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        x = y = 0
        for ch in text:
            try:
                bx, by = _LETTER_BITS[ch]
            except KeyError:
                raise PauliParseError(f"bad Pauli letter {ch!r} in {text!r}") from None
            x = (x << 1) | bx
            y = (y << 1) | by
        return cls(len(text), x, y)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, site: int, letter: str) -> "PauliString":
        """Letter on qubit ``site`` (1-based), identity elsewhere."""
        return cls.from_sites(n, {site: letter})

    @classmethod
    def from_sites(cls, n: int, letters: dict[int, str]) -> "PauliString":
        chars = ["I"] * n
        for site, letter in letters.items():
            if not 1 <= site <= n:
                raise PauliParseError(f"site {site} outside 1..{n}")
            chars[site - 1] = letter
        return cls.from_text("".join(chars))

    def __str__(self) -> str:
        n = self.n
        return "".join(
            _BITS_LETTER[((self.x >> (n - 1 - j)) & 1, (self.y >> (n - 1 - j)) & 1)]
            for j in range(n)
        )

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def letter(self, site: int) -> str:
        shift = self.n - site
        return _BITS_LETTER[((self.x >> shift) & 1, (self.y >> shift) & 1)]

    @property
    def support_mask(self) -> int:
        return self.x | self.y

    @property
    def weight(self) -> int:
        return (self.x | self.y).bit_count()

    def support(self) -> list[int]:
        """Occupied qubits, 1-based, ascending."""
        mask = self.x | self.y
        return [j + 1 for j in range(self.n) if (mask >> (self.n - 1 - j)) & 1]

    def is_identity(self) -> bool:
        return (self.x | self.y) == 0

    def letter_counts(self) -> tuple[int, int, int]:
        """Number of X, Y and Z letters."""
        z = self.x & self.y
        return ((self.x & ~self.y).bit_count(), (self.y & ~self.x).bit_count(), z.bit_count())

    def symplectic(self) -> tuple[int, int]:
        """Standard (X-part, Z-part) bit masks: X=(1,0), Y=(1,1), Z=(0,1)."""
        return self.x ^ self.y, self.y

    def shift(self, k: int) -> "PauliString":
        """Cyclic translation moving the letter on qubit j to qubit j+k (mod n)."""
        n = self.n
        k %= n
        if k == 0:
            return self
        mask = (1 << n) - 1
        # moving right in the text means moving toward the least significant bit
        return PauliString(
            n,
            ((self.x >> k) | (self.x << (n - k))) & mask,
            ((self.y >> k) | (self.y << (n - k))) & mask,
        )


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the number of sites with distinct non-identity letters is even."""
    px, pz = p.x ^ p.y, p.y
    qx, qz = q.x ^ q.y, q.y
    return ((px & qz) ^ (pz & qx)).bit_count() % 2 == 0


def multiply(p: PauliString, q: PauliString) -> tuple[int, PauliString]:
    """Return (k, R) with P Q = i**k R."""
    if p.n != q.n:
        raise ValueError(f"length mismatch {p.n} vs {q.n}")
    px, pz = p.x ^ p.y, p.y
    qx, qz = q.x ^ q.y, q.y
    rx, rz = px ^ qx, pz ^ qz
    # each Hermitian letter is i**(x.z) X^x Z^z; swapping Z^z1 past X^x2 costs (-1)^(z1.x2)
    k = (px & pz).bit_count() + (qx & qz).bit_count() - (rx & rz).bit_count()
    k += 2 * (pz & qx).bit_count()
    return k % 4, PauliString(p.n, rx ^ rz, rz)


def ps_bracket(p: PauliString, q: PauliString) -> tuple[int, PauliString | None]:
    """i[P, Q] = coeff * R.  Returns (0, None) when P and Q commute."""
    k, r = multiply(p, q)
    if k % 2 == 0:
        return 0, None
    # [P,Q] = 2 i^k R, so i[P,Q] = 2 i^(k+1) R with k+1 even
    return (2 if (k + 1) % 4 == 0 else -2), r


class PauliSum:
    """Real linear combination of Hermitian Pauli strings on ``n`` qubits."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[PauliString, float] | None = None):
        self.n = n
        self.terms: dict[PauliString, float] = {}
        for p, c in (terms or {}).items():
            if p.n != n:
                raise ValueError(f"string {p} has length {p.n}, expected {n}")
            if abs(c) > PRUNE_TOL:
                self.terms[p] = float(c)

    @classmethod
    def from_dict(cls, n: int, data: dict[str, float]) -> "PauliSum":
        out = cls(n)
        for text, c in data.items():
            p = PauliString.from_text(text)
            if p.n != n:
                raise PauliParseError(f"{text!r} has length {p.n}, expected {n}")
            out.add(p, c)
        return out.pruned()

    def to_dict(self) -> dict[str, float]:
        return {str(p): c for p, c in sorted(self.terms.items(), key=lambda t: str(t[0]))}

    def add(self, p: PauliString, c: float) -> None:
        self.terms[p] = self.terms.get(p, 0.0) + c

    def pruned(self, tol: float = PRUNE_TOL) -> "PauliSum":
        self.terms = {p: c for p, c in self.terms.items() if abs(c) > tol}
        return self

    def __iter__(self) -> Iterator[tuple[PauliString, float]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        out = PauliSum(self.n, self.terms)
        for p, c in other.terms.items():
            out.add(p, c)
        return out.pruned()

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def scaled(self, s: float) -> "PauliSum":
        return PauliSum(self.n, {p: s * c for p, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PauliSum) and self.n == other.n and self.terms == other.terms

    def allclose(self, other: "PauliSum", tol: float = 1e-10) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys)

    def __repr__(self) -> str:
        return f"PauliSum(n={self.n}, {self.to_dict()})"


def sum_bracket(a: PauliSum, b: PauliSum) -> PauliSum:
    """Bilinear extension of ``ps_bracket``."""
    if a.n != b.n:
        raise ValueError(f"length mismatch {a.n} vs {b.n}")
    out = PauliSum(a.n)
    acc = out.terms
    for p, cp in a.terms.items():
        for q, cq in b.terms.items():
            coeff, r = ps_bracket(p, q)
            if coeff:
                acc[r] = acc.get(r, 0.0) + coeff * cp * cq
    return out.pruned()


def ps_inner_normalized(a: PauliSum, b: PauliSum) -> float:
    """Hilbert-Schmidt inner product divided by 2^n."""
    if len(a.terms) > len(b.terms):
        a, b = b, a
    return sum(c * b.terms.get(p, 0.0) for p, c in a.terms.items())


def all_strings(n: int) -> Iterable[PauliString]:
    for x in range(1 << n):
        for y in range(1 << n):
            yield PauliString(n, x, y)
