"""Representation adapters: one uniform interface over the four label types.

Every adapter exposes the engine bracket ``i[H_a, H_b]`` between labels as a
``{label: coeff}`` dict, the squared Hilbert-Schmidt norm of each label up to
the common factor ``hs_scale``, text parsing, and label expectation values
on the supported initial states.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import cycles, mggm, orbits
from .pauli import PauliString, ps_bracket
from .states import StateSpec, graph_orbit_sums, krawtchouk_orbit_value, pauli_expectation


class Representation:
    name = "abstract"
    hs_scale: float = 1.0

    def bracket(self, a, b) -> dict:
        raise NotImplementedError

    def norm_sq(self, label) -> float:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def text(self, label) -> str:
        return str(label)

    def is_identity(self, label) -> bool:
        return False

    def partners(self, label):
        """Labels that may fail to commute with ``label``, or None if unknown."""
        return None

    def expectation(self, label, state: StateSpec) -> float:
        raise NotImplementedError

    def manifest(self) -> dict:
        raise NotImplementedError

    def parse_map(self, data: dict) -> dict:
        out: dict = {}
        for k, v in data.items():
            lab = self.parse(k)
            out[lab] = out.get(lab, 0.0) + float(v)
        return out


class PauliRep(Representation):
    name = "pauli"

    def __init__(self, n: int):
        self.n = n
        self.hs_scale = 2.0**n

    def bracket(self, a: PauliString, b: PauliString) -> dict:
        c, r = ps_bracket(a, b)
        return {r: float(c)} if c else {}

    def norm_sq(self, label) -> float:
        return 1.0

    def parse(self, text: str) -> PauliString:
        p = PauliString.from_text(text)
        if p.n != self.n:
            raise ValueError(f"{text!r} has length {p.n}, expected {self.n}")
        return p

    def is_identity(self, label) -> bool:
        return label.is_identity()

    def expectation(self, label, state):
        return pauli_expectation(label, state)

    def manifest(self) -> dict:
        return {"representation": self.name, "n": self.n}


class CycleRep(Representation):
    name = "cycle"

    def __init__(self, n: int, bounded: bool = True):
        self.n = n
        self.hs_scale = 2.0**n
        self.bounded = bounded
        self._cache: dict = {}

    def bracket(self, a, b) -> dict:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            fn = cycles.cycle_bracket_bounded if self.bounded else cycles.cycle_bracket
            hit = fn(a, b).terms
            self._cache[key] = hit
        return hit

    def norm_sq(self, label) -> float:
        return cycles.cycle_norm_sq(label)

    def parse(self, text: str):
        c = cycles.PauliCycle.from_text(text)
        if c.n != self.n:
            raise ValueError(f"{text!r} has length {c.n}, expected {self.n}")
        return c

    def is_identity(self, label) -> bool:
        return label.is_identity()

    def expectation(self, label, state):
        ms = label.members()
        return sum(pauli_expectation(m, state) for m in ms) / len(ms)

    def manifest(self) -> dict:
        return {"representation": self.name, "n": self.n}


class OrbitRep(Representation):
    name = "orbit"

    def __init__(self, n: int):
        self.n = n
        self.hs_scale = 2.0**n
        self._cache: dict = {}

    def bracket(self, a, b) -> dict:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = orbits.orbit_bracket_full(self.n, a, b).terms
            self._cache[key] = hit
        return hit

    def norm_sq(self, label) -> float:
        return orbits.orbit_norm_sq(self.n, label)

    def parse(self, text: str):
        lab = orbits.OrbitLabel.from_text(text)
        orbits.validate_label(lab, self.n)
        return lab

    def is_identity(self, label) -> bool:
        return label.weight == 0

    def expectation(self, label, state):
        if state.kind == "graph":
            sums = _cached_graph_sums(self.n, tuple(sorted(map(tuple, state.edges))))
            return sums.get(tuple(label), 0) / orbits.orbit_term_count(self.n, label)
        if state.kind == "plus":
            return 1.0 if label.q == 0 and label.r == 0 else 0.0
        if state.kind in ("zero", "basis"):
            if label.p or label.q:
                return 0.0
            m = state.bits.count("1") if state.kind == "basis" else 0
            return krawtchouk_orbit_value(self.n, m, label.r)
        raise ValueError(f"state kind {state.kind!r} has no orbit expectation")

    def manifest(self) -> dict:
        return {"representation": self.name, "n": self.n}


@lru_cache(maxsize=256)
def _cached_graph_sums(n: int, edges: tuple) -> dict:
    return graph_orbit_sums(n, edges)


class MGGMRep(Representation):
    name = "mggm"
    hs_scale = 1.0

    def __init__(self, d: int, n: int | None = None, k: int | None = None):
        self.d, self.n, self.k = d, n, k

    @classmethod
    def for_sector(cls, n: int, k: int) -> "MGGMRep":
        import math

        return cls(math.comb(n, k), n, k)

    def bracket(self, a, b) -> dict:
        return {e: float(c) for e, c in mggm.mggm_bracket(a, b).items()}

    def norm_sq(self, label) -> float:
        return mggm.mggm_norm_sq(label)

    def parse(self, text: str):
        e = mggm.MGGMElement.from_text(text)
        mggm.validate_element(e, self.d)
        return e

    def partners(self, label):
        return mggm.partners(label, self.d)

    def expectation(self, label, state):
        if state.kind != "sector":
            raise ValueError("MGGM coordinates need a 'sector' state")
        return 1.0 if label.kind == "P" and label.a == state.index else 0.0

    def manifest(self) -> dict:
        return {"representation": self.name, "d": self.d, "n": self.n, "k": self.k}


def make_rep(name: str, n: int | None = None, k: int | None = None, d: int | None = None) -> Representation:
    if name == "pauli":
        return PauliRep(n)
    if name == "cycle":
        return CycleRep(n)
    if name == "orbit":
        return OrbitRep(n)
    if name == "mggm":
        if d is None:
            return MGGMRep.for_sector(n, k)
        return MGGMRep(d, n, k)
    raise ValueError(f"unknown representation {name!r}")
