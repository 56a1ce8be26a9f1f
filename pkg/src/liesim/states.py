"""Expectation values of basis labels on the product, basis and graph states we simulate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np

from .orbits import OrbitLabel, orbit_term_count
from .pauli import PauliString, multiply

MAX_COMPONENT = 10


@dataclass
class StateSpec:
    """Initial state description.

    kind: "plus" (|+>^n), "zero" (|0>^n), "basis" (computational state
    ``bits``), "graph" (graph state on ``edges``, 1-based vertices),
    "sector" (sector basis state ``index``, 1-based) or "coords" (explicit
    coordinate vector).
    """

    kind: str
    bits: str | None = None
    edges: list[tuple[int, int]] = field(default_factory=list)
    index: int | None = None
    coords: np.ndarray | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "StateSpec":
        kind = data.get("kind")
        if kind not in ("plus", "zero", "basis", "graph", "sector", "coords"):
            raise ValueError(f"unknown state kind {kind!r}")
        coords = data.get("coords")
        return cls(
            kind=kind,
            bits=data.get("bits"),
            edges=[tuple(e) for e in data.get("edges", [])],
            index=data.get("index"),
            coords=None if coords is None else np.asarray(coords, dtype=float),
        )


# -- graph states ---------------------------------------------------------------


def _generators(m: int, adj: list[list[int]]) -> list[PauliString]:
    out = []
    for v in range(m):
        letters = {v + 1: "X"}
        for u in adj[v]:
            letters[u + 1] = "Z"
        out.append(PauliString.from_sites(m, letters))
    return out


def _stabilizer_group(m: int, adj: list[list[int]]) -> list[tuple[int, PauliString]]:
    """All 2^m elements as (sign, string) with sign in {+1, -1}."""
    gens = _generators(m, adj)
    elems: list[tuple[int, PauliString]] = [(0, PauliString.identity(m))]
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        k0, p0 = elems[mask & (mask - 1)]
        k1, r = multiply(p0, gens[low])
        elems.append(((k0 + k1) % 4, r))
    out = []
    for k, r in elems:
        if k % 2:
            raise AssertionError("stabilizer product picked up an imaginary phase")
        out.append((1 if k == 0 else -1, r))
    return out


@lru_cache(maxsize=4096)
def _component_histogram(m: int, edges: tuple[tuple[int, int], ...]) -> dict[tuple[int, int, int], int]:
    if m > MAX_COMPONENT:
        raise ValueError(f"graph component of size {m} exceeds the enumeration cap {MAX_COMPONENT}")
    adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    hist: dict[tuple[int, int, int], int] = {}
    for sign, r in _stabilizer_group(m, adj):
        key = r.letter_counts()
        hist[key] = hist.get(key, 0) + sign
    return hist


def _components(n: int, edges) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(edges)
    out = []
    for comp in sorted(nx.connected_components(g), key=min):
        order = {v: i for i, v in enumerate(sorted(comp))}
        local = tuple(sorted((min(order[a], order[b]), max(order[a], order[b])) for a, b in g.subgraph(comp).edges()))
        out.append((len(comp), local))
    return out


def graph_orbit_sums(n: int, edges) -> dict[tuple[int, int, int], int]:
    """sum over strings P with letter counts (p,q,r) of <G|P|G>, as exact integers."""
    total: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
    for m, local in _components(n, edges):
        hist = _component_histogram(m, local)
        nxt: dict[tuple[int, int, int], int] = {}
        for (p, q, r), c in total.items():
            for (p2, q2, r2), c2 in hist.items():
                key = (p + p2, q + q2, r + r2)
                nxt[key] = nxt.get(key, 0) + c * c2
        total = {k: v for k, v in nxt.items() if v}
    return total


def graph_state_orbit_coords(n: int, edges) -> dict[OrbitLabel, float]:
    """<G| S_pqr |G> for every orbit with a nonzero value."""
    return {OrbitLabel(*k): v / orbit_term_count(n, OrbitLabel(*k)) for k, v in graph_orbit_sums(n, edges).items()}


def graph_pauli_expectation(n: int, edges, p: PauliString) -> float:
    """<G|P|G> via the stabilizer group: nonzero only if +-P is a stabilizer."""
    xs, zs = p.symplectic()
    adj = {v: set() for v in range(1, n + 1)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    chosen = [v for v in range(1, n + 1) if (xs >> (n - v)) & 1]
    want_z = 0
    for v in chosen:
        for u in adj[v]:
            want_z ^= 1 << (n - u)
    if want_z != zs:
        return 0.0
    k, acc = 0, PauliString.identity(n)
    for v in chosen:
        letters = {v: "X", **{u: "Z" for u in adj[v]}}
        k1, acc = multiply(acc, PauliString.from_sites(n, letters))
        k = (k + k1) % 4
    assert acc == p
    return 1.0 if k == 0 else -1.0


# -- computational and product states -----------------------------------------


def pauli_expectation(p: PauliString, state: StateSpec) -> float:
    n = p.n
    if state.kind == "plus":
        return 1.0 if p.y == 0 else 0.0
    if state.kind in ("zero", "basis"):
        if p.x != p.y:  # anything but I and Z
            return 0.0
        bits = int(state.bits, 2) if state.kind == "basis" else 0
        return -1.0 if (p.x & bits).bit_count() % 2 else 1.0
    if state.kind == "graph":
        return graph_pauli_expectation(n, state.edges, p)
    raise ValueError(f"state kind {state.kind!r} has no Pauli-string expectation")


def krawtchouk_orbit_value(n: int, m: int, r: int) -> float:
    """<x| S_00r |x> for a computational state x of Hamming weight m."""
    return sum((-1) ** j * math.comb(m, j) * math.comb(n - m, r - j) for j in range(r + 1)) / math.comb(n, r)

