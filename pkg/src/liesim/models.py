"""Ready-made generator sets, circuits and observables for the three model families."""

from __future__ import annotations

import math

import numpy as np

from . import mggm
from .cycles import PauliCycle
from .engine import CircuitSpec, LieBasis, lie_closure
from .orbits import OrbitLabel, all_labels
from .pauli import PauliString
from .reps import MGGMRep, OrbitRep, PauliRep


# -- transverse-field Ising ---------------------------------------------------


def tfim_bonds(n: int, boundary: str) -> list[tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(1, n)]
    if boundary == "periodic" and n > 2:
        bonds.append((n, 1))
    return bonds


def tfim_free_generators(n: int, boundary: str = "open") -> dict[str, dict]:
    """One generator per ZZ bond and per X site, in that order."""
    gens = {f"zz{i}_{j}": {PauliString.from_sites(n, {i: "Z", j: "Z"}): 1.0} for i, j in tfim_bonds(n, boundary)}
    gens.update({f"x{i}": {PauliString.single(n, i, "X"): 1.0} for i in range(1, n + 1)})
    return gens


def tfim_summed_generators(n: int, boundary: str = "open") -> list[dict]:
    zz = {PauliString.from_sites(n, {i: "Z", j: "Z"}): 1.0 for i, j in tfim_bonds(n, boundary)}
    x = {PauliString.single(n, i, "X"): 1.0 for i in range(1, n + 1)}
    return [zz, x]


def tfim_cycle_generators(n: int) -> list[dict]:
    """sum_i X_i and sum_i Z_i Z_{i+1} on a ring, each as n * T(P)."""
    return [{PauliCycle.from_text("X" + "I" * (n - 1)): float(n)}, {PauliCycle.from_text("ZZ" + "I" * (n - 2)): float(n)}]


def tfim_hamiltonian(n: int, J: float, g: float, boundary: str = "open") -> dict:
    out = {PauliString.from_sites(n, {i: "Z", j: "Z"}): J for i, j in tfim_bonds(n, boundary)}
    out.update({PauliString.single(n, i, "X"): -g for i in range(1, n + 1)})
    return out


def tfim_hva(n: int, layers: int, boundary: str = "open") -> tuple[LieBasis, CircuitSpec]:
    gens = tfim_free_generators(n, boundary)
    basis = lie_closure(list(gens.values()), PauliRep(n))
    gate_ids = list(gens)
    gates = []
    for ell in range(layers):
        for k, gid in enumerate(gate_ids):
            gates.append((gid, ell * len(gate_ids) + k))
    return basis, CircuitSpec(gens, gates)


# -- permutation-equivariant QNN ----------------------------------------------

PEQNN_GENERATORS = {"x": OrbitLabel(1, 0, 0), "y": OrbitLabel(0, 1, 0), "zz": OrbitLabel(0, 0, 2)}


def peqnn_generators() -> dict[str, dict]:
    return {g: {lab: 1.0} for g, lab in PEQNN_GENERATORS.items()}


def peqnn_practical_layers(n: int) -> int:
    """Layer count with 3L closest to (at least) C(n+3,3) - 1."""
    return math.ceil((math.comb(n + 3, 3) - 1) / 3)


def peqnn_circuit(layers: int) -> CircuitSpec:
    gens = peqnn_generators()
    gates = []
    for ell in range(layers):
        for k, gid in enumerate(("x", "y", "zz")):
            gates.append((gid, 3 * ell + k))
    return CircuitSpec(gens, gates)


def peqnn_basis(n: int, full: bool = False) -> LieBasis:
    """Closure of the three generators, or with ``full`` every non-identity orbit.

    The full permutation-invariant algebra contains the closure and is itself
    closed, so simulating in it gives the same expectation values.  Its basis
    is single-label and well conditioned, unlike the composite closure basis,
    which loses the gap between new and spurious directions beyond n = 13.
    """
    if full:
        return LieBasis.from_labels(OrbitRep(n), all_labels(n, include_identity=False))
    return lie_closure(list(peqnn_generators().values()), OrbitRep(n))


def peqnn_observable() -> dict:
    """2/(n(n-1)) sum_{i<j} X_i X_j is exactly the orbit average S_200."""
    return {OrbitLabel(2, 0, 0): 1.0}


def random_disconnected_graph(n: int, rng: np.random.Generator, max_component: int = 10, p: float = 0.5) -> list[tuple[int, int]]:
    """Random graph on n vertices with at least two components, none larger than ``max_component``.

    Vertices are shuffled and cut into blocks of random size (at most
    ``max_component`` and never all n), then each block gets an Erdos-Renyi
    graph with edge probability ``p``.  Blocks may split further, which only
    makes components smaller.
    """
    import networkx as nx

    if n < 2:
        raise ValueError("a disconnected graph needs at least two vertices")
    if max_component < 1:
        raise ValueError("max_component must be positive")
    cap = min(max_component, n - 1)
    order = rng.permutation(n) + 1
    edges = []
    pos = 0
    while pos < n:
        size = int(rng.integers(1, min(cap, n - pos) + 1))
        block = order[pos : pos + size]
        g = nx.gnp_random_graph(size, p, seed=int(rng.integers(2**31)))
        edges += [tuple(sorted((int(block[a]), int(block[b])))) for a, b in g.edges()]
        pos += size
    return sorted(edges)


# -- Hamming-weight encoder ------------------------------------------------------


def q_gaussian_amplitudes(d: int, q: float = 1.5, beta: float = 2.0, grid=(-2.0, 2.0)) -> np.ndarray:
    """sqrt of the normalized q-Gaussian (1 + (q-1) beta x^2)^(1/(1-q)) on d equidistant points."""
    x = np.linspace(grid[0], grid[1], d)
    if q == 1.0:
        p = np.exp(-beta * x**2)
    else:
        p = (1.0 + (q - 1.0) * beta * x**2) ** (1.0 / (1.0 - q))
    p = p / p.sum()
    return np.sqrt(p)


def encoder_angles(a: np.ndarray) -> np.ndarray:
    """Hyperspherical angles: theta_j = atan2(|a_{j+1:}|, a_j), last one atan2(a_d, a_{d-1})."""
    a = np.asarray(a, dtype=float)
    d = len(a)
    tail = np.sqrt(np.cumsum((a**2)[::-1])[::-1])  # tail[j] = |a_{j:}|
    th = np.empty(d - 1)
    for j in range(d - 2):
        th[j] = math.atan2(tail[j + 1], a[j])
    th[d - 2] = math.atan2(a[d - 1], a[d - 2])
    return th


def encoder_circuit(d: int) -> CircuitSpec:
    """Gates exp(-i theta_j H_A(j, j+1)) in order j = 1..d-1."""
    gens = {f"a{j}": {mggm.A(j, j + 1): 1.0} for j in range(1, d)}
    return CircuitSpec(gens, [(f"a{j}", j - 1) for j in range(1, d)])


def full_mggm_basis(d: int, n: int | None = None, k: int | None = None) -> LieBasis:
    return LieBasis.from_labels(MGGMRep(d, n, k), mggm.all_elements(d))


def hw_universal_generators(n: int, k: int, prm: mggm.HWParams | None = None, ordering: str = "lexicographic") -> list[dict]:
    """Traceless restrictions of nearest-neighbour HW generators to the weight-k sector."""
    prm = prm or mggm.HWParams(e=1.0, s=0.3, r=0.7, j=0.5)
    idx = mggm.SectorIndexer(n, k, ordering)
    return [mggm.traceless_part(mggm.restrict_generator(idx, i, i + 1, prm)).terms for i in range(1, n)]


__all__ = [
    "tfim_free_generators",
    "tfim_summed_generators",
    "tfim_cycle_generators",
    "tfim_hamiltonian",
    "tfim_hva",
    "peqnn_generators",
    "peqnn_circuit",
    "peqnn_basis",
    "peqnn_observable",
    "peqnn_practical_layers",
    "random_disconnected_graph",
    "q_gaussian_amplitudes",
    "encoder_angles",
    "encoder_circuit",
    "full_mggm_basis",
    "hw_universal_generators",
]
