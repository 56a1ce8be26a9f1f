"""Dense-matrix reference implementations used to cross-check everything else.

Nothing here calls a symbolic bracket: operators are built from 2x2 letter
matrices with Kronecker products (or from matrix units for sectors) and
brackets are plain matrix commutators.
"""

from __future__ import annotations

from functools import reduce

import numpy as np
import scipy.linalg as sla

from .cycles import CycleSum, PauliCycle
from .mggm import MGGMElement, MGGMSum, SectorIndexer
from .orbits import OrbitLabel, OrbitSum, orbit_strings, orbit_term_count
from .pauli import PauliString, PauliSum

MAX_QUBITS = 12

LETTERS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense oracle limited to {MAX_QUBITS} qubits, got {n}")


def pauli_matrix(p: PauliString | str) -> np.ndarray:
    text = str(p)
    _check_size(len(text))
    return reduce(np.kron, (LETTERS[ch] for ch in text), np.eye(1, dtype=complex))


def hermitian(x, n: int | None = None, indexer: SectorIndexer | None = None) -> np.ndarray:
    """Hermitian matrix of a label or sum in the engine convention.

    Pauli strings map to themselves, cycles to the twirl T(P), orbits to the
    orbit average, MGGM elements to -i times the skew element.
    """
    if isinstance(x, PauliString):
        return pauli_matrix(x)
    if isinstance(x, PauliSum):
        out = np.zeros((2**x.n, 2**x.n), dtype=complex)
        for p, c in x.terms.items():
            out += c * pauli_matrix(p)
        return out
    if isinstance(x, PauliCycle):
        ms = x.members()
        return sum(pauli_matrix(m) for m in ms) / len(ms)
    if isinstance(x, CycleSum):
        return sum(c * hermitian(cyc) for cyc, c in x.terms.items())
    if isinstance(x, OrbitLabel):
        if n is None:
            raise ValueError("orbit labels need n")
        _check_size(n)
        total = sum(pauli_matrix(p) for p in orbit_strings(n, x))
        return total / orbit_term_count(n, x)
    if isinstance(x, OrbitSum):
        return sum(c * hermitian(lab, x.n) for lab, c in x.terms.items())
    if isinstance(x, MGGMElement):
        if n is None:
            raise ValueError("MGGM elements need the sector dimension d (pass n=d)")
        return -1j * mggm_skew(x, n)
    if isinstance(x, MGGMSum):
        return sum(c * hermitian(e, x.d) for e, c in x.terms.items())
    raise TypeError(f"cannot materialize {type(x).__name__}")


def mggm_skew(e: MGGMElement, d: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    a, b = e.a - 1, e.b - 1
    if e.kind == "A":
        m[a, b], m[b, a] = 1, -1
    elif e.kind == "S":
        m[a, b], m[b, a] = 1j, 1j
    else:
        m[a, a] = 1j
    return m


def materialize(x, n: int | None = None) -> np.ndarray:
    """Native matrix form: Pauli strings as-is, every other element in skew form i*H."""
    if isinstance(x, (PauliString, PauliSum)):
        return hermitian(x)
    if isinstance(x, MGGMElement):
        return mggm_skew(x, n)
    return 1j * hermitian(x, n)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def engine_bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """i[A, B] for Hermitian A, B."""
    return 1j * commutator(a, b)


def project(m: np.ndarray, labels, n: int | None = None) -> dict:
    """Coefficients c_l with m = sum c_l H_l (orthogonal labels), dropping |c| < 1e-12."""
    out = {}
    for lab in labels:
        h = hermitian(lab, n)
        c = np.vdot(h, m) / np.vdot(h, h)
        if abs(c) > 1e-12:
            out[lab] = c
    return out


def pauli_decompose(m: np.ndarray) -> PauliSum:
    """Expand a Hermitian 2^n x 2^n matrix in Pauli strings (brute force)."""
    n = int(round(np.log2(m.shape[0])))
    _check_size(n)
    out = PauliSum(n)
    from itertools import product

    for letters in product("IXYZ", repeat=n):
        p = PauliString.from_text("".join(letters))
        c = np.trace(pauli_matrix(p) @ m) / 2**n
        if abs(c) > 1e-12:
            out.add(p, c.real)
    return out.pruned()


# -- states -------------------------------------------------------------------


def basis_state(bits: str) -> np.ndarray:
    _check_size(len(bits))
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def plus_state(n: int) -> np.ndarray:
    _check_size(n)
    return np.full(2**n, 2 ** (-n / 2), dtype=complex)


def graph_state(n: int, edges) -> np.ndarray:
    """prod_{(u,v)} CZ_uv |+>^n with 1-based vertices."""
    v = plus_state(n)
    idx = np.arange(2**n)
    for a, b in edges:
        ba = (idx >> (n - a)) & 1
        bb = (idx >> (n - b)) & 1
        v = v * np.where(ba & bb, -1, 1)
    return v


def density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def sector_state(d: int, idx: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[idx - 1] = 1
    return v


# -- circuits -----------------------------------------------------------------


def evolve(gens: list[np.ndarray], thetas, rho: np.ndarray) -> np.ndarray:
    """Apply exp(-i theta_k H_k) in list order (first gate acts first)."""
    for h, th in zip(gens, thetas):
        u = sla.expm(-1j * th * h)
        rho = u @ rho @ u.conj().T
    return rho


def dense_expectation(gens: list[np.ndarray], thetas, rho: np.ndarray, obs: np.ndarray) -> float:
    return float(np.real(np.trace(obs @ evolve(gens, thetas, rho))))


def finite_difference_gradient(f, params, h: float = 1e-5) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    g = np.zeros_like(params)
    for i in range(len(params)):
        e = np.zeros_like(params)
        e[i] = h
        g[i] = (f(params + e) - f(params - e)) / (2 * h)
    return g


# -- transverse-field Ising reference ------------------------------------------


def tfim_pauli_sum(n: int, J: float, g: float, boundary: str = "open") -> PauliSum:
    """J sum Z_i Z_{i+1} - g sum X_i."""
    out = PauliSum(n)
    bonds = [(i, i + 1) for i in range(1, n)]
    if boundary == "periodic" and n > 2:
        bonds.append((n, 1))
    elif boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    for i, j in bonds:
        out.add(PauliString.from_sites(n, {i: "Z", j: "Z"}), J)
    for i in range(1, n + 1):
        out.add(PauliString.single(n, i, "X"), -g)
    return out.pruned()


def exact_ground_energy(h: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(h)[0])


def tfim_exact_energy(n: int, J: float, g: float, boundary: str = "open") -> float:
    """Ground energy of J sum ZZ - g sum X.

    Open chains use the free-fermion (Majorana) solution; periodic chains fall
    back to dense diagonalization, which caps them at 12 qubits.
    """
    if boundary == "periodic":
        return exact_ground_energy(hermitian(tfim_pauli_sum(n, J, g, "periodic")))
    if boundary != "open":
        raise ValueError(f"unknown boundary {boundary!r}")
    # Hadamard on every qubit swaps X and Z: J sum X_i X_{i+1} - g sum Z_i.
    # With Majoranas g_{2j-1}, g_{2j}: Z_j = -i g_{2j-1} g_{2j} and
    # X_j X_{j+1} = -i g_{2j} g_{2j+1}.  A term c(-i) g_a g_b enters the
    # antisymmetric matrix as A[a,b] = -2c, and E0 = -(1/4) sum |eig(iA)|.
    m = np.zeros((2 * n, 2 * n))
    for j in range(n):
        a, b = 2 * j, 2 * j + 1
        m[a, b] += 2 * g
        m[b, a] -= 2 * g
    for j in range(n - 1):
        a, b = 2 * j + 1, 2 * j + 2
        m[a, b] += -2 * J
        m[b, a] -= -2 * J
    ev = np.linalg.eigvalsh(1j * m)
    return float(-0.25 * np.sum(np.abs(ev)))
