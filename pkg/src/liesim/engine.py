"""Lie-algebraic simulation engine.

Conventions
-----------
Basis elements ``B_a`` are Hermitian and mutually orthogonal.  Each is stored
as a sparse vector over representation labels.  Structure constants are
defined by ``i[B_a, B_b] = sum_c f[a,b,c] B_c``.  The adjoint generator of a
Hermitian H has entries ``Phi[a,b]`` = coefficient of ``B_b`` in
``i[H, B_a]``, so with coordinates ``e_a = tr(B_a rho)`` a gate
``exp(-i theta H)`` maps ``e -> expm(theta Phi) e``.  Gates are applied in
list order, first gate first.

Internally everything runs in orthonormal coordinates ``u = e / sqrt(norm)``
where the adjoint generators are real antisymmetric.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import expm_multiply

from .reps import Representation
from .states import StateSpec

log = logging.getLogger(__name__)

PRUNE_TOL = 1e-12
INDEPENDENCE_TOL = 1e-10
# accepted directions whose relative residual falls below this sit too close
# to the rejection threshold for the independence decision to be trusted
GRAY_ZONE = 1e-7


class ClosureViolation(RuntimeError):
    pass


class RepresentationError(ValueError):
    pass


# -- sparse vectors over labels ----------------------------------------------


def bracket_vectors(rep: Representation, u: dict, v: dict) -> dict:
    out: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for r, c in rep.bracket(a, b).items():
                out[r] = out.get(r, 0.0) + ca * cb * c
    return {k: c for k, c in out.items() if abs(c) > PRUNE_TOL}


def inner(rep: Representation, u: dict, v: dict) -> float:
    if len(u) > len(v):
        u, v = v, u
    return sum(c * v.get(k, 0.0) * rep.norm_sq(k) for k, c in u.items())


class LieBasis:
    """Orthogonal basis of a subalgebra, each element a sparse vector over labels."""

    def __init__(self, rep: Representation, vectors: list[dict] | None = None, truncated: bool = False):
        self.rep = rep
        self.vectors: list[dict] = []
        self.norms_list: list[float] = []
        self._by_label: dict = {}
        self.truncated = truncated
        self.min_accepted = 1.0  # smallest relative residual accepted by the closure
        for v in vectors or []:
            self._append(v)

    # construction
    def _append(self, v: dict) -> int:
        alpha = len(self.vectors)
        self.vectors.append(v)
        self.norms_list.append(inner(self.rep, v, v))
        for lab, c in v.items():
            self._by_label.setdefault(lab, []).append((alpha, c))
        return alpha

    @classmethod
    def from_labels(cls, rep: Representation, labels) -> "LieBasis":
        return cls(rep, [{lab: 1.0} for lab in labels])

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def norms(self) -> np.ndarray:
        return np.asarray(self.norms_list)

    @property
    def is_single_label(self) -> bool:
        return all(len(v) == 1 and next(iter(v.values())) == 1.0 for v in self.vectors)

    @property
    def labels(self) -> list:
        if not self.is_single_label:
            raise RepresentationError("basis elements are combinations of several labels")
        return [next(iter(v)) for v in self.vectors]

    def index(self, label) -> int:
        hits = self._by_label.get(label)
        if not hits or len(self.vectors[hits[0][0]]) != 1:
            raise KeyError(label)
        return hits[0][0]

    def overlaps(self, v: dict) -> dict[int, float]:
        """alpha -> <B_alpha, v> for elements sharing a label with v."""
        out: dict[int, float] = {}
        norm = self.rep.norm_sq
        for lab, c in v.items():
            for alpha, b in self._by_label.get(lab, ()):
                out[alpha] = out.get(alpha, 0.0) + b * c * norm(lab)
        return out

    def project(self, v: dict) -> tuple[dict[int, float], float]:
        """Coordinates of v in this basis and the squared norm of what is left over."""
        ov = self.overlaps(v)
        coords = {a: s / self.norms_list[a] for a, s in ov.items()}
        total = inner(self.rep, v, v)
        captured = sum(c * c * self.norms_list[a] for a, c in coords.items())
        return coords, max(total - captured, 0.0)

    def residual(self, v: dict) -> dict:
        out = dict(v)
        for a, s in self.overlaps(v).items():
            f = s / self.norms_list[a]
            for lab, b in self.vectors[a].items():
                out[lab] = out.get(lab, 0.0) - f * b
        return {k: c for k, c in out.items() if abs(c) > PRUNE_TOL}

    def manifest(self) -> dict:
        rep = self.rep
        return {
            **rep.manifest(),
            "dim": len(self),
            "truncated": self.truncated,
            "elements": [{rep.text(k): c for k, c in v.items()} for v in self.vectors],
        }

    @classmethod
    def from_manifest(cls, rep: Representation, data: dict) -> "LieBasis":
        return cls(rep, [rep.parse_map(e) for e in data["elements"]], truncated=bool(data.get("truncated", False)))


def _try_add(basis: LieBasis, v: dict, tol: float) -> bool:
    if not v:
        return False
    rep = basis.rep
    # fast path: a single unseen label is automatically orthogonal
    if len(v) == 1:
        (lab,) = v
        if lab not in basis._by_label:
            basis._append({lab: 1.0})
            return True
    scale = inner(rep, v, v) ** 0.5
    r = basis.residual(v)
    r = basis.residual(r)  # second pass against cancellation
    rn = inner(rep, r, r) ** 0.5
    if rn <= tol * scale:
        return False
    basis.min_accepted = min(basis.min_accepted, rn / scale)
    if len(r) == 1:
        (lab,) = r
        basis._append({lab: 1.0})
    else:
        basis._append({k: c / rn for k, c in r.items()})
    return True


def lie_closure(
    generators: list[dict],
    rep: Representation,
    max_dim: int | None = None,
    tol: float = INDEPENDENCE_TOL,
    mode: str = "generators",
) -> LieBasis:
    """Breadth-first nested-commutator closure.

    mode "generators" brackets every basis element with the generators only,
    which already spans the generated algebra; "pairs" brackets all pairs of
    basis elements.  Identity labels are dropped (global phase).  When
    ``max_dim`` is hit the partial basis comes back with ``truncated=True``.
    """
    gens = []
    for g in generators:
        g = {k: float(c) for k, c in g.items() if not rep.is_identity(k) and abs(c) > PRUNE_TOL}
        if g:
            gens.append(g)
    basis = LieBasis(rep)
    for g in gens:
        _try_add(basis, g, tol)
    i = 0
    while i < len(basis):
        partners = gens if mode == "generators" else basis.vectors[:i]
        for g in list(partners):
            if max_dim is not None and len(basis) >= max_dim:
                basis.truncated = True
                log.warning("closure truncated at max_dim=%d", max_dim)
                return basis
            _try_add(basis, bracket_vectors(rep, g, basis.vectors[i]), tol)
        i += 1
    if basis.min_accepted < GRAY_ZONE:
        log.warning(
            "closure accepted a direction with relative residual %.1e; the dimension %d may be inflated by rounding",
            basis.min_accepted,
            len(basis),
        )
    out = _split_labels(basis)
    out.min_accepted = basis.min_accepted
    return out


def _split_labels(basis: LieBasis) -> LieBasis:
    """Replace the basis by single labels when those labels span exactly the same space."""
    if basis.is_single_label:
        return basis
    labels: dict = {}
    for v in basis.vectors:
        for lab in v:
            labels.setdefault(lab, None)
    if len(labels) != len(basis):
        return basis
    return LieBasis.from_labels(basis.rep, labels)


# -- structure constants --------------------------------------------------------


@dataclass
class StructureTensor:
    basis: LieBasis
    entries: dict[tuple[int, int], list[tuple[int, float]]] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense(self) -> np.ndarray:
        d = self.dim
        f = np.zeros((d, d, d))
        for (a, b), items in self.entries.items():
            for c, v in items:
                f[a, b, c] = v
        return f

    def export(self, path) -> None:
        import json

        with open(path, "w") as fh:
            fh.write("# " + json.dumps(self.basis.manifest()) + "\n")
            for (a, b) in sorted(self.entries):
                for c, v in self.entries[(a, b)]:
                    fh.write(f"{a} {b} {c} {v!r}\n")

    @classmethod
    def load(cls, path, rep: Representation) -> "StructureTensor":
        import json

        with open(path) as fh:
            header = fh.readline()
            if not header.startswith("# "):
                raise ValueError("missing JSON header line")
            basis = LieBasis.from_manifest(rep, json.loads(header[2:]))
            entries: dict = {}
            for line in fh:
                a, b, c, v = line.split()
                entries.setdefault((int(a), int(b)), []).append((int(c), float(v)))
        return cls(basis, entries)


def _coords_or_fail(basis: LieBasis, v: dict, what: str, tol: float) -> dict[int, float]:
    coords, res = basis.project(v)
    scale = inner(basis.rep, v, v)
    if res > tol * tol * scale:
        # the shortcut above subtracts squared norms; confirm with the explicit residual
        r = basis.residual(v)
        res = inner(basis.rep, r, r)
    if res > tol * tol * scale:
        raise ClosureViolation(f"{what} leaves the basis span (residual {res**0.5:.3e})")
    return {a: c for a, c in coords.items() if abs(c) > PRUNE_TOL}


def structure_constants(basis: LieBasis, tol: float = 1e-8) -> StructureTensor:
    """f[a,b,c] = <B_c, i[B_a, B_b]> / <B_c, B_c> for all a < b (mirrored)."""
    rep = basis.rep
    out = StructureTensor(basis)
    vecs = basis.vectors
    for a in range(len(vecs)):
        for b in range(a + 1, len(vecs)):
            br = bracket_vectors(rep, vecs[a], vecs[b])
            if not br:
                continue
            coords = _coords_or_fail(basis, br, f"bracket of elements {a} and {b}", tol)
            if coords:
                items = sorted(coords.items())
                out.entries[(a, b)] = items
                out.entries[(b, a)] = [(c, -v) for c, v in items]
    return out


# -- adjoint generators -------------------------------------------------------


def adjoint_matrix(h: dict, basis: LieBasis, tol: float = 1e-8) -> sp.csr_matrix:
    """Phi with Phi[a, b] = coefficient of B_b in i[H, B_a]."""
    rep = basis.rep
    d = len(basis)
    rows, cols, vals = [], [], []
    candidates = None
    if basis.is_single_label:
        cand = set()
        for lab in h:
            ps = rep.partners(lab)
            if ps is None:
                cand = None
                break
            for q in ps:
                for alpha, _ in basis._by_label.get(q, ()):
                    cand.add(alpha)
        candidates = sorted(cand) if cand is not None else None
    for a in candidates if candidates is not None else range(d):
        br = bracket_vectors(rep, h, basis.vectors[a])
        if not br:
            continue
        for b, c in _coords_or_fail(basis, br, f"adjoint action on element {a}", tol).items():
            rows.append(a)
            cols.append(b)
            vals.append(c)
    return sp.csr_matrix((vals, (rows, cols)), shape=(d, d))


def adjoint_of(h_coords: np.ndarray | dict, tensor: StructureTensor) -> sp.csr_matrix:
    """Phi[a, b] = sum_m h_m f[m, a, b] from a precomputed structure tensor."""
    d = tensor.dim
    items = h_coords.items() if isinstance(h_coords, dict) else enumerate(np.asarray(h_coords))
    acc: dict[tuple[int, int], float] = {}
    for m, hm in items:
        if hm == 0:
            continue
        for a in range(d):
            for b, f in tensor.entries.get((m, a), ()):
                acc[(a, b)] = acc.get((a, b), 0.0) + hm * f
    if not acc:
        return sp.csr_matrix((d, d))
    keys = list(acc)
    return sp.csr_matrix(([acc[k] for k in keys], ([k[0] for k in keys], [k[1] for k in keys])), shape=(d, d))


class AdjointAction:
    """exp(theta * S) for one antisymmetric generator S in orthonormal coordinates.

    The generator graph is split into connected components.  Two-element
    components are plane rotations; larger ones are diagonalized as the
    Hermitian matrix iS, batched over components of equal size.  If S is not
    antisymmetric to working precision the action falls back to
    ``expm_multiply``.
    """

    def __init__(self, phi: sp.spmatrix, sqrt_norms: np.ndarray):
        phi = sp.csr_matrix(phi)
        d = phi.shape[0]
        self.d = d
        dinv = sp.diags(1.0 / sqrt_norms)
        dpos = sp.diags(sqrt_norms)
        s = sp.csr_matrix(dinv @ phi @ dpos)
        s.eliminate_zeros()
        self.s = s
        self.st = sp.csr_matrix(s.T)
        scale = abs(s).max() if s.nnz else 0.0
        asym = abs(s + s.T).max() if s.nnz else 0.0
        self.path = "spectral"
        if scale and asym > 1e-9 * scale:
            log.warning("adjoint generator is not antisymmetric (%.2e); using expm_multiply", asym)
            self.path = "expm"
            return
        self._build_blocks()

    def _build_blocks(self) -> None:
        s = self.s
        ncomp, labels = connected_components(abs(s) + abs(s.T), directed=False)
        groups: dict[int, list[np.ndarray]] = {}
        order = np.argsort(labels, kind="stable")
        bounds = np.flatnonzero(np.diff(labels[order])) + 1
        for comp in np.split(order, bounds):
            if len(comp) > 1:
                groups.setdefault(len(comp), []).append(np.sort(comp))
        self.pairs = None
        self.blocks = []
        for size, comps in groups.items():
            idx = np.array(comps)
            if size == 2:
                c = np.asarray(s[idx[:, 0], idx[:, 1]]).ravel()
                self.pairs = (idx[:, 0], idx[:, 1], c)
                continue
            mats = np.stack([s[c][:, c].toarray() for c in comps])
            evals, vecs = np.linalg.eigh(1j * mats)
            recon = np.einsum("kij,kj,klj->kil", vecs, evals, vecs.conj())
            if np.abs(recon - 1j * mats).max() > 1e-8 * max(1.0, np.abs(mats).max()):
                log.warning("block factorization inaccurate; using expm_multiply")
                self.path = "expm"
                return
            self.blocks.append((idx, evals, vecs))

    def apply(self, theta, u: np.ndarray) -> np.ndarray:
        """exp(theta S) u.  ``u`` may be (d,) or (d, B) with theta scalar or shape (B,)."""
        if self.path == "expm":
            if np.ndim(theta) == 0:
                return expm_multiply(float(theta) * self.s, u)
            return np.stack([expm_multiply(float(t) * self.s, u[:, i]) for i, t in enumerate(theta)], axis=1)
        out = np.array(u, dtype=float, copy=True)
        theta = np.asarray(theta, dtype=float)
        if self.pairs is not None:
            i, j, c = self.pairs
            ang = np.multiply.outer(c, theta) if theta.ndim else c * theta
            cs, sn = np.cos(ang), np.sin(ang)
            ui, uj = u[i], u[j]
            out[i] = cs * ui + sn * uj
            out[j] = cs * uj - sn * ui
        for idx, evals, vecs in self.blocks:
            x = u[idx]  # (K, m) or (K, m, B)
            if theta.ndim:
                y = np.einsum("kji,kjb->kib", vecs.conj(), x)
                y *= np.exp(-1j * np.multiply.outer(evals, theta))
                out[idx] = np.einsum("kij,kjb->kib", vecs, y).real
            else:
                y = np.einsum("kji,kj->ki", vecs.conj(), x)
                y *= np.exp(-1j * theta * evals)
                out[idx] = np.einsum("kij,kj->ki", vecs, y).real
        return out

    def generator_apply(self, u: np.ndarray) -> np.ndarray:
        return self.s @ u


# -- circuits -----------------------------------------------------------------


@dataclass
class CircuitSpec:
    """Generators by id (label -> coeff maps) and an ordered gate list of (generator id, parameter index)."""

    generators: dict[str, dict]
    layers: list[tuple[str, int]]

    def __post_init__(self):
        self.layers = [(str(g), int(p)) for g, p in self.layers]
        missing = {g for g, _ in self.layers} - set(self.generators)
        if missing:
            raise ValueError(f"unknown generator ids {sorted(missing)}")
        used = sorted({p for _, p in self.layers})
        if used and used != list(range(len(used))):
            raise ValueError("parameter indices must be contiguous from 0")

    @property
    def num_params(self) -> int:
        return 1 + max((p for _, p in self.layers), default=-1)

    def to_dict(self, rep: Representation) -> dict:
        return {
            "generators": {g: {rep.text(k): c for k, c in h.items()} for g, h in self.generators.items()},
            "layers": [[g, p] for g, p in self.layers],
        }

    @classmethod
    def from_dict(cls, data: dict, rep: Representation) -> "CircuitSpec":
        gens = {g: rep.parse_map(h) for g, h in data["generators"].items()}
        return cls(gens, [tuple(x) for x in data["layers"]])


class Simulator:
    """Forward propagation and reverse-mode gradients for one circuit on one basis."""

    def __init__(self, basis: LieBasis, circuit: CircuitSpec):
        self.basis = basis
        self.circuit = circuit
        self.sqrt_norms = np.sqrt(basis.norms)
        self.actions = {g: AdjointAction(adjoint_matrix(h, basis), self.sqrt_norms) for g, h in circuit.generators.items()}
        self._gates = [(self.actions[g], p) for g, p in circuit.layers]

    def _check_params(self, params) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape[-1] != self.circuit.num_params:
            raise ValueError(f"expected {self.circuit.num_params} parameters, got {params.shape[-1]}")
        return params

    def to_orthonormal(self, e: np.ndarray) -> np.ndarray:
        return (e.T / self.sqrt_norms).T

    def from_orthonormal(self, u: np.ndarray) -> np.ndarray:
        return (u.T * self.sqrt_norms).T

    def propagate(self, params, e_in: np.ndarray) -> np.ndarray:
        params = self._check_params(params)
        u = self.to_orthonormal(np.asarray(e_in, dtype=float))
        for act, p in self._gates:
            u = act.apply(params[p], u)
        return self.from_orthonormal(u)

    def propagate_batch(self, param_rows: np.ndarray, e_in: np.ndarray) -> np.ndarray:
        """Columns are e_out for each row of ``param_rows`` (shape (B, M))."""
        param_rows = self._check_params(param_rows)
        u0 = self.to_orthonormal(np.asarray(e_in, dtype=float))
        u = np.repeat(u0[:, None], param_rows.shape[0], axis=1)
        for act, p in self._gates:
            u = act.apply(param_rows[:, p], u)
        return self.from_orthonormal(u)

    def expectation(self, params, e_in, w) -> float:
        return float(np.dot(w, self.propagate(params, e_in)))

    def value_and_grad(self, params, e_in, w) -> tuple[float, np.ndarray]:
        params = self._check_params(params)
        u = self.to_orthonormal(np.asarray(e_in, dtype=float))
        stored = []
        for act, p in self._gates:
            u = act.apply(params[p], u)
            stored.append(u)
        mu = np.asarray(w, dtype=float) * self.sqrt_norms
        value = float(mu @ u)
        grad = np.zeros(self.circuit.num_params)
        for (act, p), uk in zip(reversed(self._gates), reversed(stored)):
            grad[p] += mu @ act.generator_apply(uk)
            mu = act.apply(-params[p], mu)
        return value, grad


# -- module-level API ---------------------------------------------------------


def exp_action(action: AdjointAction, theta: float, v: np.ndarray, sqrt_norms: np.ndarray) -> np.ndarray:
    """expm(theta Phi) v in engine coordinates."""
    return action.apply(theta, v / sqrt_norms) * sqrt_norms


def propagate(circuit: CircuitSpec, params, e_in, basis: LieBasis) -> np.ndarray:
    return Simulator(basis, circuit).propagate(params, e_in)


def expectation(w: np.ndarray, e_out: np.ndarray) -> float:
    return float(np.dot(w, e_out))


def gradient(circuit: CircuitSpec, params, e_in, w, basis: LieBasis) -> np.ndarray:
    return Simulator(basis, circuit).value_and_grad(params, e_in, w)[1]


def state_coordinates(state: StateSpec, basis: LieBasis) -> np.ndarray:
    """e_a = tr(B_a rho)."""
    if state.kind == "coords":
        e = np.asarray(state.coords, dtype=float)
        if e.shape != (len(basis),):
            raise ValueError(f"coordinate vector has shape {e.shape}, expected ({len(basis)},)")
        return e
    rep = basis.rep
    cache: dict = {}
    out = np.zeros(len(basis))
    for a, v in enumerate(basis.vectors):
        tot = 0.0
        for lab, c in v.items():
            if lab not in cache:
                cache[lab] = rep.expectation(lab, state)
            tot += c * cache[lab]
        out[a] = tot
    return out


def observable_coordinates(obs: dict, basis: LieBasis, tol: float = 1e-8) -> np.ndarray:
    """w with O = sum_a w_a B_a (projections divided by the stored norms)."""
    obs = {k: c for k, c in obs.items() if not basis.rep.is_identity(k)}
    coords = _coords_or_fail(basis, obs, "observable", tol)
    w = np.zeros(len(basis))
    for a, c in coords.items():
        w[a] = c
    return w


def g_purity(h: dict, basis: LieBasis) -> float:
    """sum_a tr(B_a H)^2 / tr(B_a^2) over the basis (operator given as a label map)."""
    ov = basis.overlaps(h)
    scale = basis.rep.hs_scale
    return float(sum(scale * s * s / basis.norms_list[a] for a, s in ov.items()))


def g_purity_coords(e: np.ndarray, basis: LieBasis) -> float:
    """Same quantity for a state given by coordinates e_a = tr(B_a rho)."""
    return float(np.sum(np.asarray(e) ** 2 / (basis.rep.hs_scale * basis.norms)))


def predict_variance(rho_purity: float, obs_purity: float, dim: int) -> float:
    return rho_purity * obs_purity / dim


@dataclass
class Ideal:
    projector: np.ndarray  # (d, m) orthonormal columns in orthonormal coordinates
    casimir: float

    @property
    def dim(self) -> int:
        return self.projector.shape[1]


def ideal_decomposition(basis: LieBasis, rel_tol: float = 1e-6) -> list[Ideal]:
    """Split the algebra into Casimir eigenspaces of the adjoint representation.

    The center comes back with casimir 0.  Simple ideals that happen to share
    a Casimir eigenvalue would be merged; a warning is logged when an
    eigenspace dimension is not of the form m^2 - 1.
    """
    d = len(basis)
    sq = np.sqrt(basis.norms)
    cas = np.zeros((d, d))
    for a in range(d):
        phi = adjoint_matrix(basis.vectors[a], basis).toarray()
        s = (phi / sq[:, None]) * sq[None, :] / sq[a]
        cas += s @ s
    cas = 0.5 * (cas + cas.T)
    evals, vecs = np.linalg.eigh(-cas)
    top = max(abs(evals).max(), 1e-300)
    out: list[Ideal] = []
    start = 0
    for i in range(1, d + 1):
        if i == d or abs(evals[i] - evals[start]) > rel_tol * top:
            val = float(np.mean(evals[start:i]))
            if abs(val) < rel_tol * top:
                val = 0.0
            out.append(Ideal(vecs[:, start:i], val))
            start = i
    for ideal in out:
        m = round((ideal.dim + 1) ** 0.5)
        if ideal.casimir and m * m - 1 != ideal.dim:
            log.warning("Casimir eigenspace of dimension %d may merge several ideals", ideal.dim)
    return out


def predict_variance_ideals(e: np.ndarray, w: np.ndarray, basis: LieBasis, ideals: list[Ideal]) -> float:
    """sum over non-central ideals of |P_j e|^2 |P_j w|^2 / dim_j in orthonormal coordinates."""
    sq = np.sqrt(basis.norms)
    u = np.asarray(e) / sq
    wh = np.asarray(w) * sq
    total = 0.0
    for ideal in ideals:
        if ideal.casimir == 0.0:
            continue
        pu = ideal.projector.T @ u
        pw = ideal.projector.T @ wh
        total += float(pu @ pu) * float(pw @ pw) / ideal.dim
    return total
