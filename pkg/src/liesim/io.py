"""JSON and CSV helpers for sums, bases, coordinate vectors and problem files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cycles import CycleSum
from .engine import CircuitSpec, LieBasis, lie_closure
from .mggm import MGGMSum
from .orbits import OrbitSum
from .pauli import PauliSum
from .reps import Representation, make_rep
from .states import StateSpec


def sum_to_json(s) -> dict:
    if isinstance(s, PauliSum):
        return {"n": s.n, "terms": s.to_dict()}
    return s.to_dict()


def sum_from_json(kind: str, data: dict):
    """Inverse of ``sum_to_json``.  Pauli sums also accept the flat {"n": 3, "XIZ": 1.0} form."""
    if kind == "pauli":
        terms = data["terms"] if "terms" in data else {k: v for k, v in data.items() if k != "n"}
        return PauliSum.from_dict(int(data["n"]), terms)
    if kind == "cycle":
        return CycleSum.from_dict(data)
    if kind == "orbit":
        return OrbitSum.from_dict(data)
    if kind == "mggm":
        return MGGMSum.from_dict(data)
    raise ValueError(f"unknown representation {kind!r}")


def write_coordinates(path, basis: LieBasis, e: np.ndarray) -> None:
    """One row per basis element: index, element text, coordinate."""
    rep = basis.rep
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "element", "coordinate"])
        for a, (v, c) in enumerate(zip(basis.vectors, e)):
            w.writerow([a, json.dumps({rep.text(k): x for k, x in v.items()}), repr(float(c))])


def read_coordinates(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([float(r["coordinate"]) for r in csv.DictReader(fh)])


@dataclass
class Problem:
    """Everything the closure/adjoint/simulate/grad subcommands need, read from one JSON file.

    Keys: ``representation``, ``n`` (qubits), ``k`` and optional ``d`` for
    mggm, ``generators`` (list of label->coeff maps), ``circuit``
    ({generators, layers}), ``state`` (StateSpec fields), ``observable``
    (label->coeff), ``params`` and ``max_dim``.  Generators default to those
    of the circuit.
    """

    rep: Representation
    generators: list[dict]
    circuit: CircuitSpec | None = None
    state: StateSpec | None = None
    observable: dict = field(default_factory=dict)
    params: np.ndarray | None = None
    max_dim: int | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "Problem":
        if "representation" not in data:
            raise ValueError("problem file needs a 'representation' field")
        rep = make_rep(data["representation"], n=data.get("n"), k=data.get("k"), d=data.get("d"))
        circuit = CircuitSpec.from_dict(data["circuit"], rep) if "circuit" in data else None
        if "generators" in data:
            gens = [rep.parse_map(g) for g in data["generators"]]
        elif circuit is not None:
            gens = list(circuit.generators.values())
        else:
            raise ValueError("problem file needs 'generators' or 'circuit'")
        return cls(
            rep=rep,
            generators=gens,
            circuit=circuit,
            state=StateSpec.from_dict(data["state"]) if "state" in data else None,
            observable=rep.parse_map(data.get("observable", {})),
            params=None if data.get("params") is None else np.asarray(data["params"], dtype=float),
            max_dim=data.get("max_dim"),
        )

    @classmethod
    def load(cls, path) -> "Problem":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def closure(self) -> LieBasis:
        return lie_closure(self.generators, self.rep, max_dim=self.max_dim)
