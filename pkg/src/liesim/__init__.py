"""Classical simulation of quantum circuits whose generators span a small Lie algebra.

Expectation values are propagated in the adjoint representation of the
dynamical Lie algebra, using one of four structured label bases: Pauli
strings, translation-invariant Pauli cycles, permutation-invariant Pauli
orbits, or generalized Gell-Mann matrices on a fixed Hamming-weight sector.
"""

from .engine import (
    CircuitSpec,
    ClosureViolation,
    LieBasis,
    Simulator,
    StructureTensor,
    adjoint_matrix,
    lie_closure,
    observable_coordinates,
    state_coordinates,
    structure_constants,
)
from .reps import CycleRep, MGGMRep, OrbitRep, PauliRep, make_rep
from .states import StateSpec

__all__ = [
    "CircuitSpec",
    "ClosureViolation",
    "LieBasis",
    "Simulator",
    "StructureTensor",
    "adjoint_matrix",
    "lie_closure",
    "observable_coordinates",
    "state_coordinates",
    "structure_constants",
    "CycleRep",
    "MGGMRep",
    "OrbitRep",
    "PauliRep",
    "make_rep",
    "StateSpec",
]
