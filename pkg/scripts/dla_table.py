"""Print closure dimensions for the model families next to their closed forms."""

import argparse
import math
import time

from liesim import models
from liesim.engine import lie_closure
from liesim.reps import CycleRep, MGGMRep, PauliRep

FAMILIES = {
    "TFIM open summed": (lambda n: lie_closure(models.tfim_summed_generators(n), PauliRep(n)), lambda n: n * n),
    "TFIM periodic summed": (lambda n: lie_closure(models.tfim_cycle_generators(n), CycleRep(n)), lambda n: 3 * n - 1),
    "TFIM free path": (lambda n: lie_closure(list(models.tfim_free_generators(n).values()), PauliRep(n)), lambda n: n * (2 * n - 1)),
    "TFIM free cycle": (lambda n: lie_closure(list(models.tfim_free_generators(n, "periodic").values()), PauliRep(n)), lambda n: 2 * n * (2 * n - 1)),
    "peQNN orbit closure": (models.peqnn_basis, lambda n: math.comb(n + 3, 3) - n // 2),
    "HW universal, k=1": (lambda n: lie_closure(models.hw_universal_generators(n, 1), MGGMRep(n)), lambda n: n * n - 1),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=list(range(3, 9)))
    args = ap.parse_args()
    print(f"{'family':24s} {'n':>3s} {'dim':>6s} {'formula':>8s} {'sec':>7s}")
    for name, (build, formula) in FAMILIES.items():
        for n in args.n:
            t0 = time.perf_counter()
            dim = len(build(n))
            flag = "" if dim == formula(n) else "  <-- differs"
            print(f"{name:24s} {n:3d} {dim:6d} {formula(n):8d} {time.perf_counter() - t0:7.2f}{flag}")


if __name__ == "__main__":
    main()
