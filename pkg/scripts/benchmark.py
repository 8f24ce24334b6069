"""Time the heavier operations: structure constants, canonical derivations, Wronskians, compatibility.

    python3 scripts/benchmark.py
"""

import random
import time

from hsfield.acceptance import random_rational
from hsfield.derivation import canonical_derivation, canonical_group_derivation, check_iterativity, dependence_over_constants
from hsfield.fields import field
from hsfield.formal_group import fgl_builtin, fgl_truncate, structure_constants
from hsfield.poly import MultiPoly
from hsfield.prolongation import AffineVariety, affine_space, cv_compatibility


def timed(label, fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    print(f"{label:<58} {best * 1000:9.1f} ms")


def main():
    for name, p, m in (("witt2", 2, 2), ("ga_semidirect_gm", 3, 1), ("multiplicative", 5, 2)):
        timed(f"structure constants {name} p={p} m={m}", lambda: structure_constants(fgl_truncate(fgl_builtin(name, p), m)))
    for name, p, m in (("multiplicative", 2, 3), ("witt2", 3, 1)):
        F = fgl_builtin(name, p)
        timed(f"canonical derivation + iterativity {name} p={p} m={m}", lambda: check_iterativity(canonical_derivation(F, m), fgl_truncate(F, m)))
    D = canonical_group_derivation(fgl_builtin("additive", 2), 1, kind="rational")
    rng = random.Random(0)
    K = field(2, 1)
    triples = [[random_rational(rng, K) for _ in range(3)] for _ in range(50)]
    timed("50 Wronskian triples over F_2(t)", lambda: [dependence_over_constants(D, xs) for xs in triples])
    g = fgl_truncate(fgl_builtin("additive", 2), 1)
    W = AffineVariety(2, (MultiPoly.variable(K, 2, 1) - MultiPoly.one(K, 2),))
    timed("compatibility, symbolic", lambda: cv_compatibility(g, affine_space(1), W, "symbolic"))
    timed("compatibility, pointwise over F_256", lambda: cv_compatibility(g, affine_space(1), W, "pointwise", 256))


if __name__ == "__main__":
    main()
