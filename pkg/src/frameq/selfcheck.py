"""Randomized planted-equivalence checks, reproducible from a seed."""

from __future__ import annotations

import numpy as np

from .core import DEFAULT_TOL, Frame, Tolerance, apply_gauge, gram, random_phases, random_unitary
from .equivalence import projective_equiv, reconstruct_from_products
from .invariants import determining_set


def selftest(seed: int = 0, tol: Tolerance = DEFAULT_TOL, trials: int = 20) -> dict:
    """Plant ``w_j = c_j U v_j`` for random frames and check three things each time:
    the copy is accepted, a perturbed copy is rejected, and the determining set
    reconstructs a Gramian equivalent to the original."""
    rng = np.random.default_rng(seed)
    failures = []
    for t in range(trials):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(d, 9))
        V = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
        G = gram(Frame(V))
        W = random_unitary(d, rng) @ V * random_phases(n, rng)[None, :]
        if not projective_equiv(G, gram(Frame(W)), tol):
            failures.append({"trial": t, "check": "planted"})
        bent = W.copy()
        bent[:, -1] = bent[:, -1] + 0.3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
        bent_g = apply_gauge(gram(Frame(bent)), random_phases(n, rng))
        if projective_equiv(G, bent_g, tol):
            failures.append({"trial": t, "check": "perturbed"})
        if not projective_equiv(G, reconstruct_from_products(determining_set(G, tol), tol=tol), tol):
            failures.append({"trial": t, "check": "round trip"})
    return {"seed": seed, "trials": trials, "failed": len(failures), "failures": failures}
