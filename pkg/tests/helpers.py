"""Frame builders shared by the test modules."""

import numpy as np


def random_frame(rng, d, n):
    return rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))


def cycle_frame(n, z):
    """v_j = e_j + e_{j+1}, v_n = e_n + z e_1 (0-based columns)."""
    V = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        V[j, j] = 1
        V[j + 1, j] = 1
    V[n - 1, n - 1] = 1
    V[0, n - 1] = z
    return V


def mub_frame():
    s = 1 / np.sqrt(2)
    return np.array([[1, 0, s, s], [0, 1, s, -s]], dtype=complex)


def sparse_gram(rng, n, keep):
    """Random Gram matrix whose frame graph is a random subgraph.

    Vectors get random supports in C^n, so zero inner products come from
    disjoint supports.
    """
    while True:
        V = np.zeros((n, n), dtype=complex)
        for j in range(n):
            support = rng.random(n) < keep
            support[rng.integers(n)] = True
            V[support, j] = rng.standard_normal(support.sum()) + 1j * rng.standard_normal(support.sum())
        if np.all(np.linalg.norm(V, axis=0) > 0):
            return V.conj().T @ V
