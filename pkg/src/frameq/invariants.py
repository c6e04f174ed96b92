"""Bargmann invariants (m-products) of a Gram matrix and determining sets.

``m_product(G, (j1, ..., jm)) = <v_j1, v_j2> <v_j2, v_j3> ... <v_jm, v_j1>``
where ``<v_a, v_b> = G[b, a]``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import DEFAULT_TOL, Frame, Tolerance, as_gram
from .errors import DimensionMismatch, DivisionByZero, InvalidInput, NotInSpan, ZeroVector
from .graph import (
    FrameGraph,
    SpanningForest,
    build_frame_graph,
    canonical_cycle,
    cycle_edges,
    fundamental_cycles,
    gf2_decompose,
    spanning_forest,
    triangle_basis,
)

__all__ = [
    "m_product",
    "TripleProducts",
    "triple_products",
    "moduli_from_triples",
    "MProduct",
    "DeterminingSet",
    "determining_set",
    "triangle_determining_set",
    "triple_product_set",
    "tuple_product_set",
    "derive_product",
    "check_mubs",
]


def _check_index(idx, n) -> tuple:
    idx = tuple(int(j) for j in idx)
    if not idx:
        raise InvalidInput("an m-product needs at least one index")
    for j in idx:
        if not 0 <= j < n:
            raise IndexError(f"index {j} out of range for {n} vectors")
    return idx


def m_product(g, idx: Sequence[int]) -> complex:
    """Bargmann invariant of the closed walk ``idx`` (indices may repeat)."""
    G = as_gram(g)
    idx = _check_index(idx, G.shape[0])
    nxt = idx[1:] + idx[:1]
    return complex(np.prod(G[list(nxt), list(idx)]))


class TripleProducts(Mapping):
    """All triple products ``T[j, k, l]``, stored once per rotation/reversal class.

    Reversing a triple conjugates its value, so only the canonical orientation
    is kept and the others are rebuilt on lookup.
    """

    def __init__(self, n: int, values: dict):
        self.n = n
        self._values = values

    def __getitem__(self, key):
        j, k, l = _check_index(key, self.n)
        rep, flipped = canonical_cycle((j, k, l))
        value = self._values[rep]
        return value.conjugate() if flipped else value

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def tensor(self) -> np.ndarray:
        n = self.n
        T = np.empty((n, n, n), dtype=complex)
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    T[j, k, l] = self[j, k, l]
        return T


def triple_products(g) -> TripleProducts:
    G = as_gram(g)
    n = G.shape[0]
    E = G.T  # E[a, b] = <v_a, v_b>
    full = np.einsum("jk,kl,lj->jkl", E, E, E)
    values = {}
    for j in range(n):
        for k in range(j, n):
            for l in range(j, n):
                rep, _ = canonical_cycle((j, k, l))
                if rep == (j, k, l):
                    values[rep] = complex(full[j, k, l])
    return TripleProducts(n, values)


def moduli_from_triples(t, n: Optional[int] = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Grid of ``|<v_j, v_k>|`` from ``T_jjj = |v_j|^6`` and ``T_jjk = |v_j|^2 |<v_j, v_k>|^2``.

    The diagonal holds the squared norms ``T_jjj^(1/3)``.
    """
    if n is None:
        n = t.n
    sq = np.array([max(t[j, j, j].real, 0.0) ** (1 / 3) for j in range(n)])
    out = np.diag(sq)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            if sq[j] ** 3 > tol.abs_zero:
                out[j, k] = np.sqrt(max(t[j, j, k].real, 0.0) / sq[j])
            elif abs(t[j, j, k]) > tol.abs_zero:
                raise ZeroVector(f"T[{j},{j},{j}] vanishes but T[{j},{j},{k}] does not")
            elif sq[k] ** 3 > tol.abs_zero:
                out[j, k] = np.sqrt(max(t[k, k, j].real, 0.0) / sq[k])
    return out


@dataclass(frozen=True)
class MProduct:
    indices: tuple
    value: complex


@dataclass(frozen=True)
class DeterminingSet:
    """1- and 2-products (as squared norms and moduli) plus a set of cycle products.

    ``norms[j] = <v_j, v_j>`` and ``moduli[j, k] = |<v_j, v_k>|``; the 2-products
    are ``moduli**2``.
    """

    norms: np.ndarray
    moduli: np.ndarray
    cycle_products: tuple

    @property
    def n(self) -> int:
        return len(self.norms)

    def graph(self, tol: Tolerance = DEFAULT_TOL) -> FrameGraph:
        A = np.array(self.moduli, dtype=float)
        np.fill_diagonal(A, 0.0)
        return build_frame_graph(A, tol)

    def lookup(self, cycle) -> Optional[complex]:
        """Product of ``cycle`` if it is stored (in any rotation or orientation)."""
        rep, flipped = canonical_cycle(cycle)
        for p in self.cycle_products:
            prep, pflip = canonical_cycle(p.indices)
            if prep == rep:
                return p.value.conjugate() if flipped != pflip else p.value
        return None


def _one_two(G):
    return G.diagonal().real.copy(), np.abs(G)


def determining_set(g, tol: Tolerance = DEFAULT_TOL, forest: Optional[SpanningForest] = None) -> DeterminingSet:
    """2-products plus one m-product per fundamental cycle of the frame graph."""
    G = as_gram(g)
    graph = build_frame_graph(G, tol)
    if forest is None:
        forest = spanning_forest(graph)
    basis = fundamental_cycles(graph, forest)
    norms, moduli = _one_two(G)
    products = tuple(MProduct(c, m_product(G, c)) for c in basis.cycles)
    return DeterminingSet(norms, moduli, products)


def triangle_determining_set(g, tol: Tolerance = DEFAULT_TOL) -> Optional[DeterminingSet]:
    """2-products plus the 3-products of a triangle basis, or None if there is none."""
    G = as_gram(g)
    basis = triangle_basis(build_frame_graph(G, tol))
    if basis is None:
        return None
    norms, moduli = _one_two(G)
    products = tuple(MProduct(c, m_product(G, c)) for c in basis.cycles)
    return DeterminingSet(norms, moduli, products)


def triple_product_set(g) -> DeterminingSet:
    """2-products plus every distinct-index triple product, one per rotation/reversal class."""
    G = as_gram(g)
    norms, moduli = _one_two(G)
    t = triple_products(G)
    products = tuple(MProduct(k, v) for k, v in t._values.items() if len(set(k)) == 3)
    return DeterminingSet(norms, moduli, products)


def tuple_product_set(g, idx: Sequence[int]) -> DeterminingSet:
    """2-products plus the single m-product of ``idx``."""
    G = as_gram(g)
    idx = _check_index(idx, G.shape[0])
    norms, moduli = _one_two(G)
    return DeterminingSet(norms, moduli, (MProduct(idx, m_product(G, idx)),))


def _steps(cycle) -> list:
    m = len(cycle)
    return [(cycle[i], cycle[(i + 1) % m]) for i in range(m) if cycle[i] != cycle[(i + 1) % m]]


def _oriented(steps, edge_index) -> np.ndarray:
    vec = np.zeros(len(edge_index))
    for a, b in steps:
        if a < b:
            vec[edge_index[(a, b)]] += 1
        else:
            vec[edge_index[(b, a)]] -= 1
    return vec


def derive_product(dset: DeterminingSet, target, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Evaluate the m-product of ``target`` from the products stored in ``dset``.

    The target is written as a signed sum of stored cycles (shared edges
    cancel), so its value is the product of the edge moduli along the target
    times the matching product of stored phases, e.g.
    ``D(1,2,3,4) = D(1,2,3) D(1,3,4) / D(1,3)``.

    Raises
    ------
    NotInSpan
        The target is not a combination of the stored cycles.
    DivisionByZero
        A stored cycle needed for the target has a vanishing edge.
    """
    target = tuple(int(v) for v in target)
    _check_index(target, dset.n)
    norms = np.asarray(dset.norms, dtype=float)
    mod = np.asarray(dset.moduli, dtype=float)
    m = len(target)
    steps = [(target[i], target[(i + 1) % m]) for i in range(m)]
    value = 1.0 + 0j
    for a, b in steps:
        value *= norms[a] if a == b else mod[a, b]
    if any((norms[a] if a == b else mod[a, b]) <= tol.abs_zero for a, b in steps):
        return 0j
    stored = dset.lookup(target) if m > 2 else None
    if stored is not None:
        return stored

    graph = dset.graph(tol)
    edge_index = {e: i for i, e in enumerate(graph.edges)}
    walk = [s for s in steps if s[0] != s[1]]
    b = _oriented(walk, edge_index)
    if not np.any(b):
        # every edge is traversed back and forth: only moduli are involved
        return value

    cycles = [tuple(p.indices) for p in dset.cycle_products]
    usable = [i for i, c in enumerate(cycles) if all(e in edge_index for e in cycle_edges(c))]

    def bitset(cyc_steps):
        v = 0
        for a, c in cyc_steps:
            v ^= 1 << edge_index[(a, c) if a < c else (c, a)]
        return v

    vecs = [bitset(_steps(cycles[i])) for i in usable]
    if not usable or gf2_decompose(vecs, bitset(walk)) is None:
        raise NotInSpan(f"cycle {list(target)} is not in the span of the stored cycles")

    A = np.column_stack([_oriented(_steps(cycles[i]), edge_index) for i in usable])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    ints = np.rint(coef)
    if np.max(np.abs(ints - coef)) > 1e-6 or np.max(np.abs(A @ ints - b)) > 1e-9:
        raise NotInSpan(f"cycle {list(target)} is not an integral combination of the stored cycles")

    for i, e in zip(usable, ints.astype(int)):
        if e == 0:
            continue
        cyc = cycles[i]
        if any(mod[a, c] <= tol.abs_zero for a, c in cycle_edges(cyc)):
            raise DivisionByZero(f"stored cycle {list(cyc)} has a vanishing 2-product")
        p = dset.cycle_products[i].value
        if abs(p) <= tol.abs_zero:
            raise DivisionByZero(f"stored product for cycle {list(cyc)} vanishes")
        value *= (p / abs(p)) ** e
    return value


def check_mubs(groups, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff each group is an orthonormal basis and different groups are unbiased.

    A group is a Frame, a synthesis matrix (vectors as columns) or a list of vectors.
    """

    def as_matrix(g):
        if isinstance(g, Frame):
            return g.matrix
        if isinstance(g, np.ndarray):
            return Frame(g).matrix
        return Frame.from_vectors(g).matrix

    mats = [as_matrix(g) for g in groups]
    if not mats:
        return True
    d = mats[0].shape[0]
    if any(M.shape[0] != d for M in mats):
        raise DimensionMismatch("bases live in different dimensions")
    thr = tol.match_threshold(1.0)
    for M in mats:
        if M.shape[1] != d or np.max(np.abs(M.conj().T @ M - np.eye(d))) > thr:
            return False
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            cross = np.abs(mats[a].conj().T @ mats[b]) ** 2
            if np.max(np.abs(cross - 1 / d)) > thr:
                return False
    return True
