"""Deciding (projective) unitary equivalence from Gram matrices.

Projective equivalence is decided constructively: the phases ``c_j`` are
propagated from the root of a spanning tree of the frame graph so that the
gauged first Gramian agrees with the second on every tree edge; the two are
then equivalent iff the remaining (chord) entries agree as well.  This is the
same as comparing the m-products of the fundamental cycles.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import DEFAULT_TOL, GramMatrix, Tolerance, as_gram, is_psd
from .errors import (
    InconsistentModulus,
    InvalidInput,
    MissingCycleProduct,
    NotInSpan,
    NotPSDWarning,
    NotRealEquiangular,
    SearchBudgetExceeded,
    SizeMismatch,
)
from .graph import (
    FrameGraph,
    SpanningForest,
    build_frame_graph,
    canonical_cycle,
    forest_from_edges,
    fundamental_cycles,
    spanning_forest,
)
from .invariants import DeterminingSet, derive_product

__all__ = [
    "Verdict",
    "CanonicalGram",
    "SeidelData",
    "DEFAULT_BUDGET",
    "unitary_equiv",
    "unitary_verdict",
    "projective_equiv",
    "canonical_gram",
    "reconstruct_from_products",
    "projective_equiv_reindex",
    "unitary_equiv_reindex",
    "equivalent_by_products",
    "seidel_data",
]

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equivalence test.

    When ``equivalent`` is true, ``phases`` (and ``permutation`` for the
    reindexing search) certify it: ``apply_gauge(permute_gram(g1, permutation),
    phases) == g2``.  When false, ``witness`` names the first mismatch, either
    ``{"kind": "moduli", "entry": [j, k]}`` or ``{"kind": "cycle", "indices": [...]}``.
    """

    equivalent: bool
    phases: Optional[np.ndarray] = None
    permutation: Optional[tuple] = None
    witness: Optional[dict] = None
    status: str = "decided"
    extra: dict = field(default_factory=dict)

    def __bool__(self):
        return self.equivalent

    def to_dict(self) -> dict:
        out = {"equivalent": bool(self.equivalent), "status": self.status}
        if self.phases is not None:
            out["phases"] = [[float(z.real), float(z.imag)] for z in self.phases]
        if self.permutation is not None:
            out["permutation"] = [int(p) for p in self.permutation]
        if self.witness is not None:
            out["witness"] = self.witness
        out.update(self.extra)
        return out


@dataclass(frozen=True)
class CanonicalGram:
    gram: GramMatrix
    forest: SpanningForest
    phases: np.ndarray


@dataclass(frozen=True)
class SeidelData:
    alpha: float
    seidel: np.ndarray
    neg_triples: frozenset


def _pair(g1, g2):
    G1, G2 = as_gram(g1), as_gram(g2)
    if G1.shape != G2.shape:
        raise SizeMismatch(f"Gram matrices of sizes {G1.shape[0]} and {G2.shape[0]}")
    return G1, G2


def _threshold(tol, *mats) -> float:
    return tol.match_threshold(max(float(np.max(np.abs(M))) for M in mats))


def unitary_equiv(g1, g2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Unitary equivalence: the Gram matrices agree entrywise."""
    G1, G2 = _pair(g1, g2)
    return bool(np.max(np.abs(G1 - G2)) <= _threshold(tol, G1, G2))


def unitary_verdict(g1, g2, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Like :func:`unitary_equiv`, naming the first mismatching entry on failure."""
    G1, G2 = _pair(g1, g2)
    bad = np.abs(G1 - G2) > _threshold(tol, G1, G2)
    if not bad.any():
        return Verdict(True, phases=np.ones(G1.shape[0], dtype=complex))
    j, k = np.argwhere(bad)[0]
    return Verdict(False, witness={"kind": "entry", "entry": [int(j), int(k)]})


def _tree_phases(G, forest, target=None) -> np.ndarray:
    """Phases making ``C^* G C`` agree with ``target`` (or be real positive) on tree edges."""
    c = np.ones(G.shape[0], dtype=complex)
    for v in forest.order:
        p = forest.parent[v]
        if p == v:
            continue
        z = G[p, v]
        ratio = np.conj(z) if target is None else target[p, v] * np.conj(z)
        c[v] = c[p] * ratio / abs(ratio)
    return c


def _gauged(G, c):
    return c.conj()[:, None] * G * c[None, :]


def projective_equiv(g1, g2, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Projective unitary equivalence with a phase certificate or a mismatch witness."""
    G1, G2 = _pair(g1, g2)
    thr = _threshold(tol, G1, G2)
    diff = np.abs(np.abs(G1) - np.abs(G2)) > thr
    if diff.any():
        j, k = np.argwhere(diff)[0]
        return Verdict(False, witness={"kind": "moduli", "entry": [int(j), int(k)]})
    graph = build_frame_graph(G1, tol)
    forest = spanning_forest(graph)
    c = _tree_phases(G1, forest, G2)
    bad = np.abs(_gauged(G1, c) - G2) > thr
    if not bad.any():
        return Verdict(True, phases=c)
    basis = fundamental_cycles(graph, forest)
    for cyc, (u, v) in zip(basis.cycles, basis.chords):
        if bad[u, v]:
            return Verdict(False, witness={"kind": "cycle", "indices": list(cyc)})
    j, k = np.argwhere(bad)[0]  # only reachable for entries hovering at the zero threshold
    return Verdict(False, witness={"kind": "moduli", "entry": [int(j), int(k)]})


def canonical_gram(g, tol: Tolerance = DEFAULT_TOL, forest=None) -> CanonicalGram:
    """Gauge representative whose tree-edge entries are real and nonnegative.

    ``forest`` (a SpanningForest or a list of tree edges) defaults to the
    breadth-first forest of the frame graph.
    """
    G = as_gram(g)
    graph = build_frame_graph(G, tol)
    if forest is None:
        forest = spanning_forest(graph)
    elif not isinstance(forest, SpanningForest):
        forest = forest_from_edges(graph, forest)
    c = _tree_phases(G, forest)
    H = _gauged(G, c)
    for v, p in enumerate(forest.parent):
        if v != p:
            H[p, v] = H[v, p] = abs(H[p, v])
    return CanonicalGram(GramMatrix(H), forest, c)


def reconstruct_from_products(
    p: DeterminingSet,
    free_phases: Optional[dict] = None,
    tol: Tolerance = DEFAULT_TOL,
    forest=None,
) -> GramMatrix:
    """Rebuild a Gram matrix from squared norms, moduli and cycle products.

    Tree edges get ``modulus * free_phases[(j, k)]`` as ``<w_j, w_k>`` (phase 1
    when absent); each chord entry is then forced by the product of its
    fundamental cycle.  Cycle products not stored directly are derived from
    the stored ones when they span them.  ``forest`` may be a SpanningForest
    or a list of tree edges; the default is the breadth-first forest.
    """
    n = p.n
    mod = np.array(p.moduli, dtype=float)
    if mod.shape != (n, n):
        raise InvalidInput("moduli grid does not match the number of norms")
    graph = p.graph(tol)
    if forest is None:
        forest = spanning_forest(graph)
    elif not isinstance(forest, SpanningForest):
        forest = forest_from_edges(graph, forest)
    tree = forest.tree_edges
    thr = tol.match_threshold(max(float(mod.max()), float(np.max(p.norms))))

    G = np.zeros((n, n), dtype=complex)
    G[np.diag_indices(n)] = np.asarray(p.norms, dtype=float)
    phases = {}
    for key, u in (free_phases or {}).items():
        j, k = (int(x) for x in key)
        if (min(j, k), max(j, k)) not in tree:
            raise InvalidInput(f"free phase given for ({j}, {k}), which is not a tree edge")
        u = complex(u)
        if abs(abs(u) - 1) > tol.rel_match:
            raise InvalidInput(f"free phase for ({j}, {k}) is not of unit modulus")
        phases[(j, k)] = u
        phases[(k, j)] = u.conjugate()
    for j, k in tree:
        val = mod[j, k] * phases.get((j, k), 1.0)
        G[k, j] = val  # <w_j, w_k>
        G[j, k] = np.conj(val)

    basis = fundamental_cycles(graph, forest)
    for cyc, chord in zip(basis.cycles, basis.chords):
        value = p.lookup(cyc)
        if value is None:
            try:
                value = derive_product(p, cyc, tol)
            except NotInSpan:
                raise MissingCycleProduct(cyc) from None
        m = len(cyc)
        known = 1.0 + 0j
        unknown = None
        for i in range(m):
            a, b = cyc[i], cyc[(i + 1) % m]
            if (min(a, b), max(a, b)) == chord:
                unknown = (a, b)
            else:
                known *= G[b, a]
        a, b = unknown
        x = value / known
        if abs(abs(x) - mod[a, b]) > thr:
            raise InconsistentModulus(
                f"cycle {list(cyc)} forces |<w_{a}, w_{b}>| = {abs(x):.6g}, moduli give {mod[a, b]:.6g}"
            )
        x *= mod[a, b] / abs(x)
        G[b, a] = x
        G[a, b] = np.conj(x)

    out = GramMatrix(G)
    if not is_psd(out, tol):
        warnings.warn("reconstructed matrix is not positive semidefinite", NotPSDWarning, stacklevel=2)
    return out


def equivalent_by_products(p1: DeterminingSet, p2: DeterminingSet, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Compare two determining sets over the same cycles (e.g. 2- and 3-products only)."""
    if p1.n != p2.n:
        raise SizeMismatch(f"{p1.n} versus {p2.n} vectors")
    scale = max(float(np.max(p1.moduli)), float(np.max(p2.moduli)), 1.0)
    thr = tol.match_threshold(scale)
    if np.max(np.abs(np.asarray(p1.norms) - np.asarray(p2.norms))) > thr:
        return False
    if np.max(np.abs(np.asarray(p1.moduli) - np.asarray(p2.moduli))) > thr:
        return False
    for prod in p1.cycle_products:
        other = p2.lookup(prod.indices)
        if other is None:
            other = derive_product(p2, prod.indices, tol)
        size = len(prod.indices)
        if abs(prod.value - other) > tol.match_threshold(scale**size):
            return False
    return True


def _circulant(G, thr) -> bool:
    return bool(np.max(np.abs(np.roll(np.roll(G, 1, axis=0), 1, axis=1) - G)) <= thr)


def _spectrum_differs(A, B, thr) -> bool:
    wa, wb = np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
    return bool(np.max(np.abs(wa - wb)) > thr * A.shape[0])


def _reindex_search(G1, G2, tol, budget, unitary):
    n = G1.shape[0]
    thr = _threshold(tol, G1, G2)
    M1, M2 = np.abs(G1), np.abs(G2)

    if _spectrum_differs(G1, G2, thr):
        return None, {"kind": "invariant", "name": "spectrum"}
    if _spectrum_differs(M1, M2, thr):
        return None, {"kind": "invariant", "name": "moduli spectrum"}

    rows1 = np.sort(M1, axis=1)
    rows2 = np.sort(M2, axis=1)
    d1, d2 = G1.diagonal().real, G2.diagonal().real
    cand = []
    for a in range(n):
        ok = (np.max(np.abs(rows1 - rows2[a]), axis=1) <= thr) & (np.abs(d1 - d2[a]) <= thr)
        xs = np.flatnonzero(ok).tolist()
        if not xs:
            return None, {"kind": "invariant", "name": "row moduli", "vertex": a}
        cand.append(xs)

    forest = spanning_forest(build_frame_graph(G2, tol))
    order = list(forest.order)
    parent = forest.parent
    if _circulant(G1, thr):
        # index shifts are automorphisms of G1, so the first image can be fixed
        cand[order[0]] = [x for x in cand[order[0]] if x == 0]

    perm = [-1] * n
    c = np.ones(n, dtype=complex)
    used = [False] * n
    nodes = 0

    def place(depth):
        nonlocal nodes
        if depth == n:
            return True
        a = order[depth]
        done = order[:depth]
        p = parent[a]
        img = [perm[b] for b in done]
        for x in cand[a]:
            if used[x]:
                continue
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(budget, nodes)
            if unitary or p == a:
                ca = 1.0 + 0j
            else:
                z = G1[perm[p], x]
                if abs(z) <= tol.abs_zero:
                    continue
                r = c[p] * G2[p, a] / z
                ca = r / abs(r)
            if done:
                lhs = np.conj(c[done]) * ca * G1[img, x]
                if np.max(np.abs(lhs - G2[done, a])) > thr:
                    continue
            perm[a] = x
            c[a] = ca
            used[x] = True
            if place(depth + 1):
                return True
            used[x] = False
            perm[a] = -1
        return False

    found = place(0)
    if not found:
        return None, {"kind": "search", "nodes": nodes}
    return (tuple(perm), c.copy(), nodes), None


def projective_equiv_reindex(
    g1, g2, tol: Tolerance = DEFAULT_TOL, budget: int = DEFAULT_BUDGET, unitary: bool = False
) -> Verdict:
    """Search for a reindexing ``perm`` (and phases) with
    ``apply_gauge(permute_gram(g1, perm), c) == g2``.

    Backtracks over the vertices of ``g2`` in breadth-first order.  Each
    vertex's phase is forced by its tree parent, so every partial assignment
    is checked exactly against all earlier vertices.  With ``unitary=True``
    all phases are held at 1 (unitary equivalence up to reindexing).

    Raises
    ------
    SearchBudgetExceeded
        When more than ``budget`` search nodes are needed; the answer is unknown.
    """
    G1, G2 = _pair(g1, g2)
    result, witness = _reindex_search(G1, G2, tol, budget, unitary)
    if result is None:
        return Verdict(False, witness=witness)
    perm, c, nodes = result
    return Verdict(True, phases=c, permutation=perm, extra={"nodes": nodes})


def unitary_equiv_reindex(g1, g2, tol: Tolerance = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Verdict:
    return projective_equiv_reindex(g1, g2, tol, budget, unitary=True)


def seidel_data(g, tol: Tolerance = DEFAULT_TOL) -> SeidelData:
    """Seidel matrix and two-graph triples of real equiangular lines ``G = I + alpha S``."""
    G = as_gram(g)
    n = G.shape[0]
    thr = tol.match_threshold(1.0)
    if np.max(np.abs(G.imag)) > thr or np.max(np.abs(G.diagonal() - 1)) > thr:
        raise NotRealEquiangular("Gram matrix is not real with unit diagonal")
    R = G.real
    off = ~np.eye(n, dtype=bool)
    if n < 2:
        raise NotRealEquiangular("need at least two lines")
    alpha = float(np.mean(np.abs(R[off])))
    if alpha <= tol.abs_zero or np.max(np.abs(np.abs(R[off]) - alpha)) > tol.match_threshold(alpha):
        raise NotRealEquiangular("off-diagonal entries are not +-alpha for a common alpha > 0")
    S = np.where(off, np.sign(R), 0).astype(int)
    neg = frozenset(
        (j, k, l)
        for j in range(n)
        for k in range(j + 1, n)
        for l in range(k + 1, n)
        if S[j, k] * S[k, l] * S[l, j] < 0
    )
    return SeidelData(alpha, S, neg)
