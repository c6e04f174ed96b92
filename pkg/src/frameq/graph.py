"""Frame graphs: spanning forests, fundamental cycles, triangle bases, chordality.

Vertices are ``0..n-1``.  Adjacency is kept as one integer bitset per vertex.
Ties are always broken towards the lowest vertex index so that forests and
cycle bases are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .core import DEFAULT_TOL, Tolerance, as_gram
from .errors import InvalidInput

__all__ = [
    "FrameGraph",
    "SpanningForest",
    "CycleBasis",
    "build_frame_graph",
    "spanning_forest",
    "forest_from_edges",
    "fundamental_cycles",
    "triangle_basis",
    "is_chordal",
    "canonical_cycle",
    "cycle_edges",
    "gf2_decompose",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _edge(j: int, k: int) -> tuple:
    return (j, k) if j < k else (k, j)


@dataclass(frozen=True)
class FrameGraph:
    n: int
    adj: tuple  # adj[j] is a bitset of the neighbours of j

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "FrameGraph":
        adj = [0] * n
        for j, k in edges:
            j, k = int(j), int(k)
            if j == k:
                raise InvalidInput(f"self-loop at vertex {j}")
            if not (0 <= j < n and 0 <= k < n):
                raise InvalidInput(f"edge ({j}, {k}) out of range for {n} vertices")
            adj[j] |= 1 << k
            adj[k] |= 1 << j
        return cls(n, tuple(adj))

    @classmethod
    def complete(cls, n: int) -> "FrameGraph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << j) for j in range(n)))

    def has_edge(self, j: int, k: int) -> bool:
        return bool(self.adj[j] >> k & 1)

    def neighbors(self, j: int) -> list:
        return list(_bits(self.adj[j]))

    def degree(self, j: int) -> int:
        return bin(self.adj[j]).count("1")

    @property
    def edges(self) -> list:
        return [(j, k) for j in range(self.n) for k in _bits(self.adj[j] >> (j + 1) << (j + 1))]

    @property
    def num_edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def components(self) -> list:
        seen = 0
        comps = []
        for r in range(self.n):
            if seen >> r & 1:
                continue
            comp = 1 << r
            frontier = comp
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(sorted(_bits(comp)))
        return comps

    def cyclomatic_number(self) -> int:
        return self.num_edges - self.n + len(self.components())


@dataclass(frozen=True)
class SpanningForest:
    """Rooted spanning forest; ``parent[v] == v`` exactly for roots."""

    parent: tuple
    roots: tuple
    order: tuple  # vertices in the order they were reached
    depth: tuple

    @property
    def tree_edges(self) -> frozenset:
        return frozenset(_edge(v, p) for v, p in enumerate(self.parent) if v != p)

    def path_to_root(self, v: int) -> list:
        path = [v]
        while self.parent[v] != v:
            v = self.parent[v]
            path.append(v)
        return path

    def tree_path(self, u: int, v: int) -> list:
        """Vertices on the tree path from ``u`` to ``v`` (inclusive)."""
        pu, pv = [u], [v]
        a, b = u, v
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
            pu.append(a)
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
            pv.append(b)
        while a != b:
            if self.parent[a] == a:
                raise InvalidInput(f"vertices {u} and {v} lie in different trees")
            a, b = self.parent[a], self.parent[b]
            pu.append(a)
            pv.append(b)
        return pu + pv[-2::-1]


@dataclass(frozen=True)
class CycleBasis:
    cycles: tuple
    chords: tuple = field(default=())  # defining non-tree edge per cycle, if any

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)


def build_frame_graph(g, tol: Tolerance = DEFAULT_TOL) -> FrameGraph:
    """Edge ``{j, k}`` iff ``|G[j, k]| > abs_zero``."""
    G = as_gram(g)
    A = np.abs(G) > tol.abs_zero
    np.fill_diagonal(A, False)
    n = G.shape[0]
    adj = []
    for j in range(n):
        mask = 0
        for k in np.flatnonzero(A[j]):
            mask |= 1 << int(k)
        adj.append(mask)
    return FrameGraph(n, tuple(adj))


def _bfs_forest(n, neighbours) -> SpanningForest:
    parent = [-1] * n
    depth = [0] * n
    roots, order = [], []
    for r in range(n):
        if parent[r] != -1:
            continue
        parent[r] = r
        roots.append(r)
        queue = deque([r])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in neighbours(v):
                if parent[w] == -1:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
    return SpanningForest(tuple(parent), tuple(roots), tuple(order), tuple(depth))


def spanning_forest(graph: FrameGraph) -> SpanningForest:
    """Breadth-first forest, rooted at the lowest vertex of each component."""
    return _bfs_forest(graph.n, graph.neighbors)


def forest_from_edges(graph: FrameGraph, tree_edges: Iterable) -> SpanningForest:
    """Root a caller-chosen spanning forest of ``graph`` (BFS from lowest vertices)."""
    tree = FrameGraph.from_edges(graph.n, tree_edges)
    for j, k in tree.edges:
        if not graph.has_edge(j, k):
            raise InvalidInput(f"tree edge ({j}, {k}) is not an edge of the frame graph")
    if tree.num_edges != graph.n - len(graph.components()) or tree.cyclomatic_number() != 0:
        raise InvalidInput("edges do not form a spanning forest of the frame graph")
    return _bfs_forest(graph.n, tree.neighbors)


def canonical_cycle(seq) -> tuple:
    """Rotate a closed walk to start at its least vertex, oriented so that the
    second vertex is smaller than the last.  Returns ``(cycle, reversed)``."""
    seq = [int(v) for v in seq]
    i = seq.index(min(seq))
    rot = seq[i:] + seq[:i]
    if len(rot) > 2 and rot[1] > rot[-1]:
        return (rot[0],) + tuple(reversed(rot[1:])), True
    return tuple(rot), False


def cycle_edges(cycle) -> list:
    m = len(cycle)
    return [_edge(cycle[i], cycle[(i + 1) % m]) for i in range(m)]


def fundamental_cycles(graph: FrameGraph, forest: Optional[SpanningForest] = None) -> CycleBasis:
    """One cycle per non-tree edge: the chord closed up by the tree path between its ends."""
    if forest is None:
        forest = spanning_forest(graph)
    tree = forest.tree_edges
    cycles, chords = [], []
    for u, v in graph.edges:
        if (u, v) in tree:
            continue
        cyc, _ = canonical_cycle(forest.tree_path(u, v))
        cycles.append(cyc)
        chords.append((u, v))
    return CycleBasis(tuple(cycles), tuple(chords))


def _chord_vector(cycle, chord_index) -> int:
    vec = 0
    for e in cycle_edges(cycle):
        idx = chord_index.get(e)
        if idx is not None:
            vec ^= 1 << idx
    return vec


def gf2_decompose(vectors, target: int) -> Optional[list]:
    """Indices of ``vectors`` (int bitsets) whose XOR is ``target``, or None."""
    pivots = {}  # pivot bit -> (reduced vector, combination bitset)
    for i, v in enumerate(vectors):
        combo = 1 << i
        for bit in sorted(pivots, reverse=True):
            if v >> bit & 1:
                pv, pc = pivots[bit]
                v ^= pv
                combo ^= pc
        if v:
            pivots[v.bit_length() - 1] = (v, combo)
    combo = 0
    for bit in sorted(pivots, reverse=True):
        if target >> bit & 1:
            pv, pc = pivots[bit]
            target ^= pv
            combo ^= pc
    if target:
        return None
    return list(_bits(combo))


def triangle_basis(graph: FrameGraph, forest: Optional[SpanningForest] = None) -> Optional[CycleBasis]:
    """An independent set of triangles spanning the cycle space, or None if none exists.

    Triangles are reduced over GF(2) in the coordinates of the non-tree edges,
    which is a faithful coordinate system for the cycle space.
    """
    if forest is None:
        forest = spanning_forest(graph)
    tree = forest.tree_edges
    chord_index = {e: i for i, e in enumerate(e for e in graph.edges if e not in tree)}
    target_rank = len(chord_index)
    if target_rank == 0:
        return CycleBasis(())
    chosen = []
    pivots = {}
    for j in range(graph.n):
        higher = graph.adj[j] >> (j + 1) << (j + 1)
        for k in _bits(higher):
            for l in _bits(higher & graph.adj[k] & ~((1 << (k + 1)) - 1)):
                v = _chord_vector((j, k, l), chord_index)
                for bit in sorted(pivots, reverse=True):
                    if v >> bit & 1:
                        v ^= pivots[bit]
                if v:
                    pivots[v.bit_length() - 1] = v
                    chosen.append((j, k, l))
                    if len(chosen) == target_rank:
                        return CycleBasis(tuple(chosen))
    return None


def is_chordal(graph: FrameGraph) -> bool:
    """Maximum cardinality search followed by a perfect-elimination check."""
    n = graph.n
    weight = [0] * n
    visited = 0
    order = []
    for _ in range(n):
        best = max((v for v in range(n) if not visited >> v & 1), key=lambda v: (weight[v], -v))
        order.append(best)
        visited |= 1 << best
        for w in _bits(graph.adj[best] & ~visited):
            weight[w] += 1
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in _bits(graph.adj[v]) if position[w] < position[v]]
        if len(earlier) < 2:
            continue
        u = max(earlier, key=position.__getitem__)
        rest = 0
        for w in earlier:
            if w != u:
                rest |= 1 << w
        if rest & ~graph.adj[u]:
            return False
    return True
