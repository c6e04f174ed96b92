import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frameq import (
    Frame,
    FrameGraph,
    InvalidInput,
    build_frame_graph,
    canonical_cycle,
    cycle_edges,
    forest_from_edges,
    fundamental_cycles,
    gf2_decompose,
    gram,
    is_chordal,
    spanning_forest,
    triangle_basis,
)
from helpers import mub_frame

TRIANGLE_COVERED_EDGES = [(1, 2), (1, 3), (2, 3), (2, 4), (2, 6), (3, 5), (3, 7), (4, 6), (5, 7), (6, 7), (6, 8), (7, 8)]


def triangle_covered_graph():
    return FrameGraph.from_edges(8, [(a - 1, b - 1) for a, b in TRIANGLE_COVERED_EDGES])


def to_nx(graph):
    G = nx.Graph()
    G.add_nodes_from(range(graph.n))
    G.add_edges_from(graph.edges)
    return G


def bfs_oracle(graph):
    """Tree edges of a BFS from the lowest vertex of each component, neighbours in increasing order."""
    G = to_nx(graph)
    edges = set()
    seen = set()
    for r in range(graph.n):
        if r in seen:
            continue
        comp = nx.node_connected_component(G, r)
        seen |= comp
        H = nx.Graph()
        H.add_nodes_from(sorted(comp))
        H.add_edges_from(sorted(G.subgraph(comp).edges()))
        succ = nx.bfs_successors(H, r, sort_neighbors=sorted)
        for p, children in succ:
            edges |= {tuple(sorted((p, c))) for c in children}
    return edges


def edge_vector(cycle, index):
    v = 0
    for e in cycle_edges(cycle):
        v ^= 1 << index[e]
    return v


def gf2_rank(vectors):
    pivots = {}
    for v in vectors:
        for bit in sorted(pivots, reverse=True):
            if v >> bit & 1:
                v ^= pivots[bit]
        if v:
            pivots[v.bit_length() - 1] = v
    return len(pivots)


def random_graph(rng, n, p):
    return FrameGraph.from_edges(n, [(j, k) for j, k in itertools.combinations(range(n), 2) if rng.random() < p])


def test_frame_graph_of_identity_is_empty():
    g = build_frame_graph(np.eye(3))
    assert g.num_edges == 0
    assert g.components() == [[0], [1], [2]]


def test_frame_graph_of_three_equiangular_vectors_is_triangle():
    g = build_frame_graph(np.full((3, 3), 0.5) + 0.5 * np.eye(3))
    assert g.edges == [(0, 1), (0, 2), (1, 2)]


def test_frame_graph_of_mub_is_four_cycle():
    g = build_frame_graph(gram(Frame(mub_frame())))
    assert g.edges == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert g.cyclomatic_number() == 1


def test_from_edges_validation():
    with pytest.raises(InvalidInput):
        FrameGraph.from_edges(3, [(0, 0)])
    with pytest.raises(InvalidInput):
        FrameGraph.from_edges(3, [(0, 3)])


def test_spanning_forest_examples():
    empty = spanning_forest(FrameGraph.from_edges(3, []))
    assert empty.roots == (0, 1, 2)
    assert empty.tree_edges == frozenset()

    k3 = spanning_forest(FrameGraph.complete(3))
    assert k3.roots == (0,)
    assert k3.tree_edges == {(0, 1), (0, 2)}

    c4 = spanning_forest(FrameGraph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]))
    assert c4.roots == (0,)
    assert c4.tree_edges == {(0, 2), (0, 3), (1, 2)}


def test_fundamental_cycles_of_tree_is_empty():
    g = FrameGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert len(fundamental_cycles(g)) == 0


def test_fundamental_cycles_k4_star_and_path():
    k4 = FrameGraph.complete(4)
    star = fundamental_cycles(k4)
    assert set(star.cycles) == {(0, 1, 2), (0, 1, 3), (0, 2, 3)}
    path = fundamental_cycles(k4, forest_from_edges(k4, [(0, 1), (1, 2), (2, 3)]))
    assert set(path.cycles) == {(0, 1, 2, 3), (0, 1, 2), (1, 2, 3)}


def test_forest_from_edges_validation():
    k4 = FrameGraph.complete(4)
    with pytest.raises(InvalidInput):
        forest_from_edges(k4, [(0, 1), (1, 2)])
    with pytest.raises(InvalidInput):
        forest_from_edges(k4, [(0, 1), (1, 2), (0, 2)])
    c4 = FrameGraph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    with pytest.raises(InvalidInput):
        forest_from_edges(c4, [(0, 1), (0, 2), (0, 3)])


def test_canonical_cycle():
    assert canonical_cycle((2, 0, 1)) == ((0, 1, 2), False)
    assert canonical_cycle((2, 1, 0)) == ((0, 1, 2), True)
    assert canonical_cycle((3, 1, 2, 0)) == ((0, 2, 1, 3), True)


def test_triangle_basis_examples():
    assert len(triangle_basis(FrameGraph.complete(4))) == 3
    c4 = FrameGraph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    assert triangle_basis(c4) is None
    assert triangle_basis(FrameGraph.from_edges(3, [(0, 1)])).cycles == ()


@pytest.mark.parametrize("d", [2, 3])
def test_triangle_basis_complete_tripartite(d):
    parts = [range(i * d, (i + 1) * d) for i in range(3)]
    edges = [(a, b) for p, q in itertools.combinations(parts, 2) for a in p for b in q]
    g = FrameGraph.from_edges(3 * d, edges)
    basis = triangle_basis(g)
    assert basis is not None
    assert len(basis) == g.cyclomatic_number() == 3 * d * d - 3 * d + 1


def test_chordality_examples():
    assert is_chordal(FrameGraph.complete(5))
    assert not is_chordal(FrameGraph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]))
    assert not is_chordal(triangle_covered_graph())


def test_every_edge_on_a_triangle_but_no_triangle_basis():
    g = triangle_covered_graph()
    G = to_nx(g)
    for u, v in g.edges:
        assert set(G[u]) & set(G[v])
    assert g.cyclomatic_number() == 5
    assert sum(nx.triangles(G).values()) // 3 == 4
    assert triangle_basis(g) is None


def test_gf2_decompose():
    assert gf2_decompose([0b011, 0b110], 0b101) == [0, 1]
    assert gf2_decompose([0b011], 0b100) is None


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), st.floats(0.0, 1.0), st.integers(0, 2**32 - 1))
def test_graph_algorithms_against_networkx(n, p, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p)
    G = to_nx(g)
    forest = spanning_forest(g)
    assert set(forest.tree_edges) == bfs_oracle(g)
    assert sorted(map(sorted, nx.connected_components(G))) == g.components()

    basis = fundamental_cycles(g, forest)
    assert len(basis) == g.cyclomatic_number() == g.num_edges - n + nx.number_connected_components(G)
    index = {e: i for i, e in enumerate(g.edges)}
    for cyc in basis.cycles:
        assert all(G.has_edge(*e) for e in cycle_edges(cyc))
        assert len(set(cyc)) == len(cyc)
    assert gf2_rank([edge_vector(c, index) for c in basis.cycles]) == len(basis)

    assert is_chordal(g) == nx.is_chordal(G)
    tri = triangle_basis(g)
    all_triangles = [c for c in itertools.combinations(range(n), 3) if all(G.has_edge(*e) for e in cycle_edges(c))]
    spans = gf2_rank([edge_vector(c, index) for c in all_triangles]) == len(basis)
    assert (tri is not None) == spans
    if tri is not None:
        assert gf2_rank([edge_vector(c, index) for c in tri.cycles]) == len(basis) == len(tri)
    if is_chordal(g):
        assert tri is not None
