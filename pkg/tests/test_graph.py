import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcfreeze.errors import ContractError, SizeError, ValidationError
from pcfreeze.graph import (PriorityOrder, build_generic, build_grid, build_rooted_tree,
                            grid_sides, induced_subgraph, load_edge_list, named_graph,
                            save_edge_list, tree_size)
import pcfreeze.graph as G


def test_degenerate_grid():
    g = build_grid(1, 1)
    assert (g.vertex_count, g.edge_count, g.boundary.tolist()) == (1, 0, [0])


def test_small_grid_counts():
    g = build_grid(2, 2)
    assert (g.vertex_count, g.edge_count) == (4, 4)


def test_large_grid_counts():
    g = build_grid(3076, 2048)
    assert g.vertex_count == 6_299_648
    # width*(height-1) + height*(width-1)
    assert g.edge_count == 12_594_172


@given(st.integers(1, 12), st.integers(1, 12))
def test_grid_invariants(w, h):
    g = build_grid(w, h)
    assert g.edge_count == w * (h - 1) + h * (w - 1)
    deg = g.degrees()
    if w >= 2 and h >= 2:
        corners = [0, w - 1, (h - 1) * w, h * w - 1]
        assert set(deg[corners].tolist()) == {2}
        interior = [y * w + x for y in range(1, h - 1) for x in range(1, w - 1)]
        assert np.all(deg[interior] == 4)
    perim = {y * w + x for y in range(h) for x in range(w)
             if x in (0, w - 1) or y in (0, h - 1)}
    assert set(g.boundary.tolist()) == perim
    for v in range(g.vertex_count):
        for e in g.incident(v).tolist():
            assert v in g.edges[e].tolist()
    assert sum(len(g.incident(v)) for v in range(g.vertex_count)) == 2 * g.edge_count


def test_grid_row_major_and_edge_order():
    g = build_grid(3, 2)
    assert g.edges[:4].tolist() == [[0, 1], [1, 2], [3, 4], [4, 5]]
    assert g.edges[4:].tolist() == [[0, 3], [1, 4], [2, 5]]


def test_grid_size_error(monkeypatch):
    monkeypatch.setattr(G, "MAX_VERTICES", 100)
    with pytest.raises(SizeError):
        build_grid(11, 10)
    with pytest.raises(ValidationError):
        build_grid(0, 3)


@pytest.mark.parametrize("d,depth,n,m,b", [(2, 0, 1, 0, 1), (2, 2, 7, 6, 4), (3, 2, 13, 12, 9)])
def test_tree_counts(d, depth, n, m, b):
    g = build_rooted_tree(d, depth)
    assert (g.vertex_count, g.edge_count, len(g.boundary)) == (n, m, b)
    assert tree_size(d, depth) == n


@given(st.integers(2, 4), st.integers(0, 5))
def test_tree_is_a_tree_with_increasing_priorities(d, depth):
    g = build_rooted_tree(d, depth)
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.vertex_count))
    nxg.add_edges_from(g.edges.tolist())
    assert nx.is_tree(nxg)
    assert PriorityOrder.for_graph(g).check_tree_paths(g)
    depths = nx.single_source_shortest_path_length(nxg, 0)
    assert {v for v, k in depths.items() if k == depth} == set(g.boundary.tolist())


def test_tree_priority_violation_detected():
    g = build_rooted_tree(2, 2)
    rank = np.arange(7)
    rank[[0, 3]] = rank[[3, 0]]
    assert not PriorityOrder(rank).check_tree_paths(g)
    with pytest.raises(ContractError):
        PriorityOrder.identity(4).check_tree_paths(build_grid(2, 2))


def test_priority_must_be_permutation():
    with pytest.raises(ValidationError):
        PriorityOrder(np.array([0, 0, 1]))


def test_generic_validation():
    assert build_generic(2, [(0, 1)]).edge_count == 1
    assert build_generic(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).edge_count == 4
    for bad in ([(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(-1, 0)]):
        with pytest.raises(ValidationError):
            build_generic(3, bad)
    with pytest.raises(ValidationError):
        build_generic(3, [(0, 1)], [7])


def test_edge_list_roundtrip(tmp_path):
    g = build_generic(4, [(0, 1), (1, 2), (2, 3)], [0, 3])
    p = tmp_path / "g.txt"
    save_edge_list(g, p)
    assert p.read_text().split("\n")[0] == "4 3 2"
    h = load_edge_list(p)
    assert h.edges.tolist() == g.edges.tolist() and h.boundary.tolist() == [0, 3]
    p.write_text("3 2 0\n0 1\n")
    with pytest.raises(ValidationError):
        load_edge_list(p)


def test_induced_subgraph_boundary():
    g = build_grid(4, 4)
    # 2x2 block in the middle: every vertex meets an edge leaving the block
    h, vmap, emap = induced_subgraph(g, [5, 6, 9, 10])
    assert h.vertex_count == 4 and h.edge_count == 4
    assert sorted(vmap[h.boundary].tolist()) == [5, 6, 9, 10]
    # the whole grid keeps its own perimeter as boundary
    h, vmap, _ = induced_subgraph(g, range(16))
    assert sorted(vmap[h.boundary].tolist()) == sorted(g.boundary.tolist())
    with pytest.raises(ContractError):
        induced_subgraph(g, [99])
    with pytest.raises(ContractError):
        induced_subgraph(g, [0, 1], [g.edge_count - 1])


def test_grid_sides_and_named():
    left, right = grid_sides(build_grid(3, 2))
    assert left.tolist() == [0, 3] and right.tolist() == [2, 5]
    assert named_graph("c4").edge_count == 4
    with pytest.raises(ValidationError):
        named_graph("nope")
