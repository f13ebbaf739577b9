import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import edge_lists

from societykit.graph_core import (
    Cycle,
    Graph,
    Path,
    bipartite_matching,
    disjoint_paths,
    find_minor_model_bruteforce,
    h_bridges,
    is_linkage,
    leftmost_min_separation,
    model_from_branch_sets,
    sort_ids,
    verify_minor_model,
)


def _nx_vertex_flow(g: Graph, X, Y) -> int:
    """Max number of disjoint X-Y paths, by networkx node connectivity on a super source/sink."""
    X, Y = set(X), set(Y)
    shared = X & Y
    H = nx.Graph()
    H.add_nodes_from(g.vertices - shared)
    H.add_edges_from(uv for _, uv in g.edges if uv[0] != uv[1] and not set(uv) & shared)
    H.add_node("s")
    H.add_node("t")
    H.add_edges_from(("s", x) for x in X - shared)
    H.add_edges_from((y, "t") for y in Y - shared)
    if H.has_edge("s", "t") or not (X - shared) or not (Y - shared):
        extra = 0
    else:
        extra = nx.node_connectivity(H, "s", "t") if nx.has_path(H, "s", "t") else 0
    return len(shared) + extra


def test_path_basics():
    g = Graph.from_edge_list(range(4), [(0, 1), (1, 2), (2, 3)])
    p = Path.from_vertices(g, [0, 1, 2, 3])
    assert p.ends == (0, 3) and p.length == 3 and p.internal == (1, 2)
    assert p.reversed().vertices == (3, 2, 1, 0)
    assert p.sub(1, 3).vertices == (1, 2, 3)
    assert p.sub(0, 1).join(p.sub(1, 3)) == p
    assert p.canonical() == p.reversed().canonical()
    with pytest.raises(ValueError):
        Path.from_vertices(g, [0, 2])


def test_cycle_requires_closing_edge():
    g = Graph.from_edge_list(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    c = Cycle.from_vertices(g, [0, 1, 2, 3])
    assert c.length == 4 and c.is_valid_in(g)
    h = Graph.from_edge_list(range(4), [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(ValueError):
        Cycle.from_vertices(h, [0, 1, 2, 3])


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(frozenset({0}), ((0, (0, 1)),))
    with pytest.raises(ValueError):
        Graph(frozenset({0, 1}), ((0, (0, 1)), (0, (1, 0))))


def test_sort_ids_mixes_types():
    assert sort_ids([3, "a", 1, ("x", 2)]) == sort_ids(["a", ("x", 2), 1, 3])


@settings(max_examples=150, deadline=None)
@given(edge_lists(), st.data())
def test_disjoint_paths_is_maximum(el, data):
    V, E = el
    g = Graph.from_edge_list(V, E)
    X = data.draw(st.sets(st.sampled_from(V), min_size=1))
    Y = data.draw(st.sets(st.sampled_from(V), min_size=1))
    paths, sep = disjoint_paths(g, X, Y)
    assert is_linkage(g, paths)
    for p in paths:
        assert p.start in X and p.end in Y
    # Menger: the separation has the same order as the linkage
    assert sep.is_valid_in(g)
    assert sep.order == len(paths)
    assert X <= sep.A and Y <= sep.B
    assert len(paths) == _nx_vertex_flow(g, X, Y)


def test_disjoint_paths_forbidden_internal():
    g = Graph.from_edge_list(range(4), [(0, 1), (1, 2), (0, 3), (3, 2)])
    paths, _ = disjoint_paths(g, {0}, {2}, forbidden_internal={1, 3})
    assert paths == ()
    paths, _ = disjoint_paths(g, {0}, {2}, forbidden_internal={1})
    assert [p.vertices for p in paths] == [(0, 3, 2)]


def test_leftmost_separation_orders():
    # two parallel routes, then a bottleneck
    g = Graph.from_edge_list(range(6), [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5)])
    res = leftmost_min_separation(g, {0}, {5}, 1)
    assert res.separation.order <= 1
    assert res.separation.is_valid_in(g)


def test_h_bridges_of_cycle_with_chord_and_pendant():
    g = Graph.from_edge_list(range(5), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 4)])
    bridges = h_bridges(g, {0, 1, 2, 3}, {0, 1, 2, 3})
    kinds = sorted((len(b.vertices), sort_ids(b.attachments)) for b in bridges)
    assert kinds == [(0, [0, 2]), (1, [1])]


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.integers(0, 6), st.lists(st.integers(0, 6), max_size=4), max_size=7))
def test_bipartite_matching_matches_networkx(opts):
    m = bipartite_matching(opts)
    assert len(set(m.values())) == len(m)
    assert all(m[k] in opts[k] for k in m)
    B = nx.Graph()
    left = [("l", k) for k in opts]
    B.add_nodes_from(left)
    B.add_edges_from((("l", k), ("r", v)) for k, vs in opts.items() for v in vs)
    ref = nx.bipartite.maximum_matching(B, top_nodes=left) if B.number_of_edges() else {}
    assert len(m) == len(ref) // 2


def _complete(n):
    return Graph.from_edge_list(range(n), list(itertools.combinations(range(n), 2)))


def test_minor_models_on_complete_graphs():
    for n in range(1, 6):
        g = _complete(n)
        m = model_from_branch_sets(g, [{i} for i in range(n)])
        assert m is not None and verify_minor_model(g, m)
        assert find_minor_model_bruteforce(g, n) is not None
        assert find_minor_model_bruteforce(g, n + 1) is None


def test_verify_rejects_disconnected_or_overlapping_sets():
    g = Graph.from_edge_list(range(4), [(0, 1), (1, 2), (2, 3)])
    for sets in ([{0, 2}, {1}], [{0, 1}, {1, 2}]):
        m = model_from_branch_sets(g, sets)
        assert m is None or not verify_minor_model(g, m)
    assert model_from_branch_sets(g, [{0}, {2}]) is None
    m = model_from_branch_sets(g, [{0, 1}, {2, 3}])
    assert m is not None and verify_minor_model(g, m)


def test_bruteforce_k4_in_wheel_not_in_tree():
    # the wheel W4 contains K4, a tree never does
    wheel = Graph.from_edge_list(range(5), [(0, 1), (1, 2), (2, 3), (3, 0)] + [(4, i) for i in range(4)])
    m = find_minor_model_bruteforce(wheel, 4)
    assert m is not None and verify_minor_model(wheel, m)
    tree = Graph.from_edge_list(range(7), [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert find_minor_model_bruteforce(tree, 3) is None
