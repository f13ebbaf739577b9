import itertools

from hypothesis import given, settings
from strategies import edge_lists

from societykit.graph_core import Graph
from societykit.planarity import (
    Embedding,
    embed_with_outer_cycle,
    faces,
    framed_embedding,
    is_plane,
    planarity_test,
)


def _k(n):
    return Graph.from_edge_list(range(n), list(itertools.combinations(range(n), 2)))


def _k33():
    return Graph.from_edge_list(range(6), [(a, b) for a in range(3) for b in range(3, 6)])


def _subdivide(g: Graph) -> Graph:
    V = set(g.vertices)
    E = []
    for e, (u, v) in g.edges:
        m = ("s", e)
        V.add(m)
        E += [(u, m), (m, v)]
    return Graph.from_edge_list(V, E)


def test_kuratowski_graphs_are_rejected():
    for g in (_k(5), _k33(), _subdivide(_k(5)), _subdivide(_k33())):
        assert planarity_test(g) is None


def test_k4_faces_satisfy_euler():
    emb = planarity_test(_k(4))
    assert emb is not None and is_plane(emb)
    assert len(faces(emb)) == 4


@settings(max_examples=200, deadline=None)
@given(edge_lists(max_n=8, max_m=16))
def test_embeddings_are_plane(el):
    V, E = el
    g = Graph.from_edge_list(V, E)
    emb = planarity_test(g)
    simple = {frozenset(uv) for uv in E if uv[0] != uv[1]}
    if emb is None:
        # a planar simple graph never exceeds 3n - 6 edges; the converse check is the Euler test
        assert len(simple) >= 9
    else:
        assert is_plane(emb)


def test_is_plane_rejects_twisted_rotation():
    g = _k(4)
    emb = planarity_test(g)
    rot = dict(emb.rotation)
    v = 0
    r = list(rot[v])
    r[0], r[1] = r[1], r[0]
    rot[v] = tuple(r)
    # swapping two darts at a degree-3 vertex of K4 gives a torus embedding
    assert not is_plane(Embedding(rot, emb.ends))


def test_outer_cycle_respects_boundary_order():
    wheel = Graph.from_edge_list(range(5), [(0, 1), (1, 2), (2, 3), (3, 0)] + [(4, i) for i in range(4)])
    emb = embed_with_outer_cycle(wheel, [0, 1, 2, 3])
    assert emb is not None and is_plane(emb)
    assert set(emb.face_vertices(emb.outer_face())) == {0, 1, 2, 3}
    # with 0 and 2 adjacent on the boundary the hub would have to cross the rim
    assert framed_embedding(wheel, [0, 2, 1, 3]) is None


def test_two_crossing_chords_have_no_disk_embedding():
    g = Graph.from_edge_list(range(4), [(0, 2), (1, 3)])
    assert framed_embedding(g, [0, 1, 2, 3]) is None
    assert framed_embedding(g, [0, 2, 1, 3]) is not None
