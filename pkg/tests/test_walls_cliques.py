import random
from math import comb

import pytest

from societykit.generators import gadget_ring, nested_crosses_fixture
from societykit.graph_core import grasp_ok, model_from_branch_sets, verify_minor_model
from societykit.walls_cliques import (
    HypothesisViolated,
    RTooSmall,
    certificate_json,
    clique_from_handles_crosscaps,
    clique_from_nested_crosses,
    elementary_wall,
    far_from_boundary,
    grasp_binding,
    h1,
    h1_clique,
    vicinity,
)

# vertex and edge counts below were counted once by hand for r = 2 and then by the
# constructors; the vertex count follows 2r^2 - 2
WALL_EDGES = {2: 6, 3: 19, 4: 38, 5: 63}


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_elementary_wall_shape(r):
    w = elementary_wall(r)
    g = w.graph
    assert len(g.vertices) == 2 * r * r - 2
    assert len(g.edges) == WALL_EDGES[r]
    assert max(len(g.neighbors(v)) for v in g.vertices) == (2 if r == 2 else 3)
    assert len(w.corners) == 4 and w.corners <= w.pegs
    assert w.outer_cycle.is_valid_in(g)
    assert w.mesh.is_valid() and w.mesh.r == w.mesh.s == r


def test_wall_needs_r_at_least_two():
    with pytest.raises(RTooSmall):
        elementary_wall(1)
    with pytest.raises(RTooSmall):
        h1(0)


@pytest.mark.parametrize("r", [1, 2, 3, 5])
def test_h1_counts(r):
    g, mesh = h1(r)
    n = 2 * r
    assert len(g.vertices) == n * n
    assert len(g.edges) == 2 * n * (n - 1) + 2 * (n - 1)
    assert mesh.is_valid() and mesh.r == mesh.s == n


def test_vicinity_and_distance_to_boundary():
    g, mesh = h1(3)
    assert vicinity(mesh, (1, 1)) == (frozenset([0]), frozenset([0]))
    assert far_from_boundary(mesh, (3, 3), 2)
    assert not far_from_boundary(mesh, (2, 3), 2)
    assert far_from_boundary(mesh, (1, 1), 0)
    with pytest.raises(ValueError):
        vicinity(mesh, (0, 0))


def test_wall_vicinity_of_subdivision_vertex():
    w = elementary_wall(3)
    on = {v for P in w.mesh.horizontal + w.mesh.vertical for v in P.vertices}
    off = [v for v in w.graph.vertices if v not in on]
    for v in off:
        hs, vs = vicinity(w.mesh, v)
        assert 1 <= len(hs) <= 2 and 1 <= len(vs) <= 2


@pytest.mark.parametrize("p", range(2, 7))
def test_h1_clique(p):
    res = h1_clique(p)
    assert len(res.model.branch_sets) == p
    assert verify_minor_model(res.graph, res.model, res.binding)
    assert grasp_ok(res.graph, res.model, res.binding)
    cert = certificate_json(res)
    assert len(cert["branch_sets"]) == p


def test_grasp_binding_rejects_thin_sets():
    g, mesh = h1(1)
    model = model_from_branch_sets(g, [{(1, 1)}, {(2, 1)}])
    rows = [P.vertices for P in mesh.horizontal]
    cols = [P.vertices for P in mesh.vertical]
    # a single vertex meets only one row and one column, so it cannot own two pairs
    assert grasp_binding(model, rows, cols) is None


@pytest.mark.parametrize("twisted", [False, True])
def test_clique_from_nested_crosses(twisted):
    f = nested_crosses_fixture(2, twisted)
    fx = f.fixture
    res = clique_from_nested_crosses(fx.rendition, fx.nest, fx.spokes, f.N, 2, twisted)
    assert len(res.model.branch_sets) == 2
    assert verify_minor_model(res.graph, res.model)
    assert grasp_ok(res.graph, res.model, res.binding)


def test_nested_crosses_needs_enough_paths():
    f = nested_crosses_fixture(2)
    fx = f.fixture
    with pytest.raises(HypothesisViolated):
        clique_from_nested_crosses(fx.rendition, fx.nest, fx.spokes, f.N[:3], 2)


@pytest.mark.parametrize("kinds", ["cccc", "hhhh", "chch"])
def test_clique_from_gadgets_p2(kinds):
    gf = gadget_ring(2, kinds)
    fx = gf.fixture
    res = clique_from_handles_crosscaps(fx.rendition, fx.nest, gf.transactions, gf.segments, 2)
    assert verify_minor_model(res.graph, res.model)
    assert grasp_ok(res.graph, res.model, res.binding)
    assert max(k for _, k in res.trace) == comb(2, 2)


def test_gadgets_need_enough_sectors():
    gf = gadget_ring(3, rng=random.Random(1))
    fx = gf.fixture
    with pytest.raises(HypothesisViolated):
        clique_from_handles_crosscaps(fx.rendition, fx.nest, gf.transactions[:3], gf.segments[:3], 3)
