import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from societykit.generators import leap_pattern, rooted_linkage_ladder
from societykit.graph_core import Graph, Path, is_linkage
from societykit.renditions import coterminal
from societykit.rerouting import (
    EndpointOfP,
    HypothesisViolated,
    LeapPattern,
    NotALeap,
    PreconditionViolated,
    SDiverseFamily,
    augment_diverse,
    crooked_absorb_one,
    crooked_absorb_two,
    cross_reroute,
    d_metric,
    hooks,
    is_s_diverse,
    majority_equivalent,
    minimalize_leap,
    root_linkage,
    strictly_decreasing,
    verify_leap,
)
from societykit.society import build_society, flip
from societykit.transactions import Cross, is_cross, is_crooked, is_transaction


def test_strictly_decreasing():
    assert strictly_decreasing([("a", 3), ("b", 9), ("a", 2), ("b", 1)])
    assert not strictly_decreasing([("a", 3), ("a", 3)])
    assert strictly_decreasing([])


def _cross_with_tail():
    om = [0, 1, 6, 2, 3]
    soc = build_society(range(8), [(0, 4), (4, 2), (1, 5), (5, 3), (6, 7), (7, 4)], om)
    g = soc.graph
    c = Cross(Path.from_vertices(g, [0, 4, 2]), Path.from_vertices(g, [1, 5, 3]))
    return soc, c, Path.from_vertices(g, [6, 7, 4])


def test_cross_reroute_keeps_a_cross():
    soc, c, R = _cross_with_tail()
    assert is_cross(soc, c)
    out = cross_reroute(soc, c, R)
    assert is_cross(soc, out)
    assert 7 in out.p1.vertex_set | out.p2.vertex_set
    assert cross_reroute(soc, c, R.reversed()) == out


def test_cross_reroute_rejects_non_cross():
    soc, c, R = _cross_with_tail()
    with pytest.raises(PreconditionViolated):
        cross_reroute(soc, Cross(c.p1, c.p1), R)


def _crooked_three_with_attachments():
    """Three pairwise crossing chords with middles 6, 7, 8 and a tail from 10 onto 7."""
    om = [0, 1, 2, 10, 3, 4, 5, 11]
    E = [(0, 6), (6, 3), (1, 7), (7, 4), (2, 8), (8, 5), (10, 12), (12, 7)]
    soc = build_society(range(13), E, om)
    g = soc.graph
    T = [Path.from_vertices(g, s) for s in ([0, 6, 3], [1, 7, 4], [2, 8, 5])]
    return soc, T, Path.from_vertices(g, [10, 12, 7])


def test_crooked_absorb_one():
    soc, T, Q = _crooked_three_with_attachments()
    assert is_crooked(soc, T)
    res = crooked_absorb_one(soc, T, T[1], Q)
    if res.kind == "crooked":
        assert is_crooked(soc, res.paths) and is_transaction(soc, res.paths)
        assert 12 in {v for p in res.paths for v in p.vertices}
    else:
        assert res.obstruction is not None
    with pytest.raises(PreconditionViolated):
        crooked_absorb_one(soc, T, T[0], Q)


def test_crooked_absorb_two():
    om = [0, 1, 2, 10, 3, 4, 5, 11]
    E = [(0, 6), (6, 3), (1, 7), (7, 9), (9, 4), (2, 8), (8, 5), (10, 12), (12, 7), (11, 13), (13, 9)]
    soc = build_society(range(14), E, om)
    g = soc.graph
    T = [Path.from_vertices(g, s) for s in ([0, 6, 3], [1, 7, 9, 4], [2, 8, 5])]
    Q1 = Path.from_vertices(g, [10, 12, 7])
    Q2 = Path.from_vertices(g, [11, 13, 9])
    out = crooked_absorb_two(soc, T, Q1, Q2)
    assert is_crooked(soc, out) and is_transaction(soc, out)
    used = {v for p in out for v in p.vertices}
    assert 12 in used or 13 in used


def test_hooks_split_a_path_at_h():
    H = Graph.from_edge_list(range(3), [(0, 1), (1, 2)])
    g = Graph.from_edge_list(range(6), [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    R = Path.from_vertices(g, [1, 2, 3, 4, 5, 0])
    h = hooks(H, R)
    assert h.hook_x.vertices == (1, 2)
    assert h.interior.vertices == (2, 3, 4, 5, 0)
    assert h.hook_y.vertices == (0,)


def test_augment_diverse_exchanges_once():
    # vertices: a b c in X (singleton parts), m inside, y1 y2 y3 in Y
    V = ["a", "b", "c", "m", "y1", "y2", "y3"]
    E = [("a", "m"), ("m", "b"), ("a", "y1"), ("c", "m"), ("m", "y2"), ("b", "y3")]
    g = Graph.from_edge_list(V, E)
    X = frozenset("abc")
    fam = SDiverseFamily(X, (frozenset("a"), frozenset("b"), frozenset("c")), (Path.from_vertices(g, "amb"),))
    assert is_s_diverse(g, fam)
    R = [Path.from_vertices(g, s) for s in (["a", "y1"], ["c", "m", "y2"], ["b", "y3"])]
    trace: list = []
    out, p = augment_diverse(g, fam, {"y1", "y2", "y3"}, R, trace=trace)
    assert is_s_diverse(g, out) and majority_equivalent(fam, out)
    assert not p.vertex_set & {v for q in out.paths for v in q.vertices}
    assert strictly_decreasing(trace) and len(trace) == 2
    with pytest.raises(HypothesisViolated):
        augment_diverse(g, fam, {"y1", "y2"}, R[:2])


def test_d_metric_counts_separating_members():
    om = list(range(8))
    soc = build_society(om, [(1, 5), (2, 4)], om)
    P = [Path.from_vertices(soc.graph, [1, 5]), Path.from_vertices(soc.graph, [2, 4])]
    assert d_metric(soc, P, 0, 3) == 2
    assert d_metric(soc, P, 0, 6) == 0
    assert d_metric(soc, P, 3, 3) == 0
    with pytest.raises(EndpointOfP):
        d_metric(soc, P, 1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_generated_leaps_verify_and_minimalize(k, l, seed):
    soc, pat = leap_pattern(random.Random(seed), k, l)
    assert verify_leap(soc, pat, k, l)
    out = minimalize_leap(soc, pat)
    assert verify_leap(soc, out, k, l)
    assert len(out.P) + len(out.Q) <= k * (2 * l + 1)
    for i in range(len(out.P)):
        assert not verify_leap(soc, (out.P[:i] + out.P[i + 1 :], out.Q), k, l)


def test_leap_rejections_and_twist():
    soc, pat = leap_pattern(random.Random(5), 2, 2)
    assert not verify_leap(soc, pat, 2, 2 + len(pat.P))
    with pytest.raises(NotALeap):
        minimalize_leap(soc, LeapPattern(pat.P, pat.Q, 2, 50))
    # flipping a segment that holds one end of every P member turns it into a twisted pattern
    n = soc.n
    for i in range(n):
        for j in range(1, n):
            X = [soc.omega[(i + t) % n] for t in range(j)]
            if all((p.start in X) != (p.end in X) for p in pat.P):
                tw = flip(soc, X)
                assert verify_leap(tw, pat, 2, 2, twisted=True)
                return
    pytest.fail("no twisting segment found")


@pytest.mark.parametrize("seed", range(15))
def test_root_linkage(seed):
    f = rooted_linkage_ladder(random.Random(seed))
    fx = f.fixture
    out = root_linkage(fx.society, fx.rendition, fx.nest, f.P1, f.Z, f.T)
    r = len(f.P1)
    assert len(out) == r and is_linkage(fx.society.graph, out)
    assert {v for p in out for v in p.ends} & set(f.Z)
    assert coterminal(fx.rendition, fx.nest[r], list(out), list(f.P1))
