import pytest
from societies import chord_society

from societykit.generators import planar_chords
from societykit.graph_core import Path
from societykit.society import build_society
from societykit.strips import (
    NotCrosscap,
    NotPlanar,
    ProvenanceMismatch,
    TooSmall,
    is_isolated,
    strip_society,
    strip_society_crosscap,
)
from societykit.transactions import depth


def _ladder_with_rungs(n):
    """n parallel chords from top i to bottom i, with rungs between neighbours."""
    om = list(range(2 * n))
    V = list(om) + [("m", i) for i in range(n)]
    E = []
    for i in range(n):
        E += [(i, ("m", i)), (("m", i), 2 * n - 1 - i)]
        if i:
            E.append((("m", i - 1), ("m", i)))
    return build_society(V, E, om)


def test_planar_strip_keeps_inner_rungs():
    soc = _ladder_with_rungs(5)
    _, T = depth(soc)
    st = strip_society(soc, T.paths)
    assert st.parent_digest == soc.digest()
    assert len(st.paths) == 5
    assert {("m", i) for i in range(5)} <= st.society.graph.vertices
    assert is_isolated(soc, st)
    assert st.interior - soc.omega_set == {("m", i) for i in range(1, 4)}


def test_strip_of_sub_transaction_is_isolated():
    soc = _ladder_with_rungs(5)
    _, T = depth(soc)
    st = strip_society(soc, T.paths[:3])
    assert is_isolated(soc, st)
    assert len(st.society.omega) == 6


def test_strip_errors():
    soc, paths, X1, X2 = chord_society([0, 1, 2])
    with pytest.raises(NotPlanar):
        strip_society(soc, paths)
    with pytest.raises(TooSmall):
        strip_society(soc, paths[:1])
    st = strip_society_crosscap(soc, paths, X1, X2)
    with pytest.raises(ProvenanceMismatch):
        is_isolated(planar_chords(3), st)


def test_crosscap_strip():
    soc, paths, X1, X2 = chord_society([0, 1, 2, 3])
    st = strip_society_crosscap(soc, paths, X1, X2)
    assert st.segments == (tuple(X1), tuple(X2))
    om = st.society.omega
    assert om[: len(X1)] == tuple(X1)
    assert om[len(X1) :] == tuple(reversed(X2))
    assert is_isolated(soc, st)


def test_crosscap_strip_rejects_planar_members():
    soc, paths, X1, X2 = chord_society([3, 2, 1, 0])
    with pytest.raises(NotCrosscap):
        strip_society_crosscap(soc, paths, X1, X2)
    soc, paths, X1, X2 = chord_society([0, 1])
    with pytest.raises(NotCrosscap):
        strip_society_crosscap(soc, paths, X1, X1)
    stray = build_society(range(4), [(0, 1)], range(4))
    with pytest.raises(NotCrosscap):
        strip_society_crosscap(stray, [Path.from_vertices(stray.graph, [0, 1])] * 2, [0, 1], [2, 3])
