import dataclasses
import json

import oracles
import pytest
from hypothesis import given, settings
from strategies import societies

from societykit.generators import crosscap_chords, cylinder, ladder, planar_chords
from societykit.graph_core import Path
from societykit.renditions import (
    VortexEdgeUsed,
    coterminal,
    inner_outer,
    is_grounded,
    orthogonality,
    rendition_from_json,
    rendition_to_json,
    restrict_to_disk,
    rural_rendition,
    single_vortex_rendition,
    track,
    validate_rendition,
    verify_nest,
    vortex_society,
)
from societykit.society import build_society


@settings(max_examples=200, deadline=None)
@given(societies(max_n=10, max_m=20))
def test_rural_rendition_exists_iff_no_cross(soc):
    r = rural_rendition(soc)
    assert (r is None) == oracles.cross_exists(soc)
    if r is not None:
        assert validate_rendition(soc, r) == []
        assert r.vortices() == []
        covered = set().union(*(c.edges for c in r.cells)) if r.cells else set()
        assert covered == set(soc.graph.ends)


def test_rural_rendition_of_fixed_families():
    assert rural_rendition(crosscap_chords(2)) is None
    for soc in (planar_chords(5), ladder(6)):
        r = rural_rendition(soc)
        assert r is not None and validate_rendition(soc, r) == []


def test_hidden_three_separated_part_is_collapsed():
    # K5 minus an edge hanging off three boundary-side vertices: not planar with the frame,
    # but it sits behind a 3-separator, so the society is still rural
    om = [0, 1, 2, 3]
    E = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4)]
    E += [(4, 5), (4, 6), (5, 6), (5, 7), (6, 7), (4, 7), (5, 1), (6, 2), (7, 0)]
    soc = build_society(range(8), E, om)
    assert not oracles.cross_exists(soc)
    r = rural_rendition(soc)
    assert r is not None and validate_rendition(soc, r) == []


def test_single_vortex_rendition():
    soc = crosscap_chords(3)
    r = single_vortex_rendition(soc)
    assert validate_rendition(soc, r) == []
    assert len(r.vortices()) == 1
    assert vortex_society(r, r.c0).digest() == soc.digest()


def test_cylinder_nest_and_spokes():
    fx = cylinder(6, 3, [(0, 3)])
    r = fx.rendition
    assert validate_rendition(fx.society, r) == []
    assert verify_nest(r, fx.nest)
    assert not verify_nest(r, fx.nest[::-1])
    assert orthogonality(r, fx.nest, fx.spokes)
    for C in fx.nest:
        assert is_grounded(r, C)
        assert track(r, C).closed
    inner, outer, isoc = inner_outer(r, fx.nest[0])
    assert set(isoc.omega) == fx.nest[0].vertex_set
    sub = restrict_to_disk(r, fx.nest[1])
    assert validate_rendition(sub.society, sub) == []
    assert coterminal(r, fx.nest[0], list(fx.spokes[:2]), list(fx.spokes))


def test_vortex_edges_are_not_grounded():
    fx = cylinder(4, 1, [(0, 2)])
    g = fx.society.graph
    chord = Path.from_vertices(g, [(1, 0), (1, 2)])
    with pytest.raises(VortexEdgeUsed):
        is_grounded(fx.rendition, chord)


def test_validation_catches_tampering():
    fx = cylinder(5, 2)
    r = fx.rendition
    c = r.cells[0]
    broken = dataclasses.replace(c, edges=frozenset())
    bad = dataclasses.replace(r, cells=(broken,) + r.cells[1:])
    assert validate_rendition(fx.society, bad)
    dup = dataclasses.replace(r, cells=r.cells + (dataclasses.replace(c, id=10**6),))
    assert validate_rendition(fx.society, dup)


@settings(max_examples=60, deadline=None)
@given(societies(max_n=8, max_m=14))
def test_rendition_json_round_trip(soc):
    r = rural_rendition(soc) or single_vortex_rendition(soc)
    obj = json.loads(json.dumps(rendition_to_json(r)))
    back = rendition_from_json(soc, obj)
    assert validate_rendition(soc, back) == []
    assert rendition_to_json(back) == obj
