import json

import oracles
from hypothesis import given, settings
from strategies import societies

from societykit.generators import ladder
from societykit.society import build_society
from societykit.vortex import (
    LinearDecomposition,
    adhesion,
    linear_decomposition,
    nested_prefix_sides,
    validate_linear_decomposition,
)


@settings(max_examples=150, deadline=None)
@given(societies(max_n=9, max_m=18))
def test_decomposition_is_valid_and_bounds_depth(soc):
    d = linear_decomposition(soc)
    assert validate_linear_decomposition(soc, d) == []
    a = adhesion(d)
    dep = oracles.depth(soc)
    assert a <= dep <= 2 * a or soc.n < 2
    back = LinearDecomposition.from_json(json.loads(json.dumps(d.to_json())))
    assert back.order == d.order and back.bags == d.bags


def test_empty_and_single_boundary():
    soc = build_society(range(3), [(0, 1)], [])
    d = linear_decomposition(soc)
    assert d.bags == () and validate_linear_decomposition(soc, d) == []
    soc = build_society(range(3), [(0, 1)], [2])
    d = linear_decomposition(soc)
    assert validate_linear_decomposition(soc, d) == [] and adhesion(d) == 0


def test_ladder_adhesion():
    soc = ladder(6)
    d = linear_decomposition(soc)
    assert validate_linear_decomposition(soc, d) == []
    assert adhesion(d) <= 6 <= 2 * adhesion(d)


def test_validation_flags_broken_decompositions():
    soc = build_society(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)], [0, 1, 2, 3])
    d = linear_decomposition(soc)
    reversed_ok = LinearDecomposition(tuple(reversed(d.order)), tuple(reversed(d.bags)))
    assert validate_linear_decomposition(soc, reversed_ok) == []
    bad_order = LinearDecomposition((0, 2, 1, 3), d.bags)
    assert validate_linear_decomposition(soc, bad_order)
    gap = LinearDecomposition((0, 1, 2, 3), (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}), frozenset({3, 1})))
    assert any("interval" in m for m in validate_linear_decomposition(soc, gap))
    missing = LinearDecomposition((0, 1, 2, 3), (frozenset({0}), frozenset({1}), frozenset({2}), frozenset({3})))
    assert any("no bag" in m for m in validate_linear_decomposition(soc, missing))


def test_prefix_sides_nest_but_not_strictly():
    # centre 3 sits on the boundary: the cuts after two and after three boundary
    # vertices have the same prefix side
    om = [0, 2, 3, 1]
    soc = build_society(range(4), [(3, 0), (3, 1), (3, 2)], om)
    d = linear_decomposition(soc)
    assert validate_linear_decomposition(soc, d) == []
    assert nested_prefix_sides(d)
    sides = [s.A for s in d.separations]
    assert sides[1] == sides[2]
