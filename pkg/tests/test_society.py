import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import societies

from societykit.graph_core import Path
from societykit.society import (
    NotASegment,
    NotASocietyVertex,
    Society,
    SocietyFormatError,
    build_society,
    delete,
    flip,
    is_omega_path,
    parse_society,
    segment_between,
)


def _cycle_society(n):
    return build_society(range(n), [(i, (i + 1) % n) for i in range(n)], range(n))


def test_parse_reports_line_and_column():
    with pytest.raises(SocietyFormatError) as ei:
        parse_society('{"vertices": [1, 2],\n  "edges": [[1 2]]}')
    assert (ei.value.line, ei.value.column) == (2, 16)


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"vertices": [1], "edges": []},
        {"vertices": [1, 1], "edges": [], "omega": []},
        {"vertices": [1.5], "edges": [], "omega": []},
        {"vertices": [1], "edges": [[1, 2]], "omega": []},
        {"vertices": [1], "edges": [[1]], "omega": []},
        {"vertices": [1], "edges": [], "omega": [2]},
        {"vertices": [1, 2], "edges": [], "omega": [1, 1]},
        {"vertices": [True], "edges": [], "omega": []},
    ],
)
def test_schema_errors(obj):
    with pytest.raises(SocietyFormatError):
        Society.from_json(obj)


@settings(max_examples=150, deadline=None)
@given(societies())
def test_json_round_trip_is_stable(soc):
    obj = soc.to_json()
    again = parse_society(json.dumps(obj))
    assert again.to_json() == obj
    assert again.digest() == soc.digest()
    assert set(again.omega) == set(soc.omega)


def test_digest_ignores_rotation_of_omega():
    a = _cycle_society(5)
    b = a.with_omega(a.omega[2:] + a.omega[:2])
    assert a.digest() == b.digest()
    assert a.digest() != a.with_omega(tuple(reversed(a.omega))).digest()


def test_arcs_and_segments():
    soc = _cycle_society(6)
    assert soc.arc(4, 1) == (4, 5, 0, 1)
    assert segment_between(soc, 2, 1) == (2, 3, 4, 5, 0, 1)
    assert soc.is_segment({5, 0, 1}) and not soc.is_segment({0, 2})
    assert soc.segment_order({5, 0, 1}) == (5, 0, 1)
    with pytest.raises(NotASegment):
        soc.segment_order({0, 2})
    with pytest.raises(NotASocietyVertex):
        soc.arc(0, 9)


@settings(max_examples=150, deadline=None)
@given(societies(min_omega=1), st.data())
def test_flip_reverses_a_segment(soc, data):
    n = soc.n
    i = data.draw(st.integers(0, n - 1))
    k = data.draw(st.integers(0, n))
    X = [soc.omega[(i + t) % n] for t in range(k)]
    f = flip(soc, X)
    assert set(f.omega) == set(soc.omega)
    if X:
        assert f.segment_order(X) == tuple(reversed(X)) or len(X) == n
    rest = [v for v in soc.omega if v not in X]
    if rest and X:
        assert f.segment_order(rest) == soc.segment_order(rest)
    if len(X) < n:
        assert flip(f, X).digest() == soc.digest()


def test_delete_and_omega_paths():
    soc = build_society(range(5), [(0, 4), (4, 2), (0, 1), (1, 2)], [0, 1, 2, 3])
    g = soc.graph
    assert is_omega_path(soc, Path.from_vertices(g, [0, 4, 2]))
    assert not is_omega_path(soc, Path.from_vertices(g, [0, 1, 2]))
    assert not is_omega_path(soc, Path((0,), ()))
    d = delete(soc, {1})
    assert d.omega == (0, 2, 3) and 1 not in d.graph.vertices


def test_society_rejects_unknown_or_repeated_omega():
    g = _cycle_society(3).graph
    with pytest.raises(ValueError):
        Society(g, (0, 0))
    with pytest.raises(ValueError):
        Society(g, (7,))
