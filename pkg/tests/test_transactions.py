import itertools
import random

import oracles
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from societies import chord_society, spine_society
from strategies import societies

from societykit.generators import crosscap_chords, ladder, planar_chords, random_society
from societykit.renditions import validate_rendition, vortex_society
from societykit.rerouting import verify_leap
from societykit.graph_core import Path
from societykit.society import build_society, flip
from societykit.transactions import (
    NotAHandle,
    NotATransaction,
    OrderTooSmall,
    PTooSmall,
    consistent_handle,
    crosses,
    crossing_matrix,
    depth,
    depth_value,
    extract_monotone,
    find_cross,
    gm9,
    handle_labelling,
    is_consistent_with,
    is_crooked,
    is_crosscap,
    is_cross,
    is_handle,
    is_planar_transaction,
    is_transaction,
    make_transaction,
    nested_crosses_check,
    planar_or_crooked,
    shrink_crooked,
    strong_es,
    transaction_splits,
)


def _brute_crooked(soc, paths):
    """No member has an arc of Omega, between its own ends, free of other members' ends."""
    ends = {v for p in paths for v in p.ends}
    for p in paths:
        u, v = p.ends
        for x, y in ((u, v), (v, u)):
            if not (set(soc.arc(x, y)) - {u, v}) & ends:
                return False
    return bool(paths)


@settings(max_examples=120, deadline=None)
@given(societies(max_n=9, max_m=18))
def test_depth_matches_flow_oracle(soc):
    d, T = depth(soc)
    assert d == oracles.depth(soc)
    if d:
        assert len(T) == d and is_transaction(soc, T.paths)
        assert soc.is_segment(T.A) and soc.is_segment(T.B)
        assert all(p.start in T.A and p.end in T.B for p in T)


@settings(max_examples=200, deadline=None)
@given(societies(max_n=9, max_m=18))
def test_find_cross_agrees_with_enumeration(soc):
    c = find_cross(soc)
    assert (c is not None) == oracles.cross_exists(soc)
    if c is not None:
        assert is_cross(soc, c)
        assert oracles.check_cross(soc, c.p1.vertices, c.p2.vertices)


def test_cross_on_fixed_examples():
    assert find_cross(crosscap_chords(2)) is not None
    assert find_cross(planar_chords(4)) is None
    assert find_cross(ladder(5)) is None


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(6)))
def test_crossing_pattern_of_chord_societies(perm):
    soc, paths, X1, X2 = chord_society(perm)
    M = crossing_matrix(soc, paths)
    for i, j in itertools.combinations(range(len(perm)), 2):
        assert M[i][j] == (perm[i] < perm[j]) == crosses(soc, paths[i], paths[j])
    T = make_transaction(soc, paths)
    assert set(T.A) == set(X1) and set(T.B) == set(X2)
    assert is_crooked(soc, paths) == _brute_crooked(soc, paths)
    assert is_planar_transaction(soc, paths) == (list(perm) == sorted(perm, reverse=True))
    assert is_crosscap(soc, paths) == (list(perm) == sorted(perm))


def test_make_transaction_rejects_bad_input():
    soc, paths, _, _ = chord_society([0, 1])
    with pytest.raises(NotATransaction):
        make_transaction(soc, [paths[0], paths[0]])
    assert transaction_splits(crosscap_chords(3), []) == [([], [])]
    # two nested chords form a planar transaction of order two
    inner = build_society(range(4), [(0, 3), (1, 2)], range(4))
    chords = [Path.from_vertices(inner.graph, [0, 3]), Path.from_vertices(inner.graph, [1, 2])]
    assert is_transaction(inner, chords)
    assert make_transaction(inner, chords).A in ((0, 1), (2, 3), (3, 0), (1, 2))


def test_order_too_small_is_raised():
    soc, paths, _, _ = chord_society([0, 1])
    with pytest.raises(OrderTooSmall):
        planar_or_crooked(soc, paths, 2, 3)
    with pytest.raises(OrderTooSmall):
        extract_monotone(soc, make_transaction(soc, paths), 3, 2)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(2, 5), st.randoms(use_true_random=False))
def test_planar_or_crooked_property(p, q, rnd):
    n = p + q - 2
    if n < 1:
        return
    perm = list(range(n))
    rnd.shuffle(perm)
    soc, paths, _, _ = chord_society(perm)
    cert = planar_or_crooked(soc, paths, p, q)
    if cert.kind == "planar":
        assert len(cert.paths) == p and is_planar_transaction(soc, cert.paths)
    else:
        assert len(cert.paths) >= q and _brute_crooked(soc, list(cert.paths))


def test_shrink_crooked_keeps_crookedness():
    for n in range(5, 9):
        soc, paths, _, _ = chord_society(list(range(n)))
        out = shrink_crooked(soc, paths)
        assert len(out) == n - 1 and is_crooked(soc, out)


def _handle_perm(n):
    return [n - 1 - i for i in range(n)] + [n + (2 * n - 1 - i) for i in range(n, 2 * n)]


def test_handles_and_consistent_subhandles():
    for n in (1, 2, 3, 4):
        soc, paths, X1, _ = chord_society(_handle_perm(n))
        assert is_handle(soc, paths)
        lab = handle_labelling(soc, paths)
        assert [p.start for p in lab] == list(X1)
    soc, paths, X1, _ = chord_society(_handle_perm(4))
    X = soc.omega
    for k in (1, 2):
        H = consistent_handle(soc, X, paths, k)
        assert len(H) == 2 * k and is_handle(soc, H)
        assert is_consistent_with(soc, X, H) is not None
    with pytest.raises(NotAHandle):
        consistent_handle(soc, X, paths, 3)
    with pytest.raises(NotAHandle):
        consistent_handle(soc, X1, paths, 1)
    soc, paths, X1, _ = chord_society([0, 1, 2, 3])
    assert not is_handle(soc, paths)


def test_nested_crosses_labelling():
    # pairs (0,1), (2,3), (4,5) cross internally and nowhere else
    perm = [4, 5, 2, 3, 0, 1]
    soc, paths, _, _ = chord_society(perm)
    lab = nested_crosses_check(soc, paths, 3)
    assert lab is not None
    Ps, Qs = lab
    for i, P in enumerate(Ps):
        for j, Q in enumerate(Qs):
            assert crosses(soc, P, Q) == (i == j)
    assert nested_crosses_check(soc, paths, 2) is None
    assert nested_crosses_check(soc, paths, 3, twisted=True) is None
    # the complementary crossing pattern is twisted
    tw = [1, 0, 3, 2, 5, 4]
    soc, paths, _, _ = chord_society(tw)
    assert nested_crosses_check(soc, paths, 3, twisted=True) is not None


@pytest.mark.parametrize("seed", range(40))
def test_strong_es_outcomes(seed):
    rng = random.Random(seed)
    k, l, ks, ls = (rng.randint(1, 2) for _ in range(4))
    q, qs = rng.randint(0, 1), rng.randint(0, 1)
    s, ss = rng.randint(2, 3), rng.randint(2, 3)
    need = (k + 2 * q) * l * (ks + 2 * qs) * ls * max(s, ss)
    if need > 120:
        pytest.skip("instance too large for a unit test")
    perm = list(range(need + rng.randint(0, 2)))
    rng.shuffle(perm)
    soc, T, X1, X2 = chord_society(perm)
    cert = strong_es(soc, T, X1, X2, k, l, ks, ls, q, qs, s, ss)
    flipped = cert.data["flipped"]
    host = flip(soc, X1) if flipped else soc
    kk, ll, qq, sz = (ks, ls, qs, ss) if flipped else (k, l, q, s)
    assert is_transaction(host, cert.paths) or cert.kind != "planar"
    if cert.kind == "planar":
        assert len(cert.paths) == sz and is_planar_transaction(host, cert.paths)
    elif cert.kind == "leap":
        pat = cert.data["pattern"]
        assert verify_leap(host, pat, kk, ll)
    else:
        assert cert.kind == "nested-crosses"
        assert nested_crosses_check(host, cert.paths, qq) is not None


def test_strong_es_needs_enough_paths():
    soc, T, X1, X2 = chord_society([0, 1, 2])
    with pytest.raises(OrderTooSmall):
        strong_es(soc, T, X1, X2, 1, 1, 1, 1, 0, 0, 4, 4)


@pytest.mark.parametrize("seed", range(20))
def test_gm9_certificates(seed):
    rng = random.Random(seed)
    soc = spine_society(rng, rng.randint(4, 40)) if seed % 2 else random_society(rng, 16)
    cert = gm9(soc, 4)
    if cert.kind == "crooked":
        assert len(cert.paths) >= 4 and is_transaction(soc, cert.paths)
        assert _brute_crooked(soc, list(cert.paths))
    else:
        r = cert.data["rendition"]
        assert validate_rendition(soc, r) == []
        for c in r.vortices():
            assert depth_value(vortex_society(r, c.id)) <= 6 * 4


def test_gm9_needs_p_at_least_four():
    with pytest.raises(PTooSmall):
        gm9(ladder(3), 3)


def test_gm9_on_crosscaps_and_deep_planar():
    assert gm9(crosscap_chords(6), 4).kind == "crooked"
    cert = gm9(ladder(30), 4)
    assert cert.kind == "rendition" and not validate_rendition(ladder(30), cert.data["rendition"])
