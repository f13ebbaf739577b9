"""Deterministic instance generators used by the tests and the ``gen`` subcommand."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .graph_core import Cycle, Graph, Path
from .renditions import Cell, CylindricalRendition, embed_cells
from .society import Society, build_society


class BadParams(ValueError):
    pass


def random_society(rng: random.Random, max_v: int = 12, max_e: int | None = None) -> Society:
    n = rng.randint(1, max_v)
    m = rng.randint(0, max_e if max_e is not None else 2 * n)
    V = list(range(n))
    E = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
    om = rng.sample(V, rng.randint(0, n))
    return build_society(V, E, om)


def cycle_with_chords(n: int, chords) -> Society:
    """Cycle 0..n-1 as omega (no cycle edges) plus the given chords."""
    return build_society(range(n), chords, range(n))


def crosscap_chords(k: int) -> Society:
    """k pairwise crossing chords i -- i+k on 2k omega vertices."""
    return cycle_with_chords(2 * k, [(i, i + k) for i in range(k)])


def planar_chords(k: int) -> Society:
    """k nested chords i -- 2k-1-i."""
    return cycle_with_chords(2 * k, [(i, 2 * k - 1 - i) for i in range(k)])


def ladder(n: int) -> Society:
    """Two rails of n vertices joined by rungs; omega runs around the outside."""
    V = [("t", i) for i in range(n)] + [("b", i) for i in range(n)]
    E = [(("t", i), ("t", i + 1)) for i in range(n - 1)]
    E += [(("b", i), ("b", i + 1)) for i in range(n - 1)]
    E += [(("t", i), ("b", i)) for i in range(n)]
    om = [("t", i) for i in range(n)] + [("b", i) for i in range(n - 1, -1, -1)]
    return build_society(V, E, om)


@dataclass(frozen=True)
class CylinderFixture:
    society: Society
    rendition: CylindricalRendition
    nest: tuple  # C_1 innermost .. C_s outermost
    spokes: tuple  # radial paths from omega to the innermost ring, one per column


def cylinder(m: int, s: int, center: list[tuple[int, int]] = (), seed_vertices: int = 0) -> CylinderFixture:
    """Omega ring plus s nested rings of length m joined by spokes; a vortex in the middle.

    Ring 0 holds omega (no ring edges), rings 1..s are the nest (ring s innermost).
    ``center`` lists extra edges between innermost-ring positions, drawn inside the vortex.
    """
    if m < 3 or s < 1:
        raise BadParams("need m >= 3 and s >= 1")
    V = [(j, i) for j in range(s + 1) for i in range(m)]
    E = []
    for j in range(1, s + 1):
        E += [((j, i), (j, (i + 1) % m)) for i in range(m)]
    for j in range(s):
        E += [((j, i), (j + 1, i)) for i in range(m)]
    n_plain = len(E)
    extra_v = [("x", t) for t in range(seed_vertices)]
    V += extra_v
    E += [((s, a), (s, b)) for a, b in center]
    for t, x in enumerate(extra_v):
        E.append((x, (s, t % m)))
    omega = [(0, i) for i in range(m)]
    soc = build_society(V, E, omega)
    g = soc.graph
    cells = []
    for e in range(n_plain):
        u, v = g.ends[e]
        cells.append(Cell(e, (u, v), False, frozenset((u, v)), frozenset([e])))
    inner = [(s, i) for i in range(m)]
    c0 = len(cells)
    cells.append(
        Cell(
            c0,
            tuple(inner),
            True,
            frozenset(inner) | frozenset(extra_v),
            frozenset(range(n_plain, len(E))),
        )
    )
    rot = embed_cells(omega, cells)
    if rot is None:  # pragma: no cover
        raise AssertionError("cylinder fixture failed to embed")
    tb = {c.id: 0 for c in cells if c.k == 2}
    r = CylindricalRendition(soc, tuple(cells), tb, rot, c0)
    nest = tuple(Cycle.from_vertices(g, [(j, i) for i in range(m)]) for j in range(s, 0, -1))
    spokes = tuple(Path.from_vertices(g, [(j, i) for j in range(s + 1)]) for i in range(m))
    return CylinderFixture(soc, r, nest, spokes)


# ---------------------------------------------------------------------------
# rerouting fixtures on cylinders


def _spoke(g: Graph, s: int, col: int, inward: bool = True) -> Path:
    seq = [(j, col) for j in range(s + 1)]
    return Path.from_vertices(g, seq if inward else seq[::-1])


def _through_center(fx: CylinderFixture, s: int, a: int, b: int) -> Path:
    """Spoke a inwards, the vortex chord a-b, spoke b outwards."""
    g = fx.society.graph
    chord = next(
        e for e in g.incidence[(s, a)]
        if set(g.ends[e]) == {(s, a), (s, b)} and fx.rendition.cell_of_edge[e] == fx.rendition.c0
    )
    mid = Path(((s, a), (s, b)), (chord,))
    return _spoke(g, s, a).join(mid).join(_spoke(g, s, b, inward=False))


@dataclass(frozen=True)
class CrookedLadder:
    fixture: CylinderFixture
    r: int
    P: tuple
    Q: tuple


def crooked_ladder(rng: random.Random) -> CrookedLadder:
    """Crosscap routed through non-P spokes, with P of size 2r+6 on the remaining spokes."""
    r = rng.choice([1, 2])
    q = rng.randint(max(2, r), 4)
    m = 2 * r + 6 + 2 * q + rng.randint(0, 2)
    s = 2 * r + 7 + rng.randint(0, 1)
    cols = sorted(rng.sample(range(m), 2 * q))
    pairs = [(cols[i], cols[i + q]) for i in range(q)]
    fx = cylinder(m, s, pairs)
    rest = [c for c in range(m) if c not in cols]
    pcols = sorted(rng.sample(rest, 2 * r + 6))
    g = fx.society.graph
    P = tuple(_spoke(g, s, c, inward=False) for c in pcols)
    Q = tuple(_through_center(fx, s, a, b) for a, b in pairs)
    return CrookedLadder(fx, r, P, Q)


@dataclass(frozen=True)
class RootedLadder:
    fixture: CylinderFixture
    P1: tuple
    P2: tuple
    R1: tuple
    R2: tuple
    X1: tuple
    X2: tuple
    Y1: tuple
    Y2: tuple
    T: tuple


def rooted_ladder(rng: random.Random) -> RootedLadder:
    r = rng.randint(1, 3)
    s = r + 1 + rng.randint(0, 2)
    sizes = [r + rng.randint(0, 2), 2 + rng.randint(0, 1), r + rng.randint(0, 2), 2 + rng.randint(0, 1)]
    blocks, c = [], 0
    for k in sizes:
        blocks.append(list(range(c, c + k)))
        c += k
    m = c
    bx1, by1, bx2, by2 = blocks
    ta = sorted(rng.sample(bx1, r))
    tb = rng.sample(bx2, r)
    pairs = list(zip(ta, tb))
    fx = cylinder(m, s, pairs)
    g = fx.society.graph
    sp = lambda cs: tuple(_spoke(g, s, x, inward=False) for x in sorted(cs))
    seg = lambda cs: tuple((0, x) for x in cs)
    return RootedLadder(
        fx,
        sp(rng.sample(bx1, r)),
        sp(rng.sample(bx2, r)),
        sp(rng.sample(by1, 2)),
        sp(rng.sample(by2, 2)),
        seg(bx1),
        seg(bx2),
        seg(by1),
        seg(by2),
        tuple(_through_center(fx, s, a, b) for a, b in pairs),
    )


@dataclass(frozen=True)
class RotationLadder:
    fixture: CylinderFixture
    P: tuple
    Q: tuple
    targets: tuple


def rotation_ladder(rng: random.Random) -> RotationLadder:
    p = rng.choice([1, 2])
    s = 4 * p + 2 + rng.randint(0, 1)
    m = max(4 * p, 3) + rng.randint(0, 3)
    cols = rng.sample(range(m), 2 * p)
    pairs = [(cols[2 * i], cols[2 * i + 1]) for i in range(p)]
    fx = cylinder(m, s, pairs)
    g = fx.society.graph
    P = tuple(_spoke(g, s, c, inward=False) for c in range(m))
    Q = tuple(_through_center(fx, s, a, b) for a, b in pairs)
    tc = sorted(rng.sample(range(m), 2 * p))
    off = rng.randrange(2 * p)
    tc = tc[off:] + tc[:off]
    return RotationLadder(fx, P, Q, tuple((0, c) for c in tc))


# ---------------------------------------------------------------------------
# leap patterns on a circle of chords


def _leap_layout(rng: random.Random, k: int, l: int, pad: int, min_inner: int, free: int):
    """Vertex list, edge list, omega and the vertex sequences of the P and Q chords.

    P is m nested chords; a point in the gap at level j is separated from a point at
    level i by exactly |i - j| chords, which makes the distance conditions easy to plant.
    """
    m = max(l, (k - 1) * l) + rng.randint(0, pad)
    for _ in range(1000):
        t_lv = sorted(rng.sample(range(m + 1), k)) if k <= m + 1 else None
        if (
            t_lv is not None
            and all(b - a >= l for a, b in zip(t_lv, t_lv[1:]))
            and all(max(t, m - t) >= l for t in t_lv)
        ):
            break
    else:  # pragma: no cover
        raise BadParams("could not place the major ends")
    s_lv = [rng.choice([x for x in range(m + 1) if abs(x - t) >= l]) for t in t_lv]
    gaps_a = {j: [] for j in range(m + 1)}  # level j gap on the x side (and the level 0/m gaps)
    gaps_b = {j: [] for j in range(1, m)}

    def place(tag):
        lv = tag[1]
        if 0 < lv < m and rng.random() < 0.5:
            gaps_b[lv].append(tag)
        else:
            gaps_a[lv].append(tag)

    for i in range(k):
        place(("t", t_lv[i], i))
        place(("s", s_lv[i], i))
    for _ in range(free):
        place(("free", rng.randint(0, m)))
    for bucket in list(gaps_a.values()) + list(gaps_b.values()):
        rng.shuffle(bucket)
    seq = list(gaps_a[0])
    for j in range(1, m + 1):
        seq.append(("x", j))
        seq += gaps_a[j]
    for j in range(m, 0, -1):
        seq.append(("y", j))
        if j > 1:
            seq += gaps_b[j - 1]
    ids = {tag: i for i, tag in enumerate(seq)}
    nxt = len(seq)
    E: list = []

    def chord(a, b):
        nonlocal nxt
        inner = list(range(nxt, nxt + rng.randint(min_inner, min_inner + 1)))
        nxt += len(inner)
        verts = [a] + inner + [b]
        E.extend(zip(verts, verts[1:]))
        return verts

    P = [chord(ids[("x", j)], ids[("y", j)]) for j in range(1, m + 1)]
    Q = [chord(ids[("s", s_lv[i], i)], ids[("t", t_lv[i], i)]) for i in range(k)]
    return list(range(nxt)), E, list(range(len(seq))), P, Q


def leap_pattern(rng: random.Random, k: int, l: int, pad: int = 3):
    """A (k, l)-leap pattern whose P carries up to ``pad`` spare chords."""
    from .rerouting import LeapPattern

    V, E, om, P, Q = _leap_layout(rng, k, l, pad, 0, rng.randint(0, 3))
    soc = build_society(V, E, om)
    g = soc.graph
    return soc, LeapPattern(
        tuple(Path.from_vertices(g, p) for p in P), tuple(Path.from_vertices(g, q) for q in Q), k, l
    )


def leap_with_linkage(rng: random.Random):
    """A (k-1, 2kl)-leap pattern plus 2k-1 paths from Omega to new vertices Z, some through it."""
    from .rerouting import LeapPattern

    k = rng.randint(1, 3)
    l = rng.randint(1, 2)
    V, E, om, P, Q = _leap_layout(rng, k - 1, 2 * k * l, 2, 1, rng.randint(0, 4))
    members = P + Q
    starts = rng.sample(om, 2 * k - 1)
    inner_pool = [v for mem in members for v in mem[1:-1]]
    rng.shuffle(inner_pool)
    R, Z = [], []
    for j, x in enumerate(starts):
        z = ("z", j)
        V.append(z)
        Z.append(z)
        if inner_pool and rng.random() < 0.8:
            v = inner_pool.pop()
            E += [(x, v), (v, z)]
            R.append([x, v, z])
        else:
            E.append((x, z))
            R.append([x, z])
    soc = build_society(V, E, om)
    g = soc.graph
    mk = lambda seqs: tuple(Path.from_vertices(g, s) for s in seqs)
    return soc, LeapPattern(mk(P), mk(Q), k - 1, 2 * k * l), tuple(Z), mk(R)


@dataclass(frozen=True)
class LinkageLadder:
    fixture: CylinderFixture
    P1: tuple
    Z: tuple
    T: tuple


def rooted_linkage_ladder(rng: random.Random) -> LinkageLadder:
    """Paths from vortex vertices out to Omega, some with a one-step detour along a ring."""
    r = rng.randint(1, 3)
    s = r + 1 + rng.randint(0, 2)
    m = 2 * r + 2 + rng.randint(0, 3)
    fx = cylinder(m, s, seed_vertices=m)
    g = fx.society.graph
    cols = [2 * i for i in range(r)]
    T = []
    for c in cols:
        seq = [("x", c)] + [(j, c) for j in range(s, -1, -1)]
        if rng.random() < 0.5:
            j = rng.randint(1, s)
            seq = [("x", c)] + [(i, c) for i in range(s, j - 1, -1)] + [(i, c + 1) for i in range(j, -1, -1)]
        T.append(Path.from_vertices(g, seq))
    pcols = sorted(rng.sample(range(m), r))
    P1 = tuple(_spoke(g, s, c, inward=False) for c in pcols)
    return LinkageLadder(fx, P1, tuple(("x", c) for c in cols), tuple(T))


# ---------------------------------------------------------------------------
# clique fixtures


@dataclass(frozen=True)
class CrossesFixture:
    fixture: CylinderFixture
    p: int
    N: tuple
    twisted: bool


def nested_crosses_fixture(p: int, twisted: bool = False) -> CrossesFixture:
    """4p² paths through the vortex forming 2p² (twisted) nested crosses, on 8p² spokes."""
    if p < 1:
        raise BadParams("need p >= 1")
    K = 4 * p * p
    m, s = 2 * K, K
    if twisted:
        pairs = [(i, K + (i ^ 1)) for i in range(K)]
    else:
        pairs = [(i, K + K - 1 - (i ^ 1)) for i in range(K)]
    fx = cylinder(m, s, pairs)
    N = tuple(_through_center(fx, s, a, b) for a, b in pairs)
    return CrossesFixture(fx, p, N, twisted)


@dataclass(frozen=True)
class GadgetFixture:
    fixture: CylinderFixture
    p: int
    kinds: str  # one letter per sector: "c" crosscap, "h" handle
    transactions: tuple
    segments: tuple


def gadget_ring(p: int, kinds: str | None = None, rng: random.Random | None = None) -> GadgetFixture:
    """C(p,2)+p+1 crosscaps or handles of thickness p around a nest of 2p cycles."""
    if p < 2:
        raise BadParams("need p >= 2")
    t = p * (p - 1) // 2 + p + 1
    if kinds is None:
        rng = rng or random.Random(0)
        kinds = "".join(rng.choice("ch") for _ in range(t))
    if len(kinds) != t or set(kinds) - {"c", "h"}:
        raise BadParams(f"kinds must be {t} letters from 'c' and 'h'")
    chords, blocks, col = [], [], 0
    for kind in kinds:
        col += 1  # a free column between sectors
        if kind == "c":
            cols = list(range(col, col + 2 * p))
            pairs = [(cols[i], cols[p + i]) for i in range(p)]
        else:
            cols = list(range(col, col + 4 * p))
            u = cols[: 2 * p]
            v = {i: cols[2 * p + (p - 1 - i)] for i in range(p)}
            v.update({i: cols[3 * p + (2 * p - 1 - i)] for i in range(p, 2 * p)})
            pairs = [(u[i], v[i]) for i in range(2 * p)]
        chords += pairs
        blocks.append((cols, pairs))
        col += len(cols)
    s = 2 * p
    fx = cylinder(col, s, chords)
    trans = tuple(tuple(_through_center(fx, s, a, b) for a, b in pairs) for _, pairs in blocks)
    segs = tuple(tuple((0, c) for c in cols) for cols, _ in blocks)
    return GadgetFixture(fx, p, kinds, trans, segs)
