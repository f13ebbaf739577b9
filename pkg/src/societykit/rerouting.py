"""Exchange and augmentation steps that reroute crosses, crooked transactions,
rooted linkages, rotations, diverse path families and leap patterns.

Arguments that come from a minimal counterexample are run as explicit descents. Each
descent accepts an optional ``trace`` list and appends its potential after every step,
so callers can check that the potential strictly decreases.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph_core import Cycle, Graph, Path, disjoint_paths, is_linkage, sort_ids, vkey
from .renditions import DiskRendition, coterminal, orthogonality
from .society import Society, flip, is_omega_path
from .transactions import (
    Cross,
    is_crooked,
    is_cross,
    is_planar_transaction,
    is_transaction,
    make_transaction,
    trim_crooked,
)


class PreconditionViolated(ValueError):
    pass


class HypothesisViolated(ValueError):
    pass


class EndpointOfP(ValueError):
    pass


class NotALeap(ValueError):
    pass


def _log(trace: list | None, stage: str, value: int) -> None:
    if trace is not None:
        trace.append((stage, value))


def strictly_decreasing(trace: Sequence[tuple]) -> bool:
    """Each stage's values, in logging order, strictly decrease."""
    last: dict = {}
    for stage, value in trace:
        if stage in last and value >= last[stage]:
            return False
        last[stage] = value
    return True


def _min_key(vs: Iterable) -> tuple:
    return min(vkey(v) for v in vs)


def _union_edges(paths: Iterable) -> frozenset:
    return frozenset(e for p in paths for e in p.edges)


def _union_vertices(paths: Iterable) -> frozenset:
    return frozenset(v for p in paths for v in p.vertices)


# ---------------------------------------------------------------------------
# crosses and crooked transactions


def _orient_attach(soc: Society, R: Path, targets: frozenset) -> Path:
    """Orient R from its Omega end towards the target set."""
    if R.start in soc.pos and R.end in targets:
        return R
    if R.end in soc.pos and R.start in targets:
        return R.reversed()
    raise PreconditionViolated("path must run from Omega to the target paths")


def cross_reroute(soc: Society, cross: Cross, R: Path) -> Cross:
    P = (cross.p1, cross.p2)
    if not is_cross(soc, cross):
        raise PreconditionViolated("input pair is not a cross")
    pv = P[0].vertex_set | P[1].vertex_set
    R = _orient_attach(soc, R, pv)
    if any(v in pv or v in soc.pos for v in R.internal) or (R.length and R.start in pv):
        raise PreconditionViolated("R must be internally disjoint from the cross and from Omega")
    z = R.end
    options = []
    for i in (0, 1):
        if z not in P[i].vertex_set:
            continue
        for end in P[i].ends:
            half = P[i].sub(z, end)
            try:
                new = R.join(half) if R.length else half
            except ValueError:
                continue
            cand = Cross(new, P[1 - i]) if i == 0 else Cross(P[1 - i], new)
            if new.length >= 1 and is_cross(soc, cand):
                options.append((_min_key(half.vertices), cand))
    if not options:  # pragma: no cover - excluded by the exchange argument
        raise AssertionError("no rerouted cross found")
    return min(options, key=lambda o: o[0])[1]


@dataclass(frozen=True)
class Obstruction:
    """Members S1 (x1..y1) and S2 (x2..y2) blocking both splices of the attaching path."""

    s1: Path
    s2: Path
    u: object
    v: object


@dataclass(frozen=True)
class AbsorbResult:
    kind: str  # "crooked" or "obstruction"
    paths: tuple = ()
    obstruction: Obstruction | None = None


def _check_attach(soc: Society, T: Sequence[Path], Q: Path) -> tuple[Path, int]:
    tv = _union_vertices(T)
    Q = _orient_attach(soc, Q, tv)
    hit = [v for v in Q.vertices if v in tv]
    if hit != [Q.end]:
        raise PreconditionViolated("the attaching path must meet the transaction only at its far end")
    if any(v in soc.pos for v in Q.internal):
        raise PreconditionViolated("the attaching path has an internal Omega vertex")
    idx = next(i for i, p in enumerate(T) if Q.end in p.vertex_set)
    return Q, idx


def _splices(T: Sequence[Path], idx: int, Q: Path) -> list[tuple[tuple, list]]:
    """(sort key, candidate transaction) for both halves of the member hit by Q."""
    P = T[idx]
    out = []
    for end in P.ends:
        half = P.sub(end, Q.end)
        new = half.join(Q.reversed()) if Q.length else half
        out.append(((_min_key(half.vertices),), list(T[:idx]) + [new] + list(T[idx + 1 :])))
    return out


def _is_crooked_transaction(soc: Society, paths: Sequence[Path]) -> bool:
    return all(p.length >= 1 for p in paths) and is_transaction(soc, paths) and is_crooked(soc, paths)


def _obstruction(soc: Society, T: Sequence[Path], idx: int, w) -> Obstruction | None:
    P = T[idx]
    rest = [p for i, p in enumerate(T) if i != idx]
    best = None
    for u, v in (P.ends, P.ends[::-1]):
        for S1, S2 in itertools.permutations(rest, 2):
            for x1, y1 in (S1.ends, S1.ends[::-1]):
                for x2, y2 in (S2.ends, S2.ends[::-1]):
                    if not soc.ordered_in((u, x1, x2, v, y2, y1)):
                        continue
                    seg_a, seg_b = set(soc.arc(x1, x2)), set(soc.arc(y2, y1))
                    if not all(
                        (a in seg_a and b in seg_b) or (b in seg_a and a in seg_b)
                        for a, b in (p.ends for p in rest)
                    ):
                        continue
                    if w not in seg_a and w not in seg_b:
                        continue
                    key = tuple(vkey(t) for t in (x1, y1, x2, y2, u))
                    if best is None or key < best[0]:
                        s1 = S1 if S1.start == x1 else S1.reversed()
                        s2 = S2 if S2.start == x2 else S2.reversed()
                        best = (key, Obstruction(s1, s2, u, v))
    return None if best is None else best[1]


def crooked_absorb_one(soc: Society, T: Sequence[Path], P: Path, Q: Path) -> AbsorbResult:
    T = list(T)
    if not _is_crooked_transaction(soc, T):
        raise PreconditionViolated("T is not a crooked transaction")
    Q, idx = _check_attach(soc, T, Q)
    if T[idx] != P and T[idx] != P.reversed():
        raise PreconditionViolated("Q does not attach to P")
    if Q.length == 0 and Q.end in P.ends:
        return AbsorbResult("crooked", tuple(T))
    good = [(k, c) for k, c in _splices(T, idx, Q) if _is_crooked_transaction(soc, c)]
    if good:
        return AbsorbResult("crooked", tuple(min(good, key=lambda kc: kc[0])[1]))
    ob = _obstruction(soc, T, idx, Q.start)
    if ob is None:  # pragma: no cover - excluded by the exchange argument
        raise AssertionError("neither splice is crooked and no obstruction was found")
    return AbsorbResult("obstruction", obstruction=ob)


def crooked_absorb_two(soc: Society, T: Sequence[Path], Q1: Path, Q2: Path) -> list[Path]:
    T = list(T)
    if not _is_crooked_transaction(soc, T):
        raise PreconditionViolated("T is not a crooked transaction")
    Q1, i1 = _check_attach(soc, T, Q1)
    Q2, i2 = _check_attach(soc, T, Q2)
    if Q1.vertex_set & Q2.vertex_set:
        raise PreconditionViolated("attaching paths must be disjoint")
    for Q, idx in ((Q1, i1), (Q2, i2)):
        if Q.length == 0 and Q.end in T[idx].ends:
            continue
        good = [(k, c) for k, c in _splices(T, idx, Q) if _is_crooked_transaction(soc, c)]
        if good:
            return min(good, key=lambda kc: kc[0])[1]
    if i1 != i2:  # pragma: no cover - excluded by the exchange argument
        raise AssertionError("attaching paths hit different members and neither splice works")
    P = T[i1]
    z1, z2 = Q1.end, Q2.end
    # R_i runs from an end of P to z_i and avoids Q_{3-i}
    if P.index(z1) < P.index(z2):
        R1, R2 = P.sub(P.start, z1), P.sub(P.end, z2)
    else:
        R1, R2 = P.sub(P.end, z1), P.sub(P.start, z2)
    new1 = R1.join(Q1.reversed()) if Q1.length else R1
    new2 = R2.join(Q2.reversed()) if Q2.length else R2
    out = T[:i1] + [new1, new2] + T[i1 + 1 :]
    if not _is_crooked_transaction(soc, out):  # pragma: no cover
        raise AssertionError("double splice is not crooked")
    return out


# ---------------------------------------------------------------------------
# hooks


@dataclass(frozen=True)
class HookDecomposition:
    hook_x: Path | None
    interior: Path | None
    hook_y: Path | None


def hooks(H: Graph, R: Path) -> HookDecomposition:
    hv, he = H.vertices, set(H.ends)

    def prefix(p: Path) -> int:
        """Index of the last vertex of the longest prefix inside H, or -1."""
        if p.start not in hv:
            return -1
        i = 0
        while i < p.length and p.edges[i] in he and p.vertices[i + 1] in hv:
            i += 1
        return i

    a = prefix(R)
    if a == R.length:
        return HookDecomposition(R, None, R)
    b = prefix(R.reversed())
    n = R.length
    hx = Path(R.vertices[: a + 1], R.edges[:a]) if a >= 0 else None
    hy = Path(R.vertices[n - b :][::-1], R.edges[n - b :][::-1]) if b >= 0 else None
    lo = max(a, 0)
    hi = n - max(b, 0)
    return HookDecomposition(hx, Path(R.vertices[lo : hi + 1], R.edges[lo:hi]), hy)


# ---------------------------------------------------------------------------
# helpers on nests


def _first_in(p: Path, vs: frozenset, start) -> object:
    """First vertex of ``vs`` met when walking ``p`` from ``start``."""
    seq = p.vertices if p.start == start else p.vertices[::-1]
    for v in seq:
        if v in vs:
            return v
    return None


def _omega_end(soc: Society, p: Path):
    return p.start if p.start in soc.pos else p.end


def _minimal_between(p: Path, A: frozenset, B: frozenset) -> Path | None:
    ia = [i for i, v in enumerate(p.vertices) if v in A]
    ib = [i for i, v in enumerate(p.vertices) if v in B]
    best = None
    for i in ia:
        for j in ib:
            if best is None or abs(i - j) < abs(best[0] - best[1]):
                best = (i, j)
    if best is None:
        return None
    return p.sub(p.vertices[best[0]], p.vertices[best[1]])


def _cycle_graph_edges(cycles: Iterable[Cycle]) -> set:
    return {e for C in cycles for e in C.edges}


def _sub_graph(g: Graph, edges: Iterable, vertices: Iterable) -> Graph:
    es = set(edges)
    vs = set(vertices)
    for e in es:
        vs.update(g.ends[e])
    return Graph(frozenset(vs), tuple((e, g.ends[e]) for e in sort_ids(es)))


def _check_radial(r: DiskRendition, nest: Sequence[Cycle], L: Sequence[Path], what: str) -> None:
    if not orthogonality(r, nest, L, "radial"):
        raise HypothesisViolated(f"{what} is not a radial linkage orthogonal to the nest")


# ---------------------------------------------------------------------------
# rooted transactions and linkages


def _j_graph(nest: Sequence[Cycle], U: frozenset, RV: frozenset) -> tuple[frozenset, frozenset]:
    """Vertices and edges of nest arcs between R-vertices with no interior vertex in U."""
    jv, je = set(RV), set()
    for C in nest:
        n = len(C.vertices)
        marks = [i for i, v in enumerate(C.vertices) if v in U]
        for a_i, a in enumerate(marks):
            b = marks[(a_i + 1) % len(marks)]
            if C.vertices[a] in RV and C.vertices[b] in RV:
                k = a
                while True:
                    jv.add(C.vertices[k])
                    if k == b:
                        break
                    je.add(C.edges[k])
                    k = (k + 1) % n
                    if len(marks) == 1 and k == a:
                        break
    return frozenset(jv), frozenset(je)


def root_transaction(
    soc: Society,
    rend: DiskRendition,
    nest: Sequence[Cycle],
    P1: Sequence[Path],
    P2: Sequence[Path],
    R1: Sequence[Path],
    R2: Sequence[Path],
    X1: Sequence,
    X2: Sequence,
    Y1: Sequence,
    Y2: Sequence,
    T: Sequence[Path],
):
    g = soc.graph
    r = len(P1)
    if r < 1 or len(P2) != r or len(R1) != 2 or len(R2) != 2:
        raise HypothesisViolated("need |P1| = |P2| = r >= 1 and |R1| = |R2| = 2")
    if len(nest) < r + 1:
        raise HypothesisViolated("the nest needs at least r + 1 cycles")
    segs = [tuple(X1), tuple(Y1), tuple(X2), tuple(Y2)]
    if any(not s or not soc.is_segment(s) for s in segs):
        raise HypothesisViolated("X1, Y1, X2, Y2 must be segments")
    if len(set().union(*map(set, segs))) != sum(map(len, segs)):
        raise HypothesisViolated("segments overlap")
    firsts = [soc.segment_order(s)[0] for s in segs]
    if not soc.ordered_in(firsts):
        raise HypothesisViolated("segments are not in the order X1, Y1, X2, Y2")
    allp = list(P1) + list(P2) + list(R1) + list(R2)
    if not is_linkage(g, allp):
        raise HypothesisViolated("P1, P2, R1, R2 together are not a linkage")
    for L, S, name in ((P1, X1, "P1"), (P2, X2, "P2"), (R1, Y1, "R1"), (R2, Y2, "R2")):
        _check_radial(rend, nest, L, name)
        if not all(_omega_end(soc, p) in set(S) for p in L):
            raise HypothesisViolated(f"a member of {name} does not end in its segment")
    U = _union_vertices(allp)
    jv, _ = _j_graph(nest, U, _union_vertices(list(R1) + list(R2)))
    T = list(T)
    if len(T) != r or not is_transaction(soc, T):
        raise HypothesisViolated("T must be a transaction of order r")
    sx1, sx2 = set(X1), set(X2)
    for p in T:
        a, b = p.ends
        if not ((a in sx1 and b in sx2) or (a in sx2 and b in sx1)):
            raise HypothesisViolated("T must run from X1 to X2")
    if _union_vertices(T) & jv:
        raise HypothesisViolated("T meets the J graph")

    inner = nest[:r]
    hv = (_union_vertices(list(P1) + list(P2)) | frozenset(v for C in inner for v in C.vertices)) - jv
    he = {e for e in _union_edges(list(P1) + list(P2)) | _cycle_graph_edges(inner) if not (set(g.ends[e]) & jv)}
    H = _sub_graph(g, he, hv)
    H1 = frozenset().union(*[c for c in H.components() if c & sx1]) if H.vertices else frozenset()
    H2 = frozenset().union(*[c for c in H.components() if c & sx2]) if H.vertices else frozenset()
    Cr = nest[r - 1].vertex_set
    gv, ge = set(H1 | H2), {e for e in he if set(H.ends[e]) <= (H1 | H2)}
    for p in T:
        sub = _minimal_between(p, Cr & H1, Cr & H2)
        if sub is None:
            raise HypothesisViolated("a member of T misses C_r inside H1 or H2")
        gv |= sub.vertex_set
        ge |= set(sub.edges)
    Gp = _sub_graph(g, ge, gv)
    paths, _ = disjoint_paths(Gp, sx1 & Gp.vertices, sx2 & Gp.vertices, soc.omega_set)
    if len(paths) < r:
        raise HypothesisViolated("fewer than r disjoint X1-X2 paths in the rooted graph")
    Q = make_transaction(soc, paths[:r])
    allowed = _union_vertices(T) | _union_vertices(list(P1) + list(P2)) | (
        frozenset(v for C in inner for v in C.vertices) - jv
    )
    if not _union_vertices(Q) <= allowed or not coterminal(rend, nest[r], list(Q), list(P1) + list(P2)):
        raise HypothesisViolated("rooted transaction failed its postcondition")  # pragma: no cover
    return Q


def root_linkage(
    soc: Society, rend: DiskRendition, nest: Sequence[Cycle], P1: Sequence[Path], Z: Iterable, T: Sequence[Path]
) -> tuple:
    g = soc.graph
    r = len(P1)
    Z = frozenset(Z)
    if r < 1 or len(T) != r:
        raise HypothesisViolated("need |P1| = |T| = r >= 1")
    if len(nest) < r + 1:
        raise HypothesisViolated("the nest needs at least r + 1 cycles")
    if rend.c0 is None or not Z <= rend.cell[rend.c0].vertices:
        raise HypothesisViolated("Z must lie in the vortex cell")
    _check_radial(rend, nest, P1, "P1")
    if not is_linkage(g, T):
        raise HypothesisViolated("T is not a linkage")
    oriented = []
    for p in T:
        if p.start in Z and p.end in soc.pos:
            oriented.append(p)
        elif p.end in Z and p.start in soc.pos:
            oriented.append(p.reversed())
        else:
            raise HypothesisViolated("members of T must run from Z to Omega")
    J = nest[:r]
    Cr = nest[r - 1].vertex_set
    gv = set(_union_vertices(P1)) | {v for C in J for v in C.vertices}
    ge = set(_union_edges(P1)) | _cycle_graph_edges(J)
    for p in oriented:
        hit = _first_in(p, Cr, p.start)
        if hit is None:
            raise HypothesisViolated("a member of T never reaches C_r")
        sub = p.sub(p.start, hit)
        gv |= sub.vertex_set
        ge |= set(sub.edges)
    Gp = _sub_graph(g, ge, gv)
    paths, _ = disjoint_paths(Gp, Z & Gp.vertices, soc.omega_set & Gp.vertices, soc.omega_set)
    if len(paths) < r:
        raise HypothesisViolated("fewer than r disjoint Z-Omega paths in the rooted graph")
    Q = tuple(p if p.start in Z else p.reversed() for p in paths[:r])
    allowed = _union_vertices(T) | _union_vertices(P1) | frozenset(v for C in J for v in C.vertices)
    if not _union_vertices(Q) <= allowed or not coterminal(rend, nest[r], list(Q), list(P1)):
        raise HypothesisViolated("rooted linkage failed its postcondition")  # pragma: no cover
    return Q


# ---------------------------------------------------------------------------
# crooked transactions made coterminal


def _augmenting_prefix(H: Graph, sources, sinks, flow: Sequence[Path], blocked: frozenset):
    """Shortest augmenting path for the vertex-disjoint linkage ``flow`` in H.

    Returns (R1, hit) where R1 is the part of the augmenting path before it first meets
    the linkage, ``hit`` is the linkage vertex ending R1 (None when R1 reaches a sink
    directly), or None when the linkage is maximum.
    """
    pred, succ = {}, {}
    on = set()
    for p in flow:
        for i, v in enumerate(p.vertices):
            on.add(v)
            pred[v] = p.vertices[i - 1] if i else None
            succ[v] = p.vertices[i + 1] if i + 1 < len(p.vertices) else None
    start = [x for x in sort_ids(sources) if x not in on and x not in blocked and x in H.vertices]
    prev = {}
    dq = deque()
    for x in start:
        prev[(x, 0)] = None
        dq.append((x, 0))
    srcset = set(sources)
    end = None
    while dq:
        node = dq.popleft()
        v, side = node
        nxt = []
        if side == 0:
            if v not in on:
                nxt.append((v, 1))
            elif pred[v] is not None:
                nxt.append((pred[v], 1))
        else:
            if v in sinks and v not in on:
                end = node
                break
            if v in on:
                nxt.append((v, 0))
            for w in H.neighbors(v):
                if w in blocked or w in srcset:
                    continue
                if v in on and succ[v] == w:
                    continue
                nxt.append((w, 0))
        for b in nxt:
            if b not in prev:
                prev[b] = node
                dq.append(b)
    if end is None:
        return None
    chain = []
    node = end
    while node is not None:
        chain.append(node)
        node = prev[node]
    chain.reverse()
    seq = []
    for v, side in chain:
        if side == 0:
            seq.append(v)
            if v in on:
                return Path.from_vertices(H, seq), v
    return Path.from_vertices(H, seq), None


def crooked_coterminal(
    soc: Society,
    rend: DiskRendition,
    nest: Sequence[Cycle],
    P: Sequence[Path],
    r: int,
    Q: Sequence[Path],
    trace: list | None = None,
) -> list[Path]:
    """Crooked transaction of order at least r coterminal with P up to level 2r+7.

    Q is the crooked transaction supplied by the caller. The potential is the number of
    edges in the unhooked interiors relative to H = P + the innermost 2r+6 nest cycles.
    """
    g = soc.graph
    if len(nest) < 2 * r + 7:
        raise HypothesisViolated("the nest needs at least 2r + 7 cycles")
    if len(P) != 2 * r + 6:
        raise HypothesisViolated("P must have exactly 2r + 6 members")
    _check_radial(rend, nest, P, "P")
    Q = list(Q)
    if len(Q) < r or not _is_crooked_transaction(soc, Q):
        raise HypothesisViolated("Q must be a crooked transaction of order at least r")
    # the hooks of t members must leave two free P-ends, so aim for t <= r + 2
    rp = min(max(4, r), r + 2)
    Q = trim_crooked(soc, Q, rp)
    inner = nest[: 2 * r + 6]
    he = set(_union_edges(P)) | _cycle_graph_edges(inner)
    H = _sub_graph(g, he, _union_vertices(P) | soc.omega_set | {v for C in inner for v in C.vertices})
    X = frozenset(_omega_end(soc, p) for p in P)
    level = nest[2 * r + 6]
    last = None
    for _ in range(4 * len(g.edges) + 4):
        if coterminal(rend, level, Q, list(P)):
            return Q
        decs = [hooks(H, q) for q in Q]
        pot = len({e for d in decs if d.interior for e in d.interior.edges})
        if last is not None and pot >= last:
            raise HypothesisViolated("the unhooked-interior potential did not decrease")
        last = pot
        _log(trace, "interior", pot)
        Q, R1, R2 = _two_attachments(soc, H, X, Q)
        Q = trim_crooked(soc, crooked_absorb_two(soc, Q, R1, R2), rp)
    raise HypothesisViolated("descent did not terminate")  # pragma: no cover


def _hook_paths(H: Graph, Q: Sequence[Path]) -> tuple[list, frozenset, dict]:
    """Hooks oriented from the Omega end inwards, interior H-vertices, and hook owners."""
    J, Y, owner = [], set(), {}
    for i, q in enumerate(Q):
        d = hooks(H, q)
        if d.interior is None:
            continue
        for h, side in ((d.hook_x, 0), (d.hook_y, 1)):
            if h is not None:
                J.append(h)
                for v in h.vertices:
                    owner[v] = (i, side)
        Y |= {v for v in d.interior.internal if v in H.vertices}
    return J, frozenset(Y), owner


def _two_attachments(soc: Society, H: Graph, X: frozenset, Q: list[Path]):
    """Reroute hooks until two disjoint H-paths reach interior vertices of unhooked interiors."""
    Q = list(Q)
    found: list[Path] = []
    for _ in range(4 * len(H.vertices) + 4):
        if len(found) == 2:
            return Q, found[0], found[1]
        J, Y, owner = _hook_paths(H, Q)
        qv = _union_vertices(Q)
        blocked = (qv - frozenset(owner) - Y) | (soc.omega_set - X)
        aug = _augmenting_prefix(H, X - qv, Y, J + found, blocked)
        if aug is None:
            raise HypothesisViolated("no augmenting path towards the unhooked interiors")
        R, hit = aug
        if hit is None:
            found.append(R)
            continue
        for k, f in enumerate(found):
            if hit in f.vertex_set:
                found[k] = R.join(f.sub(hit, f.end))
                break
        else:
            i, side = owner[hit]
            q = Q[i]
            far = q.end if side == 0 else q.start
            new = R.join(q.sub(hit, far))
            cand = Q[:i] + [new] + Q[i + 1 :]
            if not _is_crooked_transaction(soc, cand):
                raise HypothesisViolated("rehooking broke crookedness")
            Q = cand
    raise HypothesisViolated("hook rerouting did not terminate")  # pragma: no cover


# ---------------------------------------------------------------------------
# rotations


def _ring_sign(C: Cycle, order: Sequence) -> int:
    """+1 when the vertices ``order`` appear along C in index order, -1 when reversed."""
    idx = {v: i for i, v in enumerate(C.vertices)}
    seq = [idx[v] for v in order]
    m = len(seq)
    desc = sum(1 for i in range(m) if seq[(i + 1) % m] < seq[i])
    return 1 if desc <= 1 else -1


def _ring_walk(C: Cycle, start_idx: int, step: int, stop: frozenset) -> list[int] | None:
    """Indices from start along C in direction ``step`` until a vertex of ``stop``."""
    n = len(C.vertices)
    out = [start_idx]
    k = start_idx
    for _ in range(n):
        k = (k + step) % n
        out.append(k)
        if C.vertices[k] in stop:
            return out
    return None


def _rotation_candidates(soc, C, P1_seg: Path, P1p: Path, y1, x1p):
    """Both paths from y1 to x1' in P_1 + C + P'_1, each with its walk direction on C."""
    cv = {v: i for i, v in enumerate(C.vertices)}
    c1 = _first_in(P1_seg, C.vertex_set, y1)
    out = []
    if c1 is None:
        return out
    for step in (1, -1):
        walk = _ring_walk(C, cv[c1], step, P1p.vertex_set)
        if walk is None:
            continue
        # advance the start to the last P_1 vertex met before leaving P_1
        s = 0
        while s + 1 < len(walk) and C.vertices[walk[s + 1]] in P1_seg.vertex_set:
            s += 1
        walk = walk[s:]
        verts = [C.vertices[k] for k in walk]
        edges = []
        for a, b in zip(walk, walk[1:]):
            edges.append(C.edges[a] if (a + 1) % len(C.vertices) == b else C.edges[b])
        head = P1_seg.sub(y1, verts[0])
        arc = Path(tuple(verts), tuple(edges))
        tail = P1p.sub(verts[-1], x1p)
        try:
            q = head.join(arc).join(tail)
        except ValueError:
            continue
        out.append((q, step))
    return out


def rotate_transaction(
    soc: Society,
    rend: DiskRendition,
    nest: Sequence[Cycle],
    P: Sequence[Path],
    Q: Sequence[Path],
    targets: Sequence,
) -> tuple:
    g = soc.graph
    p = len(Q)
    targets = list(targets)
    if p < 1 or len(nest) < 4 * p + 2:
        raise HypothesisViolated("need p >= 1 and at least 4p + 2 nest cycles")
    if len(P) < 4 * p:
        raise HypothesisViolated("P needs at least 4p members")
    _check_radial(rend, nest, P, "P")
    if not is_linkage(g, Q) or not all(is_omega_path(soc, q) for q in Q):
        raise HypothesisViolated("Q must be a linkage of Omega-paths")
    if not coterminal(rend, nest[0], list(Q), list(P)):
        raise HypothesisViolated("Q is not coterminal with P up to level C_1")
    by_end = {}
    for m in P:
        e = _omega_end(soc, m)
        by_end[e] = m if m.start == e else m.reversed()
    if len(targets) != 2 * p or len(set(targets)) != 2 * p or not all(t in by_end for t in targets):
        raise HypothesisViolated("targets must be 2p distinct Omega ends of P")
    if not soc.ordered_in(targets):
        raise HypothesisViolated("targets must be listed in Omega order")
    xs = sorted((v for q in Q for v in q.ends), key=lambda v: soc.pos[v])
    if not all(x in by_end for x in xs):
        raise HypothesisViolated("every endpoint of Q must be an end of P")

    C = lambda i: nest[i - 1]  # 1-based as in the nest numbering
    C1v = C(1).vertex_set
    ys, Ps, Pps, Rs, Ss = [], [], [], [], []
    for x, xp in zip(xs, targets):
        m = by_end[x]
        y = _first_in(m, C1v, x)
        Pi = m.sub(x, y)
        mp = by_end[xp]
        Pp = mp.sub(xp, _first_in(mp, C1v, xp))
        Ri = Pi.sub(y, _first_in(Pi, C(2 * p + 1).vertex_set, y))
        Si = Pp.sub(xp, _first_in(Pp, C(2 * p + 2).vertex_set, xp))
        ys.append(y)
        Ps.append(Pi)
        Pps.append(Pp)
        Rs.append(Ri)
        Ss.append(Si)
    bars = []
    for m in by_end.values():
        b = _minimal_between(m, C(2).vertex_set, C(4 * p + 1).vertex_set)
        if b is not None:
            bars.append(b)
    hv = {v for i in range(1, 4 * p + 2) for v in C(i).vertices}
    he = _cycle_graph_edges(nest[: 4 * p + 1])
    for path in Rs + Ss + bars:
        hv |= path.vertex_set
        he |= set(path.edges)
    # keep L off the part of Q inside C_1 except at the y_i
    middle = _union_vertices(Q) - _union_vertices(Ps) - frozenset(ys)
    hv -= middle
    he = {e for e in he if not (set(g.ends[e]) & middle)}

    members = sorted(by_end, key=lambda v: soc.pos[v])
    ring_hits = {}
    for i in range(1, 4 * p + 2):
        ring_hits[i] = [_first_in(by_end[v], C(i).vertex_set, v) for v in members]
    sign = {i: _ring_sign(C(i), ring_hits[i]) for i in ring_hits}

    Cm = C(2 * p + 1)
    if Ps[0].vertex_set == Pps[0].vertex_set:
        cands = [(Ps[0].reversed(), 1), (Ps[0].reversed(), -1)]
    else:
        opts = _rotation_candidates(soc, Cm, Ps[0], Pps[0], ys[0], targets[0])
        opts.sort(key=lambda qs: sum(1 for m in P if m.vertex_set & qs[0].vertex_set))
        cands = []
        for q, step in opts:
            # cw_rel: orientation (relative to the P order) of walking from P'_1 to P_1
            cw_rel = -step * sign[2 * p + 1]
            cands += [(q, cw_rel), (q, -cw_rel)]
    for q, cw_rel in cands:
        out = _rotation_attempt(soc, g, nest, p, q, cw_rel, sign, hv, he, bars, Q, xs, ys, targets)
        if out is not None:
            if coterminal(rend, nest[4 * p + 1], list(out), list(P)):
                return out
    raise HypothesisViolated("no rotation linkage with the required pairing")


def _rotation_attempt(soc, g, nest, p, q, cw_rel, sign, hv, he, bars, Q, xs, ys, targets):
    he = set(he)
    qv, qe = q.vertex_set, set(q.edges)
    for i in range(2, 4 * p + 2):
        Ci = nest[i - 1]
        n = len(Ci.vertices)
        inq = [k for k in range(n) if Ci.vertices[k] in qv]
        if not inq or len(inq) == n:
            continue
        ccw = -cw_rel * sign[i]
        for k in inq:
            nb = (k + ccw) % n
            if Ci.vertices[nb] in qv:
                continue
            he.discard(Ci.edges[k] if ccw == 1 else Ci.edges[nb])
    lo, hi = nest[2 * p].vertex_set, nest[2 * p + 1].vertex_set
    for b in bars:
        if not (b.vertex_set & qv):
            continue
        idx = [k for k, v in enumerate(b.vertices) if v in lo]
        jdx = [k for k, v in enumerate(b.vertices) if v in hi]
        if not idx or not jdx:
            continue
        a, c = min(((a, c) for a in idx for c in jdx), key=lambda t: abs(t[0] - t[1]))
        s, t = min(a, c), max(a, c)
        for k in range(s, t):
            # only edges that touch q without lying on it; q's own step onto P'_1 stays
            if (b.vertices[k] in qv or b.vertices[k + 1] in qv) and b.edges[k] not in qe:
                he.discard(b.edges[k])
    H = _sub_graph(g, {e for e in he if set(g.ends[e]) <= hv}, hv)
    L, _ = disjoint_paths(H, frozenset(ys), frozenset(targets), soc.omega_set)
    if len(L) != 2 * p:
        return None
    link = {}
    for path in L:
        y, x = (path.start, path.end) if path.start in set(ys) else (path.end, path.start)
        link[y] = path if path.start == y else path.reversed()
    for y, xp in zip(ys, targets):
        if y not in link or link[y].end != xp:
            return None
    ymap = dict(zip(xs, ys))
    out = []
    try:
        for m in Q:
            a, b = m.ends
            mid = m.sub(ymap[a], ymap[b])
            new = link[ymap[a]].reversed().join(mid).join(link[ymap[b]])
            out.append(new)
    except ValueError:
        return None
    if not is_linkage(g, out) or not all(is_omega_path(soc, x) for x in out):
        return None
    return tuple(out)


# ---------------------------------------------------------------------------
# S-diverse families


@dataclass(frozen=True)
class SDiverseFamily:
    """Paths oriented from the minor end (start) to the major end (end)."""

    X: frozenset
    parts: tuple  # tuple of frozensets partitioning X
    paths: tuple

    def part_of(self, v) -> int:
        for i, s in enumerate(self.parts):
            if v in s:
                return i
        raise KeyError(v)


def is_s_diverse(g: Graph, fam: SDiverseFamily) -> bool:
    X = fam.X
    if frozenset().union(*fam.parts) != X if fam.parts else X:
        return False
    if sum(len(s) for s in fam.parts) != len(X):
        return False
    if not is_linkage(g, fam.paths):
        return False
    majors = set()
    for q in fam.paths:
        if q.length < 1 or q.start not in X or q.end not in X:
            return False
        if any(v in X for v in q.internal):
            return False
        if fam.part_of(q.start) == fam.part_of(q.end):
            return False
        majors.add(fam.part_of(q.end))
    return len(majors) == len(fam.paths)


def majority_equivalent(a: SDiverseFamily, b: SDiverseFamily) -> bool:
    pa = sorted(a.part_of(q.end) for q in a.paths)
    pb = sorted(b.part_of(q.end) for q in b.paths)
    return pa == pb


def diverse_exchange(g: Graph, fam: SDiverseFamily, R: Path) -> SDiverseFamily:
    qv = _union_vertices(fam.paths)
    if R.length < 1:
        raise PreconditionViolated("R needs length at least one")
    if R.start not in fam.X:
        R = R.reversed()
    if R.start not in fam.X or any(v in fam.X for v in R.vertices[1:]):
        raise PreconditionViolated("R must meet X exactly at one end")
    y = R.end
    if [v for v in R.vertices if v in qv] != [y]:
        raise PreconditionViolated("R must meet the family only at its far end")
    idx = [i for i, q in enumerate(fam.paths) if y in q.internal]
    if not idx:
        raise PreconditionViolated("R must end at an internal vertex of a member")
    i = idx[0]
    Q = fam.paths[i]
    s, t = Q.start, Q.end
    x = R.start
    if fam.part_of(x) != fam.part_of(t):
        new = R.join(Q.sub(y, t))  # x minor, t stays major
    else:
        new = Q.sub(s, y).join(R.reversed())  # s minor, x becomes major
    paths = fam.paths[:i] + (new,) + fam.paths[i + 1 :]
    return SDiverseFamily(fam.X, fam.parts, paths)


def augment_diverse(
    g: Graph, fam: SDiverseFamily, Y: Iterable, R: Sequence[Path], trace: list | None = None
) -> tuple[SDiverseFamily, Path]:
    Y = frozenset(Y)
    X = fam.X
    k = len(fam.paths) + 1
    if len(R) != 2 * k - 1:
        raise HypothesisViolated("need 2k - 1 linkage paths for k - 1 diverse paths")
    if Y & X:
        raise HypothesisViolated("Y must avoid X")
    if not is_s_diverse(g, fam):
        raise HypothesisViolated("family is not S-diverse")
    Rs = []
    for p in R:
        if p.start not in X:
            p = p.reversed()
        if p.start not in X or p.end not in Y:
            raise HypothesisViolated("every linkage path must run from X to Y")
        if any(v in X for v in p.vertices[1:]) or any(v in Y for v in p.vertices[:-1]):
            raise HypothesisViolated("linkage paths must meet X and Y only at their ends")
        Rs.append(p)
    if not is_linkage(g, Rs):
        raise HypothesisViolated("the X-Y paths are not disjoint")
    re = _union_edges(Rs)
    last = None
    for _ in range(len(g.edges) + 2):
        qv = _union_vertices(fam.paths)
        pot = len(re | _union_edges(fam.paths))
        if last is not None and pot >= last:  # pragma: no cover
            raise HypothesisViolated("edge potential did not decrease")
        last = pot
        _log(trace, "edges", pot)
        free = [p for p in Rs if p.start not in qv]
        for p in free:
            if not (p.vertex_set & qv):
                return fam, p
        p = free[0]
        v = next(w for w in p.vertices if w in qv)
        fam = diverse_exchange(g, fam, p.sub(p.start, v))
    raise HypothesisViolated("descent did not terminate")  # pragma: no cover


# ---------------------------------------------------------------------------
# leap patterns


def d_metric(soc: Society, P: Iterable[Path], x, y) -> int:
    P = list(P)
    ends = {v for p in P for v in p.ends}
    for v in (x, y):
        if v not in soc.pos:
            raise ValueError(f"{v!r} is not on Omega")
        if v in ends:
            raise EndpointOfP(f"{v!r} is an endpoint of the linkage")
    if x == y:
        return 0
    inside = set(soc.arc(x, y)) - {x, y}
    return sum(1 for p in P if (p.start in inside) != (p.end in inside))


@dataclass(frozen=True)
class LeapPattern:
    P: tuple
    Q: tuple  # oriented s_i -> t_i
    k: int
    l: int


def leap_labelling(soc: Society, P: Sequence[Path], Q: Sequence[Path], l: int) -> tuple | None:
    """Orient each member of Q as s_i -> t_i so that all distance conditions hold."""
    ends = {v for p in P for v in p.ends}
    if any(v in ends for q in Q for v in q.ends):
        return None
    d = lambda a, b: d_metric(soc, P, a, b)
    if any(d(q.start, q.end) < l for q in Q):
        return None
    chosen: list = []

    def rec(i: int) -> bool:
        if i == len(Q):
            return True
        for q in (Q[i], Q[i].reversed()):
            if all(d(q.end, c.end) >= l for c in chosen):
                chosen.append(q)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if rec(0) else None


def _verify_plain(soc: Society, P, Q, k: int, l: int) -> bool:
    g = soc.graph
    if len(Q) != k:
        return False
    if not all(is_omega_path(soc, x) for x in list(P) + list(Q)):
        return False
    if not is_linkage(g, list(P) + list(Q)):
        return False
    if not is_planar_transaction(soc, list(P)):
        return False
    return leap_labelling(soc, P, Q, l) is not None


def verify_leap(soc: Society, pattern, k: int, l: int, twisted: bool = False) -> bool:
    P, Q = (pattern.P, pattern.Q) if isinstance(pattern, LeapPattern) else pattern
    P, Q = list(P), list(Q)
    if not twisted:
        return _verify_plain(soc, P, Q, k, l)
    for X in _twist_segments(soc, P):
        if _verify_plain(flip(soc, X), P, Q, k, l):
            return True
    return False


def _twist_segments(soc: Society, P: Sequence[Path]) -> list[tuple]:
    om = soc.omega
    n = len(om)
    out = []
    for i in range(n):
        for j in range(n - 1):
            X = tuple(om[(i + t) % n] for t in range(j + 1))
            xs = set(X)
            if all((p.start in xs) != (p.end in xs) for p in P):
                out.append(X)
    return out


def minimalize_leap(soc: Society, leap: LeapPattern) -> LeapPattern:
    if not verify_leap(soc, (leap.P, leap.Q), leap.k, leap.l):
        raise NotALeap("input is not a valid leap pattern")
    P = sorted(leap.P, key=lambda p: _min_key(p.vertices))
    changed = True
    while changed:
        changed = False
        for i in range(len(P)):
            rest = P[:i] + P[i + 1 :]
            if verify_leap(soc, (rest, leap.Q), leap.k, leap.l):
                P = rest
                changed = True
                break
    Q = leap_labelling(soc, P, leap.Q, leap.l)
    out = LeapPattern(tuple(P), Q, leap.k, leap.l)
    if len(P) + len(Q) > leap.k * (2 * leap.l + 1):  # pragma: no cover
        raise AssertionError("minimal pattern exceeds the size bound")
    return out


def _clean_linkage(soc: Society, members: Sequence[Path], R: list[Path], trace: list | None) -> list[Path]:
    """Reroute R so every member it meets shares an end with some path of R."""
    re = lambda: _union_edges(R) | _union_edges(members)
    last = None
    while True:
        pot = len(re())
        if last is not None and pot >= last:  # pragma: no cover
            raise HypothesisViolated("edge potential did not decrease")
        last = pot
        _log(trace, "linkage", pot)
        rends = {p.start for p in R}
        rv = _union_vertices(R)
        bad = [m for m in members if (m.vertex_set & rv) and not (set(m.ends) & rends)]
        if not bad:
            return R
        m = bad[0]
        w = m.start
        v = next(u for u in m.vertices if u in rv)
        j = next(i for i, p in enumerate(R) if v in p.vertex_set)
        R = R[:j] + [m.sub(w, v).join(R[j].sub(v, R[j].end))] + R[j + 1 :]


def augment_leap(
    soc: Society, leap: LeapPattern, Z: Iterable, R: Sequence[Path], trace: list | None = None
) -> tuple[LeapPattern, Path]:
    g = soc.graph
    Z = frozenset(Z)
    k = (len(R) + 1) // 2
    if len(R) != 2 * k - 1 or k < 1:
        raise HypothesisViolated("R must have odd size 2k - 1")
    if leap.k != k - 1 or leap.l % (2 * k):
        raise HypothesisViolated("leap pattern must be a (k-1, 2kl)-pattern")
    l = leap.l // (2 * k)
    if l < 1:
        raise HypothesisViolated("l must be positive")
    if not verify_leap(soc, (leap.P, leap.Q), leap.k, leap.l):
        raise HypothesisViolated("input is not a valid leap pattern")
    Rs = []
    for p in R:
        if p.start not in soc.pos:
            p = p.reversed()
        if p.start not in soc.pos or p.end not in Z:
            raise HypothesisViolated("every member of R must run from Omega to Z")
        if any(v in soc.pos for v in p.vertices[1:]) or any(v in Z for v in p.vertices[:-1]):
            raise HypothesisViolated("members of R must meet Omega and Z only at their ends")
        Rs.append(p)
    if not is_linkage(g, Rs):
        raise HypothesisViolated("R is not a linkage")
    P, Q = list(leap.P), list(leap_labelling(soc, leap.P, leap.Q, leap.l))
    used = _union_vertices(P) | _union_vertices(Q)
    for p in Rs:
        if not (p.vertex_set & used):
            return LeapPattern(tuple(P), tuple(Q), k - 1, l), p
    Rs = _clean_linkage(soc, P + Q, Rs, trace)
    rstarts = {p.start for p in Rs}
    hitQ = [i for i, q in enumerate(Q) if set(q.ends) & rstarts]
    t = len(hitQ)
    must = [p for p in Rs if p.start in {v for i in hitQ for v in Q[i].ends}]
    extra = [p for p in Rs if p not in must]
    Rp = (must + extra)[: 2 * t + 1]
    rv = _union_vertices(Rs)
    Pi = [p for p in P if not (p.vertex_set & rv)]
    X = frozenset(p.start for p in Rp) | frozenset(v for q in Q for v in q.ends)

    def separating_step(Pcur):
        best = None
        for x, y in itertools.combinations(sort_ids(X), 2):
            dv = d_metric(soc, Pcur, x, y)
            if 0 < dv <= l - 1:
                key = (dv, vkey(x), vkey(y))
                if best is None or key < best[0]:
                    best = (key, x, y)
        return best

    def classes(Pcur) -> list[frozenset]:
        out: list = []
        for x in sort_ids(X):
            for c in out:
                if d_metric(soc, Pcur, x, next(iter(c))) == 0:
                    c.add(x)
                    break
            else:
                out.append({x})
        return [frozenset(c) for c in out]

    while True:
        _log(trace, "classes", len(classes(Pi)))
        step = separating_step(Pi)
        if step is None:
            break
        _, x, y = step
        inside = set(soc.arc(x, y)) - {x, y}
        Pi = [p for p in Pi if (p.start in inside) == (p.end in inside)]
    parts = tuple(classes(Pi))
    fam = SDiverseFamily(X, parts, tuple(Q[i] for i in hitQ))
    sub_e = _union_edges(Rp) | _union_edges(fam.paths)
    sub = _sub_graph(g, sub_e, _union_vertices(Rp) | X)
    Y = frozenset(p.end for p in Rp)
    sub_trace: list = []
    fam2, Rout = augment_diverse(sub, fam, Y, Rp, trace=sub_trace)
    if trace is not None:
        trace.extend(("diverse", v) for _, v in sub_trace)
    newQ = list(fam2.paths) + [q for i, q in enumerate(Q) if i not in hitQ]
    out = LeapPattern(tuple(Pi), tuple(newQ), k - 1, l)
    if not verify_leap(soc, (out.P, out.Q), k - 1, l) or Rout.vertex_set & (
        _union_vertices(out.P) | _union_vertices(out.Q)
    ):  # pragma: no cover
        raise AssertionError("augmented leap pattern failed verification")
    return out, Rout
