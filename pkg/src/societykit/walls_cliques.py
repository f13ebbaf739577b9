"""Walls, meshes and the extraction of grasped clique minors from cylindrical renditions."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .graph_core import (
    Cycle,
    Graph,
    GraspBinding,
    MinorModel,
    Path,
    bipartite_matching,
    model_from_branch_sets,
    sort_ids,
    verify_minor_model,
)
from .renditions import DiskRendition, coterminal, orthogonality
from .transactions import (
    handle_labelling,
    is_crosscap,
    is_transaction,
    nested_crosses_check,
    _splits_with_ends,
)


class RTooSmall(ValueError):
    pass


class HypothesisViolated(ValueError):
    pass


class RoutingFailed(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# meshes and walls


def _meet_is_path(P: Path, Q: Path) -> tuple[bool, int]:
    """Whether P ∩ Q is a (non-empty) path; also returns its vertex count."""
    common = P.vertex_set & Q.vertex_set
    if not common:
        return False, 0
    ip = sorted(P.index(v) for v in common)
    iq = sorted(Q.index(v) for v in common)
    if ip[-1] - ip[0] + 1 != len(ip) or iq[-1] - iq[0] + 1 != len(iq):
        return False, len(common)
    qe = set(Q.edges)
    if any(P.edges[k] not in qe for k in range(ip[0], ip[-1])):
        return False, len(common)
    return True, len(common)


@dataclass(frozen=True)
class Mesh:
    """A graph covered by horizontal paths P_1..P_r and vertical paths Q_1..Q_s.

    Path indices are 0-based throughout.
    """

    graph: Graph
    horizontal: tuple
    vertical: tuple

    @property
    def r(self) -> int:
        return len(self.horizontal)

    @property
    def s(self) -> int:
        return len(self.vertical)

    def violations(self) -> list[str]:
        out: list[str] = []
        H, V = self.horizontal, self.vertical
        r, s = len(H), len(V)
        if r < 2 or s < 2:
            return ["a mesh needs at least two paths in each direction"]
        g = self.graph
        for name, fam in (("horizontal", H), ("vertical", V)):
            for k, P in enumerate(fam):
                if not P.is_valid_in(g):
                    out.append(f"{name} path {k} is not a path of the graph")
            for a in range(len(fam)):
                for b in range(a + 1, len(fam)):
                    if fam[a].vertex_set & fam[b].vertex_set:
                        out.append(f"{name} paths {a} and {b} intersect")
        if out:
            return out
        vs = frozenset(v for P in H + V for v in P.vertices)
        es = frozenset(e for P in H + V for e in P.edges)
        if vs != g.vertices or es != frozenset(g.ends):
            out.append("the graph is not the union of the paths")
        for i, P in enumerate(H):
            for j, Q in enumerate(V):
                ok, size = _meet_is_path(P, Q)
                if not ok:
                    out.append(f"P{i} and Q{j} do not meet in a path")
                elif (i in (0, r - 1) or j in (0, s - 1)) and size != 1:
                    out.append(f"P{i} and Q{j} meet in more than one vertex")
        if out:
            return out
        for i, P in enumerate(H):
            if P.start not in V[0].vertex_set or P.end not in V[-1].vertex_set:
                out.append(f"P{i} does not run from Q0 to Q{s - 1}")
            firsts = [min(P.index(v) for v in P.vertex_set & Q.vertex_set) for Q in V]
            if firsts != sorted(firsts):
                out.append(f"P{i} meets the vertical paths out of order")
        for j, Q in enumerate(V):
            if Q.start not in H[0].vertex_set or Q.end not in H[-1].vertex_set:
                out.append(f"Q{j} does not run from P0 to P{r - 1}")
            firsts = [min(Q.index(v) for v in Q.vertex_set & P.vertex_set) for P in H]
            if firsts != sorted(firsts):
                out.append(f"Q{j} meets the horizontal paths out of order")
        return out

    def is_valid(self) -> bool:
        return not self.violations()


@dataclass(frozen=True)
class Wall:
    mesh: Mesh
    corners: frozenset
    pegs: frozenset
    outer_cycle: Cycle

    @property
    def graph(self) -> Graph:
        return self.mesh.graph

    @property
    def horizontal(self) -> tuple:
        return self.mesh.horizontal

    @property
    def vertical(self) -> tuple:
        return self.mesh.vertical


def elementary_wall(r: int) -> Wall:
    """Elementary r-wall on vertices (column, row), columns 1..2r and rows 1..r."""
    if r < 2:
        raise RTooSmall("an elementary wall needs r >= 2")
    V = {(i, j) for i in range(1, 2 * r + 1) for j in range(1, r + 1)}
    pairs = [((i, j), (i + 1, j)) for j in range(1, r + 1) for i in range(1, 2 * r)]
    # rungs between rows j and j+1 survive at even columns for odd j, odd columns for even j
    for j in range(1, r):
        pairs += [((i, j), (i, j + 1)) for i in range(1, 2 * r + 1) if (i % 2 == 0) == (j % 2 == 1)]
    deg = {v: 0 for v in V}
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    drop = {v for v in V if deg[v] == 1}
    V -= drop
    pairs = [(a, b) for a, b in pairs if a in V and b in V]
    g = Graph.from_edge_list(V, pairs)

    def q_seq(k: int) -> list:
        seq = [(2 * k, 1)]
        for j in range(2, r + 1):
            c_in = 2 * k if (j - 1) % 2 == 1 else 2 * k - 1
            seq.append((c_in, j))
            if j < r:
                c_out = 2 * k if j % 2 == 1 else 2 * k - 1
                if c_out != c_in:
                    seq.append((c_out, j))
        return seq

    vert = [Path.from_vertices(g, q_seq(k)) for k in range(1, r + 1)]
    horiz = []
    for j in range(1, r + 1):
        lo = max(c for c, y in vert[0].vertices if y == j)
        hi = min(c for c, y in vert[-1].vertices if y == j)
        horiz.append(Path.from_vertices(g, [(c, j) for c in range(lo, hi + 1)]))
    mesh = Mesh(g, tuple(horiz), tuple(vert))
    P1, Pr, Q1, Qr = horiz[0], horiz[-1], vert[0], vert[-1]
    corners = frozenset(
        next(iter(P.vertex_set & Q.vertex_set)) for P in (P1, Pr) for Q in (Q1, Qr)
    )
    seq = list(P1.vertices) + list(Qr.vertices[1:]) + list(Pr.reversed().vertices[1:])
    seq += list(Q1.reversed().vertices[1:-1])
    outer = Cycle.from_vertices(g, seq)
    pegs = frozenset(v for v in g.vertices if len(g.neighbors(v)) == 2) | corners
    return Wall(mesh, corners, pegs, outer)


def h1(r: int) -> tuple[Graph, Mesh]:
    """The 2r x 2r grid plus a crossing pair of edges in every square of the middle band.

    Vertices are (column, row). The mesh covers the grid part only; the crossing edges
    come last in the edge numbering.
    """
    if r < 1:
        raise RTooSmall("need r >= 1")
    n = 2 * r
    V = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    pairs = [((i, j), (i + 1, j)) for j in range(1, n + 1) for i in range(1, n)]
    pairs += [((i, j), (i, j + 1)) for i in range(1, n + 1) for j in range(1, n)]
    n_grid = len(pairs)
    for i in range(1, n):
        pairs.append(((i, r), (i + 1, r + 1)))
        pairs.append(((i + 1, r), (i, r + 1)))
    g = Graph.from_edge_list(V, pairs)
    grid = g.edge_subgraph(range(n_grid), V)
    horiz = tuple(Path.from_vertices(grid, [(i, j) for i in range(1, n + 1)]) for j in range(1, n + 1))
    vert = tuple(Path.from_vertices(grid, [(i, j) for j in range(1, n + 1)]) for i in range(1, n + 1))
    return g, Mesh(grid, horiz, vert)


def vicinity(mesh: Mesh, x) -> tuple[frozenset, frozenset]:
    """Indices of the horizontal and vertical paths in whose vicinity x lies."""
    g = mesh.graph
    if x not in g.vertices:
        raise ValueError(f"{x!r} is not a mesh vertex")

    def near(fam):
        for i, P in enumerate(fam):
            if x in P.vertex_set:
                return frozenset([i])
        on = frozenset(v for P in fam for v in P.vertices)
        comp = next(c for c in g.components(g.vertices - on) if x in c)
        touched = {y for v in comp for y in g.neighbors(v) if y in on}
        return frozenset(i for i, P in enumerate(fam) if P.vertex_set & touched)

    return near(mesh.horizontal), near(mesh.vertical)


def far_from_boundary(mesh: Mesh, x, d: int) -> bool:
    if d <= 0:
        return True
    hs, vs = vicinity(mesh, x)
    r, s = mesh.r, mesh.s
    return all(d <= i <= r - d - 1 for i in hs) and all(d <= j <= s - d - 1 for j in vs)


# ---------------------------------------------------------------------------
# grasping


def grasp_binding(
    model: MinorModel, rows: Sequence[Iterable], cols: Sequence[Iterable], mode: str = "mesh"
) -> GraspBinding | None:
    """Find, for every branch set, t row/column pairs with distinct indices whose meet it holds."""
    R = [frozenset(x) for x in rows]
    C = [frozenset(x) for x in cols]
    t = len(model.branch_sets)
    assignment = []
    for X in model.branch_sets:
        opts = {}
        for i, row in enumerate(R):
            if not row & X:
                continue
            cand = []
            for j, col in enumerate(C):
                meet = row & col
                if meet and meet <= X:
                    cand.append(j)
            if cand:
                opts[i] = cand
        match = bipartite_matching(opts)
        if len(match) < t:
            return None
        assignment.append(tuple(sorted(match.items())[:t]))
    return GraspBinding(tuple(tuple(r) for r in rows), tuple(tuple(c) for c in cols), tuple(assignment), mode)


def grasped_binding_check(model: MinorModel, rows, cols, mode: str = "mesh") -> bool:
    return grasp_binding(model, rows, cols, mode) is not None


@dataclass(frozen=True)
class CliqueResult:
    graph: Graph
    model: MinorModel
    binding: GraspBinding
    trace: tuple = ()  # (stage, linked pairs) while routing, when the routine records one


def certificate_json(res: CliqueResult) -> dict:
    from .renditions import _enc

    return {
        "branch_sets": [[_enc(v) for v in sort_ids(X)] for X in res.model.branch_sets],
        "witness_edges": [[i, j, e] for i, j, e in res.model.witness_edges],
        "grasped": {
            "mode": res.binding.mode,
            "assignment": [[[i, j] for i, j in pairs] for pairs in res.binding.assignment],
        },
    }


# ---------------------------------------------------------------------------
# K_p in the crossed grid


def _wire_cells(p: int) -> tuple[int, dict]:
    """Vertex sets (column, row) of p connected wires in H¹ of size p(p-1) that pairwise touch.

    Every wire runs across all columns. Wires meet by swapping rows through the crossing
    pairs of the middle band; finished wires are parked off the band and drift outward
    so that each one spans many rows.
    """
    n = p * (p - 1)
    r = n // 2
    T, B = r, r + 1
    cells: dict = {w: set() for w in range(p)}
    row = {0: T}
    for w in range(1, p):
        row[w] = B + w - 1
    for w in range(p):
        cells[w].add((1, row[w]))
    parked: dict = {"top": [], "bot": []}
    out = {"top": -1, "bot": 1}

    def vmove(w, c, y):
        lo, hi = sorted((row[w], y))
        for t in range(lo, hi + 1):
            cells[w].add((c, t))
        row[w] = y

    def step(c, diag=()):
        for side in ("top", "bot"):
            prev = 0 if side == "top" else n + 1
            for w in parked[side]:
                y = row[w] + out[side]
                if y != prev and 1 <= y <= n:
                    vmove(w, c, y)
                prev = row[w]
        for w in range(p):
            if w in diag:
                row[w] = B if row[w] == T else T
            cells[w].add((c + 1, row[w]))

    Z, src, order, c, first = 0, "bot", list(range(1, p)), 1, True
    while order:
        dst = "top" if src == "bot" else "bot"
        band_src = B if src == "bot" else T
        band_dst = T if src == "bot" else B
        A = len(order) - 1
        for idx, x in enumerate(order):
            if not first:
                vmove(x, c, band_src)
            first = False
            step(c, diag=(Z, x))
            c += 1
            if idx < A:
                d = A - idx
                vmove(x, c, band_dst + (-d if dst == "top" else d))
                step(c, diag=(Z,))
                c += 1
            else:
                d = len(order)
                y = band_src + (-d if src == "top" else d)
                if 1 <= y <= n:
                    vmove(Z, c, y)
                    parked[src].append(Z)
                if A:
                    step(c, diag=(x,))
                    c += 1
        Z, order, src = order[-1], list(reversed(order[:-1])), dst
    return n, cells


def h1_clique(p: int) -> CliqueResult:
    """A K_p model grasped by the grid of H¹ of size p(p-1)."""
    if p < 2:
        raise RTooSmall("need p >= 2")
    n, cells = _wire_cells(p)
    g, mesh = h1(n // 2)
    model = model_from_branch_sets(g, [cells[w] for w in range(p)])
    if model is None or not verify_minor_model(g, model):
        raise RoutingFailed("wire construction did not give a clique model")
    rows = [P.vertices for P in mesh.horizontal]
    cols = [Q.vertices for Q in mesh.vertical]
    b = grasp_binding(model, rows, cols, "mesh")
    if b is None:
        raise RoutingFailed("wires are not grasped by the grid")
    return CliqueResult(g, model, b)


# ---------------------------------------------------------------------------
# clique from nested crosses


def _cyclic_cells(C: Cycle, cells: dict) -> list:
    """Keys of ``cells`` (disjoint vertex sets on C) in the cyclic order of C."""
    owner = {}
    for key, vs in cells.items():
        for v in vs:
            owner[v] = key
    seq = []
    for v in C.vertices:
        k = owner.get(v)
        if k is not None and (not seq or seq[-1] != k):
            seq.append(k)
    if len(seq) > 1 and seq[0] == seq[-1]:
        seq.pop()
    if len(seq) != len(cells):
        raise HypothesisViolated("a cycle meets a leg in more than one piece")
    return seq


def _arc_between(C: Cycle, A: frozenset, B: frozenset, blocked: frozenset) -> frozenset:
    """Interior of an arc of C from A to B that avoids every vertex of ``blocked``."""
    n = len(C.vertices)
    for start in (k for k, v in enumerate(C.vertices) if v in A):
        for step in (1, -1):
            out = []
            k = (start + step) % n
            while C.vertices[k] not in A and C.vertices[k] not in blocked:
                out.append(C.vertices[k])
                k = (k + step) % n
            if C.vertices[k] in B:
                return frozenset(out)
    raise HypothesisViolated("no arc between neighbouring cells")


def _between(P: Path, A: frozenset, B: frozenset) -> frozenset:
    ia = [P.index(v) for v in A]
    ib = [P.index(v) for v in B]
    if max(ia) < min(ib):
        return frozenset(P.vertices[max(ia) + 1 : min(ib)])
    if max(ib) < min(ia):
        return frozenset(P.vertices[max(ib) + 1 : min(ia)])
    raise HypothesisViolated("cells overlap along a path")


def clique_from_nested_crosses(
    r: DiskRendition,
    nest: Sequence[Cycle],
    P: Sequence[Path],
    N: Sequence[Path],
    p: int,
    twisted: bool | None = None,
) -> CliqueResult:
    """K_p grasped by the nest and P, from (twisted) nested crosses N coterminal with P.

    ``nest[0]`` is the innermost cycle. N must hold at least 4p² paths and P at least 8p².
    """
    if p < 2:
        raise HypothesisViolated("need p >= 2")
    soc = r.society
    g = soc.graph
    paths, radial, cycles = list(N), list(P), list(nest)
    K = len(paths)
    n = p * (p - 1)
    half = n // 2
    if len(cycles) < max(4 * p * p, p * p + half):
        raise HypothesisViolated("nest is too short")
    if len(radial) < 8 * p * p:
        raise HypothesisViolated("radial linkage is too small")
    if K < 4 * p * p or K % 2:
        raise HypothesisViolated("too few nested crosses")
    kinds = [twisted] if twisted is not None else [False, True]
    labels = [lab for tw in kinds if (lab := nested_crosses_check(soc, paths, K // 2, tw)) is not None]
    if not labels:
        raise HypothesisViolated("N is not a family of nested crosses")
    if not orthogonality(r, cycles, radial, "radial"):
        raise HypothesisViolated("P is not an orthogonal radial linkage")
    if not coterminal(r, cycles[0], paths, radial):
        raise HypothesisViolated("N is not coterminal with P")

    arc1, _, side = _splits_with_ends(soc, paths)[0]
    # members oriented from their first-segment end, in omega order along that segment
    top = [paths[i] if paths[i].start == side[i] else paths[i].reversed() for i in arc1]
    Ps, Qs = labels[0]
    pair_of = {}
    for a_, b_ in zip(Ps, Qs):
        pair_of[a_.vertex_set] = b_.vertex_set
        pair_of[b_.vertex_set] = a_.vertex_set

    def mate(j: int) -> int:
        return j ^ 1

    if any(pair_of[top[j].vertex_set] != top[mate(j)].vertex_set for j in range(K)):
        raise HypothesisViolated("mates are not adjacent on the first segment")

    by_end = {q.end: k for k, q in enumerate(top)}
    k0 = next(k for k, v in enumerate(soc.omega) if v in by_end and soc.pred(v) not in by_end)
    x2_order = [by_end[soc.omega[(k0 + t) % soc.n]] for t in range(K)]
    want = [mate(j) for j in range(K)]
    if want not in (x2_order, x2_order[::-1]):
        raise HypothesisViolated("mates are not adjacent on the second segment")
    bottom_ends = [top[mate(j)].end for j in range(K)]

    leg_of = {}
    for L in radial:
        for v in L.ends:
            leg_of[v] = L
    try:
        top_legs = [leg_of[q.start] for q in top]
        bot_legs = [leg_of[v] for v in bottom_ends]
    except KeyError:
        raise HypothesisViolated("an end of N is not an end of P") from None

    def f_of(y: int) -> int:  # 0-based cycle index for H* row y (1-based)
        return half + 1 - y if y <= half else p * p + (y - half) - 1

    cols_used = range(1, 2 * n + 2)  # H* columns, 1-based; column 1 is never used

    def leg(j: int, y: int) -> Path:
        return top_legs[j - 1] if y <= half else bot_legs[j - 1]

    cell: dict = {}
    for y in range(1, n + 1):
        C = cycles[f_of(y)]
        for j in cols_used:
            vs = C.vertex_set & leg(j, y).vertex_set
            if not vs:
                raise HypothesisViolated("a leg misses a nest cycle")
            cell[(j, y)] = frozenset(vs)

    # abstract edges of H* with private connectors
    edges: list = []
    for y in range(1, n + 1):
        C = cycles[f_of(y)]
        all_cells = {k: frozenset(C.vertex_set & L.vertex_set) for k, L in enumerate(top_legs + bot_legs)}
        order = _cyclic_cells(C, all_cells)
        blocked = frozenset().union(*all_cells.values())
        side = list(range(K)) if y <= half else list(range(K, 2 * K))
        for j in cols_used:
            if j + 1 > cols_used[-1]:
                break
            a, b = side[j - 1], side[j]
            ia, ib = order.index(a), order.index(b)
            if (ia - ib) % len(order) not in (1, len(order) - 1):
                raise HypothesisViolated("legs are not met in order along a nest cycle")
            edges.append(((j, y), (j + 1, y), _arc_between(C, cell[(j, y)], cell[(j + 1, y)], blocked)))
    for j in cols_used:
        for y in range(1, n):
            if y == half:
                continue
            edges.append(((j, y), (j, y + 1), _between(leg(j, y), cell[(j, y)], cell[(j, y + 1)])))
    for j in cols_used:
        q = top[j - 1]
        jb = mate(j - 1) + 1  # bottom column holding the other end of q
        if jb not in cols_used:
            continue
        A, B = cell[(j, half)], cell[(jb, half + 1)]
        ia = [q.index(v) for v in A if v in q.vertex_set]
        ib = [q.index(v) for v in B if v in q.vertex_set]
        if len(ia) != len(A) or len(ib) != len(B) or max(ia) >= min(ib):
            raise HypothesisViolated("a member of N does not run through its band cells")
        edges.append(((j, half), (jb, half + 1), frozenset(q.vertices[max(ia) + 1 : min(ib)])))

    _, wires = _wire_cells(p)
    own: dict = {}
    for w in range(p):
        for c, y in wires[w]:
            own[(2 * c, y)] = w
            own[(2 * c + 1, y)] = w
    sets = [set() for _ in range(p)]
    for key, w in own.items():
        sets[w] |= cell[key]
    for a, b, conn in edges:
        wa, wb = own.get(a), own.get(b)
        if wa is None or wb is None:
            continue
        sets[min(wa, wb)] |= conn
    model = model_from_branch_sets(g, sets)
    if model is None or not verify_minor_model(g, model):
        raise RoutingFailed("mapped wires do not form a clique model")
    rows = [C.vertices for C in cycles]
    cols = [L.vertices for L in radial]
    b = grasp_binding(model, rows, cols, "nest")
    if b is None:
        raise RoutingFailed("model is not grasped by the nest and P")
    return CliqueResult(g, model, b)


# ---------------------------------------------------------------------------
# clique from handles and crosscaps


@dataclass
class _Leg:
    lo: int  # index range along the path
    hi: int
    clo: int  # position range along the oriented cycle
    chi: int


@dataclass
class _Sector:
    paths: list  # oriented so the entry leg comes first
    entry: list = field(default_factory=list)  # entry[q][a] -> _Leg at level a (0-based)
    exit: list = field(default_factory=list)
    first: list = field(default_factory=list)  # path indices by entry position
    second: list = field(default_factory=list)  # for handles: the later constituent
    handle: bool = False


def clique_from_handles_crosscaps(
    r: DiskRendition,
    nest: Sequence[Cycle],
    transactions: Sequence[Sequence[Path]],
    segments: Sequence[Sequence],
    p: int,
) -> CliqueResult:
    """K_p grasped by the nest and the transactions, from t handles or crosscaps of thickness p.

    Transaction i must have all its ends in segment i; the segments must be disjoint and
    t >= C(p, 2) + p + 1. ``nest[0]`` is the innermost cycle; the first 2p cycles are used.
    """
    if p < 2:
        raise HypothesisViolated("need p >= 2")
    soc = r.society
    g = soc.graph
    t = len(transactions)
    if t < comb(p, 2) + p + 1 or len(segments) != t:
        raise HypothesisViolated("need C(p,2)+p+1 transactions, one per segment")
    if len(nest) < 2 * p:
        raise HypothesisViolated("nest needs 2p cycles")
    levels = list(nest[: 2 * p])
    seg_sets = [frozenset(X) for X in segments]
    for i, X in enumerate(seg_sets):
        if not X or not soc.is_segment(X):
            raise HypothesisViolated(f"segment {i} is not a segment")
        for Y in seg_sets[i + 1 :]:
            if X & Y:
                raise HypothesisViolated("segments overlap")
    used: set = set()
    for i, T in enumerate(transactions):
        T = list(T)
        if not is_transaction(soc, T) or any(v not in seg_sets[i] for q in T for v in q.ends):
            raise HypothesisViolated(f"transaction {i} does not live on its segment")
        crosscap = len(T) == p and is_crosscap(soc, T)
        handle = len(T) == 2 * p and handle_labelling(soc, T) is not None
        if not (crosscap or handle):
            raise HypothesisViolated(f"transaction {i} is neither a crosscap nor a handle of thickness p")
        for q in T:
            if used & q.vertex_set:
                raise HypothesisViolated("transactions are not disjoint")
            used |= q.vertex_set
        if not orthogonality(r, levels, T, "transaction"):
            raise HypothesisViolated(f"transaction {i} is not orthogonal to the nest")

    # sectors in the cyclic order of omega, starting with the first segment
    start = {i: min(soc.pos[v] for v in soc.segment_order(X)[:1]) for i, X in enumerate(seg_sets)}
    base = start[0]
    order = sorted(range(t), key=lambda i: (start[i] - base) % soc.n)
    trans = [list(transactions[i]) for i in order]

    owner = {}
    for j, T in enumerate(trans):
        for k, q in enumerate(T):
            for v in q.vertices:
                owner[v] = (j, k)

    cyc: list = []  # oriented vertex sequences per level
    gap: list = []  # gap[a][j]: free vertex position just before sector j on level a
    for a, C in enumerate(levels):
        vs = list(C.vertices)
        runs = []
        for v in vs:
            o = owner.get(v)
            if o is not None and (not runs or runs[-1] != o[0]):
                runs.append(o[0])
        if len(runs) > 1 and runs[0] == runs[-1]:
            runs.pop()
        k = runs.index(0) if 0 in runs else 0
        rot = runs[k:] + runs[:k]
        if rot == list(range(t)):
            pass
        elif [rot[0]] + rot[1:][::-1] == list(range(t)):
            vs = vs[::-1]
        else:
            raise HypothesisViolated("a nest cycle does not meet the sectors in cyclic order")
        cyc.append(vs)
        m = len(vs)
        row = []
        for j in range(t):
            firsts = [i for i, v in enumerate(vs) if owner.get(v, (None,))[0] == j]
            # first vertex of the sector block, cyclically
            fst = next(i for i in firsts if owner.get(vs[(i - 1) % m], (None,))[0] != j)
            prv = (fst - 1) % m
            if vs[prv] in owner:
                raise HypothesisViolated("no free vertex between two sectors on a nest cycle")
            row.append(prv)
        gap.append(row)
    pos = [{v: i for i, v in enumerate(vs)} for vs in cyc]
    cyc_edges = [frozenset(C.edges) for C in levels]

    def rel(a: int, j: int, i: int) -> int:
        """Position i on level a measured from the gap before sector j."""
        return (i - gap[a][j]) % len(cyc[a])

    def arc(a: int, i: int, k: int) -> set:
        m = len(cyc[a])
        out = set()
        while True:
            out.add(cyc[a][i])
            if i == k:
                return out
            i = (i + 1) % m

    sectors: list[_Sector] = []
    for j, T in enumerate(trans):
        sec = _Sector([])
        for q in T:
            comps = []
            for a in range(2 * p):
                runs: list = []
                for idx, v in enumerate(q.vertices):
                    if v in pos[a]:
                        if runs and runs[-1][-1] == idx - 1 and q.edges[idx - 1] in cyc_edges[a]:
                            runs[-1].append(idx)
                        else:
                            runs.append([idx])
                if len(runs) != 2:
                    raise HypothesisViolated("a path does not meet a cycle in two pieces")
                legs = []
                for rr in runs:
                    cp = sorted(rel(a, j, pos[a][q.vertices[x]]) for x in rr)
                    legs.append(_Leg(rr[0], rr[-1], cp[0], cp[-1]))
                comps.append(legs)
            # orient q so its first leg along the cycle is met first along q
            if comps[0][0].clo > comps[0][1].clo:
                q = q.reversed()
                L = len(q.vertices)
                comps = [
                    [_Leg(L - 1 - b.hi, L - 1 - b.lo, b.clo, b.chi) for b in (pair[1], pair[0])]
                    for pair in comps
                ]
            for a in range(2 * p):
                if comps[a][0].clo > comps[a][1].clo:
                    raise HypothesisViolated("a path switches legs between nest cycles")
            sec.paths.append(q)
            sec.entry.append([c[0] for c in comps])
            sec.exit.append([c[1] for c in comps])
        for a in range(2 * p):
            if any(sec.entry[k][a].lo > sec.entry[k][a - 1].lo for k in range(len(T)) if a):
                raise HypothesisViolated("a path does not run inward on its first leg")
        ent = sorted(range(len(T)), key=lambda k: sec.entry[k][0].clo)
        ext = sorted(range(len(T)), key=lambda k: sec.exit[k][0].clo)
        if max(sec.entry[k][0].chi for k in ent) >= min(sec.exit[k][0].clo for k in ext):
            raise HypothesisViolated("legs of a sector interleave")
        if len(T) == p:
            if ent != ext:
                raise HypothesisViolated("crosscap legs are not in the same order")
            sec.first = ent
        else:
            first, second = ent[:p], ent[p:]
            if ext != first[::-1] + second[::-1]:
                raise HypothesisViolated("handle legs do not follow the handle pattern")
            sec.first, sec.second, sec.handle = first, second, True
        sectors.append(sec)

    def enter(a: int, j: int, k: int, b: int) -> set:
        """Track on level a in sector j dives along path k and comes back out on level b."""
        sec = sectors[j]
        q = sec.paths[k]
        e, x = sec.entry[k][a], sec.exit[k][b]
        g0 = gap[a][j]
        m = len(cyc[a])
        out = arc(a, g0, (g0 + e.chi) % m)
        out |= set(q.vertices[e.lo : x.hi + 1])
        gb, mb = gap[b][j], len(cyc[b])
        out |= arc(b, (gb + x.clo) % mb, gap[b][(j + 1) % t])
        return out

    def through(a: int, j: int) -> set:
        return arc(a, gap[a][j], gap[a][(j + 1) % t])

    def exit_link(j: int, k: int, lo_level: int) -> set:
        """Interior of path k between its exit pieces on levels lo_level and lo_level + 1."""
        sec = sectors[j]
        q = sec.paths[k]
        return set(q.vertices[sec.exit[k][lo_level].hi + 1 : sec.exit[k][lo_level + 1].lo])

    s0 = p
    level = {w: w for w in range(p)}  # track w sits on level w (0-based) at sector s0
    alive = set(range(p))
    sets = [set() for _ in range(p)]
    linked: set = set()
    for w in range(p):
        sets[w] |= through(w, s0)
    sec = sectors[s0]
    k0 = sec.first[0]
    q = sec.paths[k0]
    link = set(q.vertices[sec.entry[k0][1].hi + 1 : sec.entry[k0][0].lo])
    sets[0] |= link
    linked.add((0, 1))
    trace = [("link", 1)]
    target = comb(p, 2)

    def covered(w: int) -> bool:
        return all((min(w, u), max(w, u)) in linked for u in range(p) if u != w)

    j = s0
    while len(linked) < target:
        j += 1
        if j >= t:
            raise RoutingFailed("ran out of sectors")
        sec = sectors[j]
        open_ = sorted((level[w], w) for w in alive if not covered(w))
        if not open_:
            raise RoutingFailed("no uncovered track left")
        _, tj = open_[0]
        partners = sorted((level[u], u) for u in alive if u != tj and (min(tj, u), max(tj, u)) not in linked)
        if not partners:
            raise RoutingFailed("no partner for an uncovered track")
        _, tp = partners[0]
        lo, hi = sorted((level[tj], level[tp]))
        at_level = {level[w]: w for w in alive}
        new_level = {}
        for lv, w in sorted(at_level.items()):
            if lv < lo:
                if not covered(w):
                    raise RoutingFailed("an uncovered track would stop")
                alive.discard(w)
            elif lv >= hi:
                sets[w] |= through(lv, j)
                new_level[w] = lv
        if not sec.handle:
            for a in range(lo, hi):
                w = at_level[a]
                b = hi - 1 - (a - lo)
                sets[w] |= enter(a, j, sec.first[a - lo], b)
                new_level[w] = b
            spare = sec.first[hi - lo]
        else:
            w = at_level[lo]
            sets[w] |= enter(lo, j, sec.first[0], hi - 1)
            new_level[w] = hi - 1
            for a in range(lo + 1, hi):
                w = at_level[a]
                sets[w] |= enter(a, j, sec.second[a - lo - 1], a - 1)
                new_level[w] = a - 1
            spare = sec.second[hi - lo - 1]
        sets[min(tj, tp)] |= exit_link(j, spare, hi - 1)
        level = new_level
        linked.add((min(tj, tp), max(tj, tp)))
        trace.append(("link", len(linked)))

    # grasp: branch w reaches back to sector w and takes the outer arcs there
    for w in range(p):
        sec = sectors[w]
        k = max(range(len(sec.paths)), key=lambda k: sec.exit[k][w].clo)
        q = sec.paths[k]
        m = len(cyc[w])
        sets[w] |= arc(w, (gap[w][w] + sec.exit[k][w].clo) % m, gap[w][s0])
        sets[w] |= set(q.vertices[sec.exit[k][w].lo : sec.exit[k][2 * p - 1].hi + 1])
        for a in range(p, 2 * p):
            sets[w] |= arc(a, gap[a][w], (gap[a][w + 1] - 1) % len(cyc[a]))

    model = model_from_branch_sets(g, sets)
    if model is None or not verify_minor_model(g, model):
        raise RoutingFailed("routed tracks do not form a clique model")
    rows = [C.vertices for C in nest]
    cols = [q.vertices for T in trans for q in T]
    b = grasp_binding(model, rows, cols, "nest")
    if b is None:
        raise RoutingFailed("model is not grasped by the nest and the transactions")
    return CliqueResult(g, model, b, tuple(trace))


__all__ = [
    "CliqueResult",
    "HypothesisViolated",
    "Mesh",
    "RTooSmall",
    "RoutingFailed",
    "Wall",
    "certificate_json",
    "clique_from_handles_crosscaps",
    "clique_from_nested_crosses",
    "elementary_wall",
    "far_from_boundary",
    "grasp_binding",
    "grasped_binding_check",
    "h1",
    "h1_clique",
    "vicinity",
]
