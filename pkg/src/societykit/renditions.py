"""Combinatorial renditions of societies in a disk.

A rendition is a set of cells. Each cell owns a subgraph sigma and a cyclic sequence of
boundary nodes. Geometry is replaced by a *skeleton*: a plane multigraph with one vertex
per node, one port per (cell, boundary slot), an attachment edge from each port to its
node, a rim cycle through the ports of each cell with at least two nodes, and a frame
cycle through the society vertices in order. A rendition is valid when the skeleton
rotation is plane, the frame bounds a face (the outside of the disk) and every rim
bounds a face (the inside of its cell).

Skeleton vertices are ``("n", v)`` and ``("p", cell, i)``; skeleton edges are
``("a", cell, i)`` (port, node), ``("r", cell, i)`` (port i to port i+1) and ``("f", i)``
(omega[i] to omega[i+1]).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence

from .graph_core import Cycle, Graph, Path, sort_ids, vkey
from .planarity import Embedding, _nx_rotation, faces, framed_embedding, is_plane
from .society import Society


class VortexEdgeUsed(ValueError):
    pass


class NotGrounded(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class NotUnexposed(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    id: int
    boundary: tuple
    vortex: bool
    vertices: frozenset
    edges: frozenset

    @property
    def k(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class DiskRendition:
    society: Society
    cells: tuple
    tie_breaker: dict
    rotation: dict
    c0: int | None = None

    @cached_property
    def cell(self) -> dict:
        return {c.id: c for c in self.cells}

    @cached_property
    def nodes(self) -> frozenset:
        return frozenset(v for c in self.cells for v in c.boundary)

    @cached_property
    def cell_of_edge(self) -> dict:
        out = {}
        for c in self.cells:
            for e in c.edges:
                out.setdefault(e, c.id)
        return out

    @cached_property
    def skeleton_ends(self) -> dict:
        return skeleton_ends(self.society.omega, self.cells)

    @cached_property
    def embedding(self) -> Embedding:
        n = self.society.n
        return Embedding(self.rotation, self.skeleton_ends, (("f", 0), 0) if n else None)

    @cached_property
    def _faces(self) -> tuple[list, dict]:
        fs = faces(self.embedding)
        where = {d: i for i, f in enumerate(fs) for d in f}
        return fs, where

    def vortices(self) -> list[Cell]:
        return [c for c in self.cells if c.vortex]


@dataclass(frozen=True)
class CylindricalRendition(DiskRendition):
    """A disk rendition in which only the designated cell ``c0`` may be a vortex."""


@dataclass(frozen=True)
class TrackArc:
    cell: int
    start: object
    end: object
    skeleton_edges: tuple


@dataclass(frozen=True)
class Track:
    arcs: tuple
    closed: bool

    @property
    def nodes(self) -> tuple:
        seq = [a.start for a in self.arcs]
        if not self.closed and self.arcs:
            seq.append(self.arcs[-1].end)
        return tuple(seq)

    @property
    def skeleton_edges(self) -> frozenset:
        return frozenset(e for a in self.arcs for e in a.skeleton_edges)


# ---------------------------------------------------------------------------
# skeleton


def skeleton_ends(omega: Sequence, cells: Iterable[Cell]) -> dict:
    ends = {}
    for c in cells:
        k = c.k
        for i, v in enumerate(c.boundary):
            ends[("a", c.id, i)] = (("p", c.id, i), ("n", v))
        if k >= 2:
            for i in range(k):
                ends[("r", c.id, i)] = (("p", c.id, i), ("p", c.id, (i + 1) % k))
    n = len(omega)
    for i in range(n):
        ends[("f", i)] = (("n", omega[i]), ("n", omega[(i + 1) % n]))
    return ends


def _rim_face(r: DiskRendition, c: Cell) -> int | None:
    fs, where = r._faces
    rims = {("r", c.id, i) for i in range(c.k)}
    for end in (0, 1):
        f = where.get((("r", c.id, 0), end))
        if f is not None and len(fs[f]) == c.k and {d[0] for d in fs[f]} == rims:
            return f
    return None


def validate_rendition(soc: Society, r: DiskRendition) -> list[str]:
    """Violations as ``"<axiom>: detail"`` strings; empty when the rendition is valid."""
    out: list[str] = []
    g = soc.graph
    ids = [c.id for c in r.cells]
    if len(set(ids)) != len(ids):
        out.append("D-cell-ids: duplicate cell id")
    if r.society.omega != soc.omega or r.society.graph.ends != g.ends:
        out.append("D-society: rendition is for a different society")
    N = r.nodes
    for c in r.cells:
        if len(set(c.boundary)) != c.k:
            out.append(f"D-cell-size: cell {c.id} repeats a boundary node")
        if not c.vortex and c.k > 3:
            out.append(f"D-cell-size: cell {c.id} has {c.k} nodes but is not a vortex")
        if not set(c.boundary) <= c.vertices:
            out.append(f"D-node-boundary: cell {c.id} misses a boundary node in sigma")
        stray = (c.vertices & N) - set(c.boundary)
        if stray:
            out.append(f"D-node-boundary: cell {c.id} contains non-boundary nodes {sort_ids(stray)!r}")
        for e in c.edges:
            if e not in g.ends:
                out.append(f"D-edge-partition: cell {c.id} has unknown edge {e!r}")
            elif not set(g.ends[e]) <= c.vertices:
                out.append(f"D-edge-partition: edge {e!r} leaves cell {c.id}")
        if not c.vertices <= g.vertices:
            out.append(f"D-vertex-cover: cell {c.id} has unknown vertices")
    seen: dict = {}
    for c in r.cells:
        for e in c.edges:
            if e in seen:
                out.append(f"D-edge-partition: edge {e!r} in cells {seen[e]} and {c.id}")
            seen[e] = c.id
    missing = set(g.ends) - set(seen)
    if missing:
        out.append(f"D-edge-partition: edges {sort_ids(missing)!r} in no cell")
    owner: dict = {}
    for c in r.cells:
        for v in c.vertices:
            if v in owner and v not in N:
                out.append(f"D-vertex-overlap: vertex {v!r} shared by cells {owner[v]} and {c.id}")
            owner.setdefault(v, c.id)
    if set(owner) != set(g.vertices):
        out.append("D-vertex-cover: some vertex lies in no cell")
    if not soc.omega_set <= N:
        out.append("D-omega-nodes: an omega vertex is not a node")
    for c in r.cells:
        if c.k == 2 and not c.vortex and r.tie_breaker.get(c.id) not in (0, 1):
            out.append(f"D-tie-breaker: cell {c.id} lacks a tie-breaker side")
    if isinstance(r, CylindricalRendition) or r.c0 is not None:
        if r.c0 not in r.cell:
            out.append("D-cylindrical: designated cell missing")
        for c in r.cells:
            if c.vortex and c.id != r.c0:
                out.append(f"D-cylindrical: cell {c.id} is a vortex other than c0")
    if out:
        return out
    out += _skeleton_violations(r)
    return out


def _skeleton_violations(r: DiskRendition) -> list[str]:
    ends = r.skeleton_ends
    verts = {x for uv in ends.values() for x in uv} | {("n", v) for v in r.nodes}
    if set(r.rotation) != verts:
        return ["D-skeleton: rotation is not over the skeleton vertices"]
    emb = r.embedding
    if not is_plane(emb):
        return ["D-skeleton: rotation is not a plane embedding of the skeleton"]
    out = []
    n = r.society.n
    if n:
        if emb.face_of((("f", 0), 0)) != [(("f", i), 0) for i in range(n)]:
            out.append("D-outer-face: the frame does not bound a face")
    for c in r.cells:
        if c.k >= 2 and _rim_face(r, c) is None:
            out.append(f"D-rim-face: rim of cell {c.id} does not bound a face")
    # every skeleton component must reach the frame
    if n:
        adj: dict = {}
        for a, b in ends.values():
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        start = ("n", r.society.omega[0])
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != verts:
            out.append("D-skeleton: a cell is not connected to the frame")
    return out


# ---------------------------------------------------------------------------
# constructions


def _port_rotation_for_edge_cell(cid: int) -> dict:
    """Port rotations for a 2-node cell drawn as a thick edge with rim face (r0, r1)."""
    return {
        ("p", cid, 0): ((("a", cid, 0), 0), (("r", cid, 1), 1), (("r", cid, 0), 0)),
        ("p", cid, 1): ((("a", cid, 1), 0), (("r", cid, 0), 1), (("r", cid, 1), 0)),
    }


def _collapse_small_cuts(core: Graph, omega_set: frozenset) -> tuple[Graph, dict]:
    """Replace every region cut off from Omega by at most three vertices with a hub.

    A hub is adjacent to the separator only and stands for the region; the returned map
    sends each hub to the (vertices, edges) it absorbed, nested hubs merged in. Swapping a
    region for a star keeps crossing pairs of Omega-paths intact in both directions, since
    at most one of two disjoint paths can pass through a separator of order three.
    """
    from .graph_core import disjoint_paths

    parts: dict = {}
    made = 0
    changed = True
    while changed:
        changed = False
        for v in sort_ids(core.vertices - omega_set):
            if v not in core.vertices:
                continue
            nbrs = frozenset(core.neighbors(v)) - {v}
            rest = core.remove_vertices([v])
            paths, sep = disjoint_paths(rest, omega_set, nbrs)
            if len(paths) > 3:
                continue
            # everything behind the cut, so regions sharing a separator share one cell
            region = {v} | (sep.B - sep.A)
            if len(region) < 2 or region & omega_set or any(x in parts for x in sep.A & sep.B):
                continue
            S = frozenset(y for x in region for y in core.neighbors(x)) - region
            hub = ("\x00cell", made)
            made += 1
            verts, edges = set(), set()
            for x in region:
                if x in parts:
                    pv, pe = parts.pop(x)
                    verts |= pv
                    edges |= pe
                else:
                    verts.add(x)
            for e, (x, y) in core.edges:
                if (x in region or y in region) and not (isinstance(e, tuple) and e[:1] == ("\x00hub",)):
                    edges.add(e)
            parts[hub] = (frozenset(verts), frozenset(edges))
            kept = [(e, uv) for e, uv in core.edges if not (set(uv) & region)]
            kept += [(("\x00hub", made, i), (hub, s)) for i, s in enumerate(sort_ids(S))]
            core = Graph((core.vertices - region) | {hub}, tuple(kept))
            changed = True
    return core, parts


def rural_rendition(soc: Society) -> DiskRendition | None:
    """A vortex-free rendition, or None if none exists.

    Every edge outside the collapsed regions becomes a two-node cell; each region cut off
    by at most three vertices becomes one cell bounded by its separator.
    """
    g = soc.graph
    loops = [e for e, (u, v) in g.edges if u == v]
    anchored = set()
    for comp in g.components():
        if comp & soc.omega_set:
            anchored |= comp
    core_edges = tuple((e, uv) for e, uv in g.edges if uv[0] != uv[1] and uv[0] in anchored)
    core = Graph(frozenset(anchored), core_edges)
    parts: dict = {}
    emb = framed_embedding(core, soc.omega)
    if emb is None:
        core, parts = _collapse_small_cuts(core, soc.omega_set)
        emb = framed_embedding(core, soc.omega)
        if emb is None:
            return None
    flip_cells: set = set()
    for _ in range(2):
        r = _assemble_rural(soc, g, core, emb, parts, loops, anchored, flip_cells)
        bad = [c.id for c in r.cells if c.k == 3 and _rim_face(r, c) is None]
        if not bad:
            return r
        flip_cells ^= set(bad)
    raise AssertionError("three-node cell orientation")  # pragma: no cover


def _assemble_rural(soc, g, core, emb, parts, loops, anchored, flip_cells) -> DiskRendition:
    cells: list[Cell] = []
    rotation: dict = {}
    cid_of_edge = {}
    slot: dict = {}  # hub edge -> (cell id, boundary index)
    for e in sort_ids(dict(core.edges)):
        u, v = core.ends[e]
        if u in parts or v in parts:
            continue
        cid = len(cells)
        cid_of_edge[e] = cid
        cells.append(Cell(cid, (u, v), False, frozenset((u, v)), frozenset([e])))
        rotation.update(_port_rotation_for_edge_cell(cid))
    for hub in sort_ids(parts):
        verts, edges = parts[hub]
        cid = len(cells)
        darts = [d for d in emb.rotation[hub]]
        order = [core.other_end(d[0], hub) for d in darts]
        if cid in flip_cells:
            order = order[::-1]
        k = len(order)
        for d in darts:
            slot[d[0]] = (cid, order.index(core.other_end(d[0], hub)))
        cells.append(Cell(cid, tuple(order), False, frozenset(verts) | frozenset(order), frozenset(edges)))
        if k == 1:
            rotation[("p", cid, 0)] = ((("a", cid, 0), 0),)
        elif k == 2:
            rotation.update(_port_rotation_for_edge_cell(cid))
        else:
            for i in range(k):
                rotation[("p", cid, i)] = ((("a", cid, i), 0), (("r", cid, i), 0), (("r", cid, (i - 1) % k), 1))
    touched = {v for c in cells for v in c.boundary}
    for v in sort_ids(soc.omega_set - touched):
        cid = len(cells)
        cells.append(Cell(cid, (v,), False, frozenset([v]), frozenset()))
        rotation[("p", cid, 0)] = ((("a", cid, 0), 0),)
    node_cell1 = {}
    for c in cells:
        if c.k == 1 and c.boundary[0] in soc.omega_set and c.boundary[0] not in touched:
            node_cell1[c.boundary[0]] = c.id
    for v in sort_ids({v for c in cells for v in c.boundary}):
        darts = []
        for d in emb.rotation.get(v, ()):
            if isinstance(d[0], tuple) and d[0][0] == "frame":
                darts.append((("f", d[0][1]), d[1]))
            elif d[0] in slot:
                cid, i = slot[d[0]]
                darts.append((("a", cid, i), 1))
            else:
                darts.append((("a", cid_of_edge[d[0]], d[1]), 1))
        if v in node_cell1:
            # slot the pendant port right after the outgoing frame dart
            k = next(j for j, d in enumerate(darts) if d[0][0] == "f" and d[1] == 0)
            darts.insert(k + 1, (("a", node_cell1[v], 0), 1))
        rotation[("n", v)] = tuple(darts)
    # loops join a cell at their vertex; floating parts join the first anchored cell
    cells = {c.id: c for c in cells}
    for e in loops:
        u = g.ends[e][0]
        if u not in anchored or any(e in c.edges for c in cells.values()):
            continue
        host = min(c.id for c in cells.values() if u in c.vertices)
        c = cells[host]
        cells[host] = replace(c, edges=c.edges | {e})
    floating_v = g.vertices - anchored
    floating_e = {e for e, (u, _) in g.edges if u in floating_v}
    if floating_v:
        if cells:
            host = min(cells)
            c = cells[host]
            cells[host] = replace(c, vertices=c.vertices | floating_v, edges=c.edges | floating_e)
        else:
            cells[0] = Cell(0, (), False, frozenset(floating_v), frozenset(floating_e))
    cl = tuple(cells[i] for i in sorted(cells))
    tb = {c.id: 0 for c in cl if c.k == 2}
    return DiskRendition(soc, cl, tb, rotation)


def embed_cells(omega: Sequence, cells: Sequence[Cell]) -> dict | None:
    """A skeleton rotation realising ``cells`` in a disk with boundary ``omega``, or None.

    Each rim of at least two ports gets a hub so the rim can bound a face; the frame
    gets a hub outside. Port rotations are then rebuilt so that each attachment sits
    outside its rim, and the result is checked.
    """
    ends = skeleton_ends(omega, cells)
    verts = {x for uv in ends.values() for x in uv} | {("n", v) for c in cells for v in c.boundary}
    aug = [(e, uv) for e, uv in ends.items() if e[0] != "f"]
    n = len(omega)
    for c in cells:
        if c.k >= 2:
            for i in range(c.k):
                aug.append((("h", c.id, i), (("hub", c.id), ("p", c.id, i))))
    for i in range(n):
        aug.append((("fh", i), (("frame-hub",), ("n", omega[i]))))
        if n >= 3:
            aug.append((("fr", i), (("n", omega[i]), ("n", omega[(i + 1) % n]))))
    extra = [("hub", c.id) for c in cells if c.k >= 2] + ([("frame-hub",)] if n else [])
    vlist = sorted(verts, key=vkey) + extra
    rot = _nx_rotation(vlist, sorted(aug, key=lambda ev: vkey(ev[0])))
    if rot is None:
        return None
    pos = {v: i for i, v in enumerate(omega)}
    for mirror in (False, True):
        new = {}
        for x in sorted(verts, key=vkey):
            rr = list(rot[x][::-1] if mirror else rot[x])
            if x[0] == "n":
                out = []
                for d in rr:
                    if d[0][0] == "fh":
                        i = pos[x[1]]
                        out += [(("f", (i - 1) % n), 1), (("f", i), 0)]
                    elif d[0][0] in ("a",):
                        out.append(d)
                new[x] = tuple(out)
            else:
                cid, i = x[1], x[2]
                att = (("a", cid, i), 0)
                c = next(cc for cc in cells if cc.id == cid)
                if c.k < 2:
                    new[x] = (att,)
                    continue
                keep = [d for d in rr if d[0][0] in ("r", "h")]
                # drop the hub and put the attachment in the gap facing away from it
                k = [d[0][0] for d in keep].index("h")
                keep = keep[k + 1 :] + keep[:k]
                new[x] = (keep[0], att, keep[1])
        shell = Graph(frozenset(x[1] for x in verts if x[0] == "n") | set(omega), ())
        cand = DiskRendition(Society(shell, tuple(omega)), tuple(cells), {}, new)
        if not _skeleton_violations(cand):
            return new
    return None


def single_vortex_rendition(soc: Society) -> CylindricalRendition:
    """One vortex cell holding all of G with omega as its boundary."""
    g = soc.graph
    c = Cell(0, soc.omega, True, frozenset(g.vertices) | soc.omega_set, frozenset(g.ends))
    if soc.n == 0:
        rot = {}
    else:
        rot = embed_cells(soc.omega, [c])
        if rot is None:  # pragma: no cover - a wheel with a frame is always planar
            raise AssertionError("single vortex cell did not embed")
    return CylindricalRendition(soc, (c,), {}, rot, 0)


def glue_renditions(soc: Society, cells: Sequence[Cell], c0: int | None) -> DiskRendition | None:
    """Rendition of ``soc`` from an explicit cell list; the skeleton is recomputed."""
    rot = embed_cells(soc.omega, cells)
    if rot is None:
        return None
    tb = {c.id: 0 for c in cells if c.k == 2 and not c.vortex}
    cls = CylindricalRendition if c0 is not None else DiskRendition
    return cls(soc, tuple(cells), tb, rot, c0)


def vortex_society(r: DiskRendition, cid: int) -> Society:
    c = r.cell[cid]
    g = r.society.graph
    sub = Graph(frozenset(c.vertices), tuple((e, g.ends[e]) for e in sort_ids(c.edges)))
    return Society(sub, c.boundary)


# ---------------------------------------------------------------------------
# grounded paths and tracks


def _edges_of(P) -> tuple:
    return tuple(P.edges)


def _check_vortex(r: DiskRendition, P) -> None:
    for e in P.edges:
        c = r.cell_of_edge.get(e)
        if c is not None and r.cell[c].vortex:
            raise VortexEdgeUsed(f"edge {e!r} lies in vortex cell {c}")


def is_grounded(r: DiskRendition, P) -> bool:
    _check_vortex(r, P)
    if isinstance(P, Cycle):
        return len({r.cell_of_edge[e] for e in P.edges}) >= 2
    return P.length >= 1 and P.start in r.nodes and P.end in r.nodes


def _runs(r: DiskRendition, P) -> list[tuple[int, object, object]]:
    """Maximal same-cell stretches as (cell, first vertex, last vertex)."""
    verts = list(P.vertices)
    edges = list(P.edges)
    cells = [r.cell_of_edge[e] for e in edges]
    if isinstance(P, Cycle):
        m = len(edges)
        s = next(i for i in range(m) if cells[i] != cells[i - 1])
        verts = verts[s:] + verts[:s]
        edges = edges[s:] + edges[:s]
        cells = cells[s:] + cells[:s]
        verts = verts + [verts[0]]
    out = []
    i = 0
    while i < len(edges):
        j = i
        while j + 1 < len(edges) and cells[j + 1] == cells[i]:
            j += 1
        out.append((cells[i], verts[i], verts[j + 1]))
        i = j + 1
    return out


def _arc_edges(r: DiskRendition, cid: int, x, y) -> tuple:
    c = r.cell[cid]
    i, j = c.boundary.index(x), c.boundary.index(y)
    if c.k == 2:
        rim = [("r", cid, r.tie_breaker.get(cid, 0))]
    elif c.k == 3:
        rim = [("r", cid, i)] if j == (i + 1) % 3 else [("r", cid, j)]
    else:  # pragma: no cover - grounded runs never use vortex cells
        raise NotGrounded(f"cell {cid} cannot carry a track")
    return (("a", cid, i),) + tuple(rim) + (("a", cid, j),)


def track(r: DiskRendition, P) -> Track:
    if not is_grounded(r, P):
        raise NotGrounded("path or cycle is not grounded")
    arcs = tuple(TrackArc(c, x, y, _arc_edges(r, c, x, y)) for c, x, y in _runs(r, P))
    return Track(arcs, isinstance(P, Cycle))


def _face_components(r: DiskRendition, walls: frozenset, block_outer: bool) -> list[int]:
    """Component label per face after cutting the skeleton along ``walls``."""
    fs, where = r._faces
    outer = where.get((("f", 0), 0)) if r.society.n else None
    parent = list(range(len(fs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in r.skeleton_ends:
        if e in walls:
            continue
        a, b = where[(e, 0)], where[(e, 1)]
        if block_outer and outer in (a, b):
            continue
        parent[find(a)] = find(b)
    return [find(i) for i in range(len(fs))]


def cell_face(r: DiskRendition, c: Cell) -> int | None:
    """The skeleton face standing for the interior of ``c`` (None for node-less cells)."""
    if c.k >= 2:
        return _rim_face(r, c)
    if c.k == 1:
        return r._faces[1][(("a", c.id, 0), 0)]
    return None


def _outer_face(r: DiskRendition) -> int | None:
    if not r.society.n:
        return None
    return r._faces[1][(("f", 0), 0)]


def inside_cells(r: DiskRendition, tr: Track) -> frozenset:
    """Cells on the side of a closed track away from the frame (or containing c0 when Omega is empty)."""
    if not tr.closed:
        raise ValueError("inside of an open track is undefined")
    comp = _face_components(r, tr.skeleton_edges, False)
    out_face = _outer_face(r)
    if out_face is not None:
        outside = comp[out_face]
        return frozenset(
            c.id for c in r.cells if cell_face(r, c) is not None and comp[cell_face(r, c)] != outside
        )
    if r.c0 is not None and cell_face(r, r.cell[r.c0]) is not None:
        inside = comp[cell_face(r, r.cell[r.c0])]
        return frozenset(c.id for c in r.cells if cell_face(r, c) is not None and comp[cell_face(r, c)] == inside)
    raise NotGrounded("no reference face to orient the track")


def side_cells(r: DiskRendition, tr: Track, seed_dart) -> frozenset:
    """Cells on the same side of an open track as the face holding ``seed_dart``."""
    comp = _face_components(r, tr.skeleton_edges, True)
    fs, where = r._faces
    target = comp[where[seed_dart]]
    return frozenset(
        c.id for c in r.cells if cell_face(r, c) is not None and comp[cell_face(r, c)] == target
    )


def _union_graph(r: DiskRendition, cids: Iterable[int], extra_vertices: Iterable) -> Graph:
    g = r.society.graph
    vs = set(extra_vertices)
    es = set()
    for cid in cids:
        vs |= r.cell[cid].vertices
        es |= r.cell[cid].edges
    return Graph(frozenset(vs), tuple((e, g.ends[e]) for e in sort_ids(es)))


def _inner_order(r: DiskRendition, tr: Track, inside: frozenset) -> tuple:
    """Track nodes in the orientation that keeps the inside on the same hand as the disk."""
    fs, where = r._faces
    comp = _face_components(r, tr.skeleton_edges, False)
    out_face = _outer_face(r)
    first = tr.arcs[0].skeleton_edges[0]  # attachment edge, port -> node
    forward = (first, 1)  # dart at the start node heading into the cell
    if out_face is not None:
        is_inside = comp[where[forward]] != comp[out_face]
    else:
        c0f = cell_face(r, r.cell[r.c0])
        is_inside = comp[where[forward]] == comp[c0f]
    nodes = list(tr.nodes)
    if is_inside:
        nodes = [nodes[0]] + nodes[:0:-1]
    return tuple(nodes)


def inner_outer(r: DiskRendition, C: Cycle) -> tuple[Graph, Graph, Society]:
    tr = track(r, C)
    inside = inside_cells(r, tr)
    nodes = tr.nodes
    inner = _union_graph(r, inside, nodes)
    outer = _union_graph(r, [c.id for c in r.cells if c.id not in inside], nodes)
    return inner, outer, Society(inner, _inner_order(r, tr, inside))


def verify_nest(r: DiskRendition, cycles: Sequence[Cycle]) -> bool:
    if r.c0 is None:
        return False
    used: set = set()
    prev = None
    for C in cycles:
        if not C.is_valid_in(r.society.graph) or used & C.vertex_set:
            return False
        used |= C.vertex_set
        try:
            if not is_grounded(r, C):
                return False
        except VortexEdgeUsed:
            return False
        ins = inside_cells(r, track(r, C))
        if r.c0 not in ins:
            return False
        if prev is not None and not prev <= ins:
            return False
        prev = ins
    return True


def restrict_to_disk(r: DiskRendition, C: Cycle) -> DiskRendition:
    """The rendition of the inner society of C made of the cells inside its track."""
    tr = track(r, C)
    inside = inside_cells(r, tr)
    inner, _, isoc = inner_outer(r, C)
    omega = isoc.omega
    n = len(omega)
    pos = {v: i for i, v in enumerate(omega)}
    fs, where = r._faces
    comp = _face_components(r, tr.skeleton_edges, False)
    if _outer_face(r) is not None:
        out_label = comp[_outer_face(r)]
        is_out = lambda f: comp[f] == out_label
    else:
        in_label = comp[cell_face(r, r.cell[r.c0])]
        is_out = lambda f: comp[f] != in_label
    cells = [r.cell[c] for c in sorted(inside)]
    rotation = {}
    for c in cells:
        for i in range(c.k):
            rotation[("p", c.id, i)] = r.rotation[("p", c.id, i)]
    next_id = max((c.id for c in r.cells), default=-1) + 1
    covered = {v for c in cells for v in c.boundary}
    track_nodes = set(omega)
    for v in sort_ids(covered - track_nodes):
        rotation[("n", v)] = r.rotation[("n", v)]
    for v in omega:
        i = pos[v]
        frame = [(("f", (i - 1) % n), 1), (("f", i), 0)]
        if v not in covered:
            cid = next_id
            next_id += 1
            cells.append(Cell(cid, (v,), False, frozenset([v]), frozenset()))
            rotation[("p", cid, 0)] = ((("a", cid, 0), 0),)
            rotation[("n", v)] = tuple(frame + [(("a", cid, 0), 1)])
            continue
        old = list(r.rotation[("n", v)])
        m = len(old)
        angle_out = [is_out(where[old[(j + 1) % m]]) for j in range(m)]
        start = 0
        for j in range(m):
            if angle_out[j] and not angle_out[(j + 1) % m]:
                start = (j + 1) % m
                break
        ordered = old[start:] + old[:start]
        keep = [d for d in ordered if d[0][0] == "a" and d[0][1] in inside]
        rotation[("n", v)] = tuple(frame + keep)
    tb = {c.id: r.tie_breaker.get(c.id, 0) for c in cells if c.k == 2 and not c.vortex}
    c0 = r.c0 if r.c0 in inside else None
    cls = CylindricalRendition if c0 is not None else DiskRendition
    out = cls(isoc, tuple(cells), tb, rotation, c0)
    if validate_rendition(isoc, out):
        rot = embed_cells(omega, cells)
        if rot is None:  # pragma: no cover
            raise AssertionError("restriction failed to embed")
        out = cls(isoc, tuple(cells), tb, rot, c0)
    return out


def _meet_components(C: Cycle, P) -> int:
    """Number of components of the graph C ∩ P."""
    vs = C.vertex_set & frozenset(P.vertices)
    es = set(C.edges) & set(P.edges)
    if not vs:
        return 0
    parent = {v: v for v in vs}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    n = len(C.vertices)
    ends = {C.edges[i]: (C.vertices[i], C.vertices[(i + 1) % n]) for i in range(n)}
    for e in es:
        a, b = ends[e]
        parent[find(a)] = find(b)
    return len({find(v) for v in vs})


def orthogonality(r: DiskRendition, nest: Sequence[Cycle], L: Sequence[Path], mode: str = "radial") -> bool:
    want = {"radial": 1, "transaction": 2}[mode]
    for C in nest:
        for P in L:
            if _meet_components(C, P) != want:
                return False
    if mode == "radial" and nest:
        inner, _, _ = inner_outer(r, nest[0])
        om = r.society.omega_set
        for P in L:
            a, b = P.ends
            if b in om and a not in om:
                a, b = b, a
            if a not in om or b not in inner.vertices:
                return False
            if sum(v in om for v in P.vertices) != 1:
                return False
    return True


def restrict_transaction(r: DiskRendition, nest: Sequence[Cycle], T: Iterable[Path], i: int):
    """Per member, the Omega'-subpath through c0 in the inner society of C_i (1-based)."""
    from .transactions import NotATransaction, Transaction, make_transaction

    if i < 2 or i > len(nest):
        raise ValueError("need 2 <= i <= len(nest)")
    paths = list(T)
    for P in paths:
        if any(_meet_components(C, P) != 2 for C in nest):
            raise NotOrthogonal("a member does not meet every nest cycle in two components")
        c0_edges = r.cell[r.c0].edges if r.c0 is not None else frozenset()
        if not (set(P.edges) & c0_edges):
            raise NotUnexposed("a member has no edge in the vortex cell")
    _, _, isoc = inner_outer(r, nest[i - 1])
    om = isoc.omega_set
    c0_edges = r.cell[r.c0].edges
    out = []
    for P in paths:
        idx = [k for k, v in enumerate(P.vertices) if v in om]
        found = []
        for a, b in zip(idx, idx[1:]):
            if set(P.edges[a:b]) & c0_edges:
                found.append(Path(P.vertices[a : b + 1], P.edges[a:b]))
        if len(found) != 1:
            raise NotOrthogonal("no unique inner subpath through the vortex")
        out.append(found[0])
    try:
        return make_transaction(isoc, out)
    except NotATransaction:
        return Transaction(tuple(out))


def coterminal(r: DiskRendition, C: Cycle, Q: Sequence[Path], P: Sequence[Path]) -> bool:
    """Some P' ⊆ P meets the outer graph of C exactly as Q does."""
    _, H, _ = inner_outer(r, C)
    hv, he = H.vertices, set(H.ends)

    def meet(paths):
        vs = frozenset(v for p in paths for v in p.vertices if v in hv)
        es = frozenset(e for p in paths for e in p.edges if e in he)
        return vs, es

    qv, qe = meet(Q)
    uv, ue = set(), set()
    for p in P:
        pv, pe = meet([p])
        if pv <= qv and pe <= qe:
            uv |= pv
            ue |= pe
    return uv == qv and ue == qe


# ---------------------------------------------------------------------------
# JSON


def _enc(x):
    if isinstance(x, tuple):
        return [_enc(y) for y in x]
    return x


def _dec(x):
    if isinstance(x, list):
        return tuple(_dec(y) for y in x)
    return x


def rendition_to_json(r: DiskRendition) -> dict:
    return {
        "cells": [
            {
                "id": c.id,
                "boundary": list(c.boundary),
                "vortex": c.vortex,
                "sigma": {"vertices": sort_ids(c.vertices), "edges": sort_ids(c.edges)},
            }
            for c in r.cells
        ],
        "tie_breaker": {str(k): v for k, v in sorted(r.tie_breaker.items())},
        "skeleton_rotation": {
            json.dumps(_enc(x), separators=(",", ":")): [_enc(d) for d in r.rotation[x]]
            for x in sorted(r.rotation, key=vkey)
        },
        "c0": r.c0,
    }


def rendition_from_json(soc: Society, obj: dict) -> DiskRendition:
    cells = tuple(
        Cell(
            int(c["id"]),
            tuple(c["boundary"]),
            bool(c["vortex"]),
            frozenset(c["sigma"]["vertices"]),
            frozenset(c["sigma"]["edges"]),
        )
        for c in obj["cells"]
    )
    tb = {int(k): v for k, v in obj.get("tie_breaker", {}).items()}
    rot = {_dec(json.loads(k)): tuple(_dec(d) for d in v) for k, v in obj["skeleton_rotation"].items()}
    c0 = obj.get("c0")
    cls = CylindricalRendition if c0 is not None else DiskRendition
    return cls(soc, cells, tb, rot, c0)
