"""Rotation-system embeddings, planarity testing and face enumeration.

A dart is ``(edge_id, end)`` where ``end`` indexes the endpoint pair of the edge; the dart
sits at that endpoint and points along the edge. A rotation lists, for each vertex, the
darts at it in cyclic order. Faces are orbits of ``d -> succ(twin(d))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .graph_core import Graph, sort_ids, vkey


class MalformedEmbedding(Exception):
    pass


Dart = tuple  # (edge_id, 0 | 1)


def twin(d: Dart) -> Dart:
    return (d[0], 1 - d[1])


@dataclass(frozen=True)
class Embedding:
    """``rotation`` maps each vertex to a tuple of darts; ``ends`` maps edge id to its pair.

    ``outer`` is a dart on the designated outer face, or None.
    """

    rotation: dict
    ends: dict
    outer: Dart | None = None

    def dart_vertex(self, d: Dart):
        return self.ends[d[0]][d[1]]

    def successor_map(self) -> dict:
        succ = {}
        for v, rot in self.rotation.items():
            n = len(rot)
            for i, d in enumerate(rot):
                succ[d] = rot[(i + 1) % n]
        return succ

    def face_of(self, d: Dart) -> list:
        succ = self.successor_map()
        walk = [d]
        cur = succ[twin(d)]
        while cur != d:
            walk.append(cur)
            cur = succ[twin(cur)]
        return walk

    def outer_face(self) -> list | None:
        return None if self.outer is None else self.face_of(self.outer)

    def face_vertices(self, walk: Sequence[Dart]) -> list:
        return [self.dart_vertex(d) for d in walk]

    def without_edges(self, drop: Iterable) -> "Embedding":
        drop = set(drop)
        rot = {v: tuple(d for d in r if d[0] not in drop) for v, r in self.rotation.items()}
        ends = {e: uv for e, uv in self.ends.items() if e not in drop}
        return Embedding(rot, ends, None)


def all_darts(emb: Embedding) -> list:
    return [d for e in sort_ids(emb.ends) for d in ((e, 0), (e, 1))]


def faces(emb: Embedding) -> list[list]:
    """Every face walk exactly once, each starting at its least dart."""
    succ = {}
    for v, rot in emb.rotation.items():
        n = len(rot)
        for i, d in enumerate(rot):
            if d in succ:
                raise MalformedEmbedding(f"dart {d!r} listed twice")
            if d[0] not in emb.ends or emb.dart_vertex(d) != v:
                raise MalformedEmbedding(f"dart {d!r} listed at the wrong vertex {v!r}")
            succ[d] = rot[(i + 1) % n]
    darts = all_darts(emb)
    if set(darts) != set(succ):
        raise MalformedEmbedding("rotation does not cover every dart exactly once")
    seen = set()
    out = []
    for d in sorted(darts, key=vkey):
        if d in seen:
            continue
        walk = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            walk.append(cur)
            cur = succ[twin(cur)]
        if cur != d:
            raise MalformedEmbedding("face traversal is not a permutation")
        out.append(walk)
    return out


def is_plane(emb: Embedding) -> bool:
    """Euler check per connected component: v - e + f = 2 for components with edges."""
    try:
        fs = faces(emb)
    except MalformedEmbedding:
        return False
    parent = {v: v for v in emb.rotation}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (u, v) in emb.ends.items():
        parent[find(u)] = find(v)
    nv: dict = {}
    ne: dict = {}
    nf: dict = {}
    for v in emb.rotation:
        r = find(v)
        nv[r] = nv.get(r, 0) + 1
    for e, (u, _) in emb.ends.items():
        r = find(u)
        ne[r] = ne.get(r, 0) + 1
    for walk in fs:
        r = find(emb.dart_vertex(walk[0]))
        nf[r] = nf.get(r, 0) + 1
    for r in nv:
        if ne.get(r, 0) == 0:
            continue
        if nv[r] - ne[r] + nf.get(r, 0) != 2:
            return False
    return True


def _nx_rotation(vertices: Sequence, edges: Sequence) -> dict | None:
    """Planar rotation of a multigraph given as tagged vertices and (eid, (u, v)) edges."""
    h = nx.Graph()
    for v in vertices:
        h.add_node(("v", v))
    for e, (u, v) in edges:
        if u == v:
            a, b = ("m", e, 0), ("m", e, 1)
            h.add_edge(("v", u), a)
            h.add_edge(a, b)
            h.add_edge(b, ("v", u))
        else:
            h.add_edge(("v", u), ("m", e))
            h.add_edge(("m", e), ("v", v))
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    ends = {e: uv for e, uv in edges}
    rot = {}
    for v in vertices:
        darts = []
        for nb in emb.neighbors_cw_order(("v", v)) if h.degree(("v", v)) else []:
            if len(nb) == 3:
                darts.append((nb[1], nb[2]))
            else:
                e = nb[1]
                darts.append((e, 0 if ends[e][0] == v else 1))
        rot[v] = tuple(_canonical_cycle(darts))
    return rot


def _canonical_cycle(seq: list) -> list:
    if not seq:
        return seq
    i = min(range(len(seq)), key=lambda k: vkey(seq[k]))
    return seq[i:] + seq[:i]


def planarity_test(g: Graph) -> Embedding | None:
    rot = _nx_rotation(g.sorted_vertices, sorted(g.edges, key=lambda ev: vkey(ev[0])))
    if rot is None:
        return None
    emb = Embedding(rot, dict(g.edges))
    fs = faces(emb)
    return Embedding(rot, dict(g.edges), fs[0][0] if fs else None)


class _Hub:
    def __repr__(self) -> str:
        return "<hub>"


def framed_embedding(g: Graph, boundary: Sequence) -> Embedding | None:
    """Embedding of G plus a frame cycle through ``boundary`` that is itself a face.

    Frame edges have ids ``("frame", i)`` joining boundary[i] to boundary[i+1]; the frame
    face is designated as ``outer``. Returns None when no disk embedding with this
    boundary order exists.
    """
    b = list(boundary)
    n = len(b)
    if len(set(b)) != n or any(v not in g.vertices for v in b):
        raise ValueError("boundary vertices must be distinct vertices of the graph")
    hub = _Hub()
    edges = sorted(g.edges, key=lambda ev: vkey(ev[0]))
    aug = list(edges)
    for i, v in enumerate(b):
        aug.append((("hub", i), (hub, v)))
    if n >= 3:
        for i in range(n):
            aug.append((("rim", i), (b[i], b[(i + 1) % n])))
    verts = g.sorted_vertices + [hub]
    rot = _nx_rotation(verts, aug)
    if rot is None:
        return None
    rot.pop(hub)
    ends = dict(g.edges)
    if n == 0:
        return Embedding({v: rot[v] for v in g.sorted_vertices}, ends, None)
    for i in range(n):
        ends[("frame", i)] = (b[i], b[(i + 1) % n])
    pos = {v: i for i, v in enumerate(b)}
    want = [(("frame", i), 0) for i in range(n)]
    for mirror in (False, True):
        new = {}
        for v, r in rot.items():
            r = r[::-1] if mirror else r
            if v not in pos:
                new[v] = tuple(_canonical_cycle(list(r)))
                continue
            i = pos[v]
            out = []
            for d in r:
                if d[0] == ("hub", i):
                    out += [(("frame", (i - 1) % n), 1), (("frame", i), 0)]
                elif not (isinstance(d[0], tuple) and d[0][:1] == ("rim",)):
                    out.append(d)
            new[v] = tuple(_canonical_cycle(out))
        emb = Embedding(new, ends, want[0])
        if is_plane(emb) and emb.face_of(want[0]) == want:
            return emb
    raise MalformedEmbedding("frame insertion failed")  # pragma: no cover


def embed_with_outer_cycle(g: Graph, boundary: Sequence) -> Embedding | None:
    """Disk embedding of G with ``boundary`` met in order along the designated outer face."""
    framed = framed_embedding(g, boundary)
    if framed is None:
        return None
    n = len(boundary)
    emb = framed.without_edges([("frame", i) for i in range(n)])
    if n == 0:
        fs = faces(emb)
        return Embedding(emb.rotation, emb.ends, fs[0][0] if fs else None)
    # the dart that followed the frame at a boundary vertex now starts the merged outer face
    outer = None
    for i, v in enumerate(boundary):
        r = framed.rotation[v]
        k = r.index((("frame", i), 0))
        for step in range(1, len(r)):
            d = r[(k + step) % len(r)]
            if d[0] in emb.ends:
                outer = d
                break
        if outer is not None:
            break
    return Embedding(emb.rotation, emb.ends, outer)


def boundary_order_on_face(emb: Embedding, walk: Sequence[Dart], boundary: Sequence) -> bool:
    """True when ``boundary`` occurs as a cyclic subsequence of the vertices along ``walk``.

    Cut vertices may be met several times on one face, so one occurrence per boundary
    vertex is chosen. Boundary vertices outside the walk's connected component are
    ignored, since no face can reach them.
    """
    comp = _component_of(emb, emb.dart_vertex(walk[0])) if walk else set()
    b = [v for v in boundary if v in comp]
    if not b:
        return True
    seq = [emb.dart_vertex(d) for d in walk]
    m = len(seq)
    for s0 in range(m):
        if seq[s0] != b[0]:
            continue
        k = 1
        for step in range(1, m):
            if k == len(b):
                break
            if seq[(s0 + step) % m] == b[k]:
                k += 1
        if k == len(b):
            return True
    return False


def _component_of(emb: Embedding, v) -> set:
    adj: dict = {}
    for a, b in emb.ends.values():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen
