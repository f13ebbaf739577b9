"""Slow, obviously-correct reference computations used to check the library."""
from __future__ import annotations

import bisect
import itertools

import networkx as nx

from societykit.society import Society


def _adj(soc: Society) -> dict:
    adj = {v: set() for v in soc.graph.vertices}
    for _, (u, v) in soc.graph.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def omega_paths(soc: Society) -> list[tuple]:
    """Every path with both ends on the boundary and no boundary vertex inside, once per direction."""
    adj = _adj(soc)
    om = soc.omega_set
    out = []

    def walk(path, seen):
        for w in adj[path[-1]]:
            if w in seen:
                continue
            if w in om:
                out.append(tuple(path + [w]))
            else:
                seen.add(w)
                walk(path + [w], seen)
                seen.discard(w)

    for s in soc.omega:
        walk([s], {s})
    return out


def interleave(soc: Society, a, b, c, d) -> bool:
    """Ends {a, b} and {c, d} alternate around the boundary."""
    pos = soc.pos
    lo, hi = sorted((pos[a], pos[b]))
    inside = lambda x: lo < pos[x] < hi
    return len({a, b, c, d}) == 4 and inside(c) != inside(d)


def cross_exists(soc: Society) -> bool:
    paths = [p for p in omega_paths(soc) if soc.pos[p[0]] < soc.pos[p[-1]]]
    for p, q in itertools.combinations(paths, 2):
        if set(p).isdisjoint(q) and interleave(soc, p[0], p[-1], q[0], q[-1]):
            return True
    return False


def check_cross(soc: Society, p: tuple, q: tuple) -> bool:
    """Independent validation of a cross given as two vertex sequences."""
    adj = _adj(soc)
    for seq in (p, q):
        if len(set(seq)) != len(seq) or len(seq) < 2:
            return False
        if any(b not in adj[a] for a, b in zip(seq, seq[1:])):
            return False
        if seq[0] not in soc.pos or seq[-1] not in soc.pos:
            return False
        if any(v in soc.pos for v in seq[1:-1]):
            return False
    return set(p).isdisjoint(q) and interleave(soc, p[0], p[-1], q[0], q[-1])


def depth(soc: Society) -> int:
    """Largest number of disjoint boundary paths between two complementary arcs, by max-flow."""
    om = soc.omega
    n = len(om)
    best = 0
    adj = _adj(soc)
    for i in range(n):
        for j in range(1, n):
            A = {om[(i + k) % n] for k in range(j)}
            B = set(om) - A
            D = nx.DiGraph()
            for v in soc.graph.vertices:
                D.add_edge(("in", v), ("out", v), capacity=1)
            for u in adj:
                for w in adj[u]:
                    if u in B or w in A:
                        continue
                    if u in soc.pos and u not in A:
                        continue
                    if w in soc.pos and w not in B:
                        continue
                    D.add_edge(("out", u), ("in", w), capacity=1)
            for a in A:
                D.add_edge("s", ("in", a), capacity=1)
            for b in B:
                D.add_edge(("out", b), "t", capacity=1)
            best = max(best, nx.maximum_flow_value(D, "s", "t"))
    return best


def lis(seq) -> int:
    """Longest strictly increasing subsequence by trying every subset, largest first."""
    n = len(seq)
    for k in range(n, 0, -1):
        for idx in itertools.combinations(range(n), k):
            if all(seq[a] < seq[b] for a, b in zip(idx, idx[1:])):
                return k
    return 0


def lds(seq) -> int:
    return lis([-x for x in seq])


def lis_patience(seq) -> int:
    """Longest strictly increasing subsequence length by patience sorting."""
    piles: list = []
    for x in seq:
        k = bisect.bisect_left(piles, x)
        if k == len(piles):
            piles.append(x)
        else:
            piles[k] = x
    return len(piles)
