"""Societies: a graph with a cyclic order on some of its vertices."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .graph_core import Graph, Path, sort_ids, vkey


class NotASocietyVertex(ValueError):
    pass


class NotASegment(ValueError):
    pass


class SocietyFormatError(ValueError):
    """Malformed society input. ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + loc)
        self.line, self.column = line, column


@dataclass(frozen=True)
class Society:
    graph: Graph
    omega: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", tuple(self.omega))
        if len(set(self.omega)) != len(self.omega):
            raise ValueError("omega repeats a vertex")
        missing = [v for v in self.omega if v not in self.graph.vertices]
        if missing:
            raise ValueError(f"omega vertices {missing!r} are not graph vertices")

    @cached_property
    def pos(self) -> dict:
        return {v: i for i, v in enumerate(self.omega)}

    @cached_property
    def omega_set(self) -> frozenset:
        return frozenset(self.omega)

    @property
    def n(self) -> int:
        return len(self.omega)

    def succ(self, v, k: int = 1):
        return self.omega[(self.pos[v] + k) % self.n]

    def pred(self, v, k: int = 1):
        return self.omega[(self.pos[v] - k) % self.n]

    def arc(self, x, y) -> tuple:
        """Vertices of Omega from x to y inclusive, following the cyclic order."""
        self._check(x)
        self._check(y)
        i, j = self.pos[x], self.pos[y]
        if j < i:
            j += self.n
        return tuple(self.omega[k % self.n] for k in range(i, j + 1))

    def _check(self, v) -> None:
        if v not in self.pos:
            raise NotASocietyVertex(f"{v!r} is not on omega")

    def is_segment(self, X: Iterable) -> bool:
        X = frozenset(X)
        if not X <= self.omega_set:
            return False
        if not X or X == self.omega_set:
            return True
        # a proper non-empty subset is a segment iff it has exactly one entry point
        starts = [v for v in self.omega if v in X and self.pred(v) not in X]
        return len(starts) == 1

    def segment_order(self, X: Iterable) -> tuple:
        """The vertices of segment X listed from its first vertex to its last."""
        X = frozenset(X)
        if not self.is_segment(X):
            raise NotASegment(f"{sort_ids(X)!r} is not a segment")
        if not X:
            return ()
        if X == self.omega_set:
            return self.omega
        first = next(v for v in self.omega if v in X and self.pred(v) not in X)
        return tuple(self.omega[(self.pos[first] + k) % self.n] for k in range(len(X)))

    def ordered_in(self, seq: Sequence) -> bool:
        """True when the distinct vertices of ``seq`` appear in this cyclic order on Omega."""
        if len(seq) <= 2:
            return all(v in self.pos for v in seq)
        p = [self.pos[v] for v in seq]
        k = p.index(min(p))
        rot = p[k:] + p[:k]
        return all(a < b for a, b in zip(rot, rot[1:]))

    def with_omega(self, omega: Sequence) -> "Society":
        return Society(self.graph, tuple(omega))

    def canonical_omega(self) -> tuple:
        if not self.omega:
            return ()
        k = min(range(self.n), key=lambda i: vkey(self.omega[i]))
        return self.omega[k:] + self.omega[:k]

    def to_json(self) -> dict:
        """Edges are listed by ascending edge id; ids are positions in the list when the
        ids are 0..m-1, otherwise they are dropped and renumbered on load."""
        return {
            "vertices": sort_ids(self.graph.vertices),
            "edges": [list(self.graph.ends[e]) for e in sort_ids(self.graph.ends)],
            "omega": list(self.canonical_omega()),
        }

    @classmethod
    def from_json(cls, obj) -> "Society":
        if not isinstance(obj, dict):
            raise SocietyFormatError("society must be a JSON object")
        for key in ("vertices", "edges", "omega"):
            if key not in obj:
                raise SocietyFormatError(f"missing key {key!r}")
        verts = obj["vertices"]
        if not isinstance(verts, list) or not all(_is_id(v) for v in verts):
            raise SocietyFormatError("vertices must be a list of integers or strings")
        if len(set(verts)) != len(verts):
            raise SocietyFormatError("vertex ids must be unique")
        vs = set(verts)
        edges = []
        for i, e in enumerate(obj["edges"]):
            if not (isinstance(e, list) and len(e) == 2 and all(_is_id(x) for x in e)):
                raise SocietyFormatError(f"edge {i} must be a pair of vertex ids")
            if e[0] not in vs or e[1] not in vs:
                raise SocietyFormatError(f"edge {i} uses an unknown vertex")
            edges.append((e[0], e[1]))
        om = obj["omega"]
        if not isinstance(om, list) or not all(_is_id(v) and v in vs for v in om):
            raise SocietyFormatError("omega must list known vertex ids")
        if len(set(om)) != len(om):
            raise SocietyFormatError("omega repeats a vertex")
        return cls(Graph.from_edge_list(verts, edges), tuple(om))

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _is_id(v) -> bool:
    return (isinstance(v, int) and not isinstance(v, bool)) or isinstance(v, str)


def parse_society(text: str) -> Society:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SocietyFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return Society.from_json(obj)


def segment_between(soc: Society, x, y) -> tuple:
    """The segment xOy in order; the whole of Omega when y immediately precedes x."""
    return soc.arc(x, y)


def flip(soc: Society, X: Iterable) -> Society:
    """Reverse segment X in place within the cyclic order."""
    order = soc.segment_order(X)
    if not order:
        return soc
    xs = set(order)
    rest = [v for v in soc.omega if v not in xs]
    if rest:
        # start the complement right after the last vertex of X
        after = soc.succ(order[-1])
        k = rest.index(after)
        rest = rest[k:] + rest[:k]
    return soc.with_omega(tuple(rest) + tuple(reversed(order)))


def delete(soc: Society, Z: Iterable) -> Society:
    Z = frozenset(Z)
    return Society(soc.graph.remove_vertices(Z), tuple(v for v in soc.omega if v not in Z))


def is_omega_path(soc: Society, p: Path) -> bool:
    """Length at least one, both ends on Omega, no internal vertex on Omega."""
    return (
        p.length >= 1
        and p.start in soc.pos
        and p.end in soc.pos
        and not any(v in soc.pos for v in p.internal)
        and p.is_valid_in(soc.graph)
    )


def build_society(vertices: Iterable, pairs: Iterable[Sequence], omega: Sequence) -> Society:
    return Society(Graph.from_edge_list(vertices, pairs), tuple(omega))
