"""Multigraphs, vertex-disjoint routing, separations, bridges and minor models."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Iterable, Sequence

Vertex = Hashable
EdgeId = Hashable


class MengerViolation(Exception):
    """More disjoint paths exist than the caller promised."""


class BudgetExceeded(Exception):
    """An exhaustive search ran out of its step allowance."""


def vkey(v: Any) -> tuple:
    """Total order on the id types we accept (ints, strings, tuples of these)."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vkey(x) for x in v))
    return (3, repr(v))


def sort_ids(items: Iterable[Any]) -> list:
    return sorted(items, key=vkey)


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph. ``edges`` holds ``(edge_id, (u, v))`` pairs."""

    vertices: frozenset
    edges: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(
            self, "edges", tuple((e, (u, v)) for e, (u, v) in self.edges)
        )
        seen = set()
        for e, (u, v) in self.edges:
            if e in seen:
                raise ValueError(f"duplicate edge id {e!r}")
            seen.add(e)
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge {e!r} has an endpoint outside the vertex set")

    @classmethod
    def from_edge_list(cls, vertices: Iterable, pairs: Iterable[Sequence]) -> "Graph":
        """Edge ids are the positions in ``pairs``."""
        return cls(frozenset(vertices), tuple((i, (u, v)) for i, (u, v) in enumerate(pairs)))

    @cached_property
    def ends(self) -> dict:
        return {e: uv for e, uv in self.edges}

    @cached_property
    def sorted_vertices(self) -> list:
        return sort_ids(self.vertices)

    @cached_property
    def _adj(self) -> dict:
        adj: dict = {v: {} for v in self.vertices}
        for e, (u, v) in self.edges:
            if u == v:
                continue
            for a, b in ((u, v), (v, u)):
                cur = adj[a].get(b)
                if cur is None or vkey(e) < vkey(cur):
                    adj[a][b] = e
        return {v: dict(sorted(nb.items(), key=lambda kv: vkey(kv[0]))) for v, nb in adj.items()}

    @cached_property
    def incidence(self) -> dict:
        inc: dict = {v: [] for v in self.vertices}
        for e, (u, v) in self.edges:
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return inc

    def neighbors(self, v: Vertex) -> list:
        return list(self._adj[v])

    def edge_between(self, u: Vertex, v: Vertex) -> EdgeId | None:
        """Smallest edge id joining ``u`` and ``v`` (``u != v``)."""
        return self._adj[u].get(v)

    def other_end(self, e: EdgeId, v: Vertex) -> Vertex:
        a, b = self.ends[e]
        return b if a == v else a

    def induced(self, keep: Iterable) -> "Graph":
        keep = frozenset(keep) & self.vertices
        return Graph(keep, tuple((e, uv) for e, uv in self.edges if uv[0] in keep and uv[1] in keep))

    def remove_vertices(self, drop: Iterable) -> "Graph":
        return self.induced(self.vertices - frozenset(drop))

    def edge_subgraph(self, eids: Iterable, extra_vertices: Iterable = ()) -> "Graph":
        eids = set(eids)
        es = tuple((e, uv) for e, uv in self.edges if e in eids)
        vs = set(extra_vertices)
        for _, (u, v) in es:
            vs.add(u)
            vs.add(v)
        return Graph(frozenset(vs), es)

    def components(self, within: Iterable | None = None) -> list[frozenset]:
        """Connected components (of the induced subgraph on ``within``), ordered by least vertex."""
        pool = self.vertices if within is None else frozenset(within) & self.vertices
        seen: set = set()
        out = []
        for s in sort_ids(pool):
            if s in seen:
                continue
            comp = {s}
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y in pool and y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            out.append(frozenset(comp))
        return out

    def is_connected_set(self, vs: Iterable) -> bool:
        vs = frozenset(vs)
        return len(vs) > 0 and len(self.components(vs)) == 1

    def shortest_path(
        self, sources: Iterable, targets: Iterable, avoid: Iterable = ()
    ) -> "Path | None":
        """BFS path from any source to any target whose vertices avoid ``avoid``."""
        targets = set(targets)
        avoid = set(avoid)
        prev: dict = {}
        dq = deque()
        for s in sort_ids(set(sources) - avoid):
            if s in self.vertices:
                prev[s] = None
                dq.append(s)
        while dq:
            x = dq.popleft()
            if x in targets:
                seq = [x]
                while prev[seq[-1]] is not None:
                    seq.append(prev[seq[-1]])
                return Path.from_vertices(self, seq[::-1])
            for y in self._adj[x]:
                if y not in prev and y not in avoid:
                    prev[y] = x
                    dq.append(y)
        return None


@dataclass(frozen=True)
class Path:
    """Alternating vertex/edge sequence with distinct vertices."""

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices:
            raise ValueError("a path has at least one vertex")
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("edge count must be one less than vertex count")

    @classmethod
    def from_vertices(cls, g: Graph, seq: Sequence) -> "Path":
        es = []
        for a, b in zip(seq, seq[1:]):
            e = g.edge_between(a, b)
            if e is None:
                raise ValueError(f"no edge between {a!r} and {b!r}")
            es.append(e)
        return cls(tuple(seq), tuple(es))

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    @property
    def ends(self) -> tuple:
        return (self.vertices[0], self.vertices[-1])

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def internal(self) -> tuple:
        return self.vertices[1:-1]

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1], self.edges[::-1])

    def index(self, v: Vertex) -> int:
        return self.vertices.index(v)

    def sub(self, x: Vertex, y: Vertex) -> "Path":
        """The subpath from ``x`` to ``y`` (direction follows the arguments)."""
        i, j = self.index(x), self.index(y)
        if i <= j:
            return Path(self.vertices[i : j + 1], self.edges[i:j])
        return Path(self.vertices[j : i + 1], self.edges[j:i]).reversed()

    def join(self, other: "Path") -> "Path":
        """Concatenate two paths sharing exactly the junction vertex."""
        if self.end != other.start:
            raise ValueError("paths do not meet end to start")
        if self.vertex_set & other.vertex_set != {self.end}:
            raise ValueError("concatenation would repeat a vertex")
        return Path(self.vertices + other.vertices[1:], self.edges + other.edges)

    def is_valid_in(self, g: Graph) -> bool:
        if len(set(self.vertices)) != len(self.vertices):
            return False
        if any(v not in g.vertices for v in self.vertices):
            return False
        for (a, b), e in zip(zip(self.vertices, self.vertices[1:]), self.edges):
            if e not in g.ends or set(g.ends[e]) != {a, b}:
                return False
        return True

    def canonical(self) -> "Path":
        """Orientation starting at the smaller end."""
        return self if vkey(self.start) <= vkey(self.end) else self.reversed()


@dataclass(frozen=True)
class Cycle:
    """Closed walk with distinct vertices; edge i joins vertices[i] and vertices[i+1 mod n]."""

    vertices: tuple
    edges: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices or len(self.edges) != len(self.vertices):
            raise ValueError("a cycle has as many edges as vertices, at least one")

    @classmethod
    def from_vertices(cls, g: Graph, seq: Sequence) -> "Cycle":
        seq = list(seq)
        if len(seq) == 1:
            loops = sort_ids(e for e in g.incidence[seq[0]] if g.ends[e][0] == g.ends[e][1])
            if not loops:
                raise ValueError("no loop at the vertex")
            return cls(tuple(seq), (loops[0],))
        if len(seq) == 2:
            par = sort_ids(e for e in g.incidence[seq[0]] if set(g.ends[e]) == set(seq))
            if len(par) < 2:
                raise ValueError("a 2-cycle needs two parallel edges")
            return cls(tuple(seq), tuple(par[:2]))
        es = []
        for a, b in zip(seq, seq[1:] + seq[:1]):
            e = g.edge_between(a, b)
            if e is None:
                raise ValueError(f"no edge between {a!r} and {b!r}")
            es.append(e)
        return cls(tuple(seq), tuple(es))

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @property
    def length(self) -> int:
        return len(self.edges)

    def is_valid_in(self, g: Graph) -> bool:
        n = len(self.vertices)
        if len(set(self.vertices)) != n or len(set(self.edges)) != n:
            return False
        for i, e in enumerate(self.edges):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if e not in g.ends or sorted(map(vkey, g.ends[e])) != sorted(map(vkey, (a, b))):
                return False
        return True


Linkage = tuple  # tuple[Path, ...]


def is_linkage(g: Graph, paths: Iterable[Path]) -> bool:
    used: set = set()
    for p in paths:
        if not p.is_valid_in(g) or used & p.vertex_set:
            return False
        used |= p.vertex_set
    return True


@dataclass(frozen=True)
class Separation:
    A: frozenset
    B: frozenset

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    @property
    def separator(self) -> frozenset:
        return self.A & self.B

    def is_valid_in(self, g: Graph) -> bool:
        if self.A | self.B != g.vertices:
            return False
        left, right = self.A - self.B, self.B - self.A
        return not any(
            (u in left and v in right) or (u in right and v in left) for _, (u, v) in g.edges
        )




# ---------------------------------------------------------------------------
# vertex-disjoint routing: each vertex v becomes (v, 0) -> (v, 1) with capacity 1


class _SplitFlow:
    def __init__(
        self, g: Graph, X: frozenset, Y: frozenset, forbidden: frozenset, uncuttable=frozenset()
    ):
        self.g, self.X, self.Y = g, X, Y
        big = len(g.vertices) + 1
        self.S, self.T = ("s",), ("t",)
        self.res: dict = {}
        self.adj: dict = {self.S: [], self.T: []}
        for v in g.sorted_vertices:
            self.adj[(v, 0)] = []
            self.adj[(v, 1)] = []
        for v in g.sorted_vertices:
            if v in forbidden and v not in X and v not in Y:
                continue
            self._arc((v, 0), (v, 1), big if v in uncuttable else 1)
        for u in g.sorted_vertices:
            if u in forbidden and (u not in X or u in Y):
                continue  # a forbidden vertex may only be the first vertex of a path
            for w in g.neighbors(u):
                if w in forbidden and (w not in Y or w in X):
                    continue  # ... or the last
                self._arc((u, 1), (w, 0), big)
        for x in sort_ids(X):
            self._arc(self.S, (x, 0), big)
        for y in sort_ids(Y):
            self._arc((y, 1), self.T, big)
        self.value = 0
        self.reach: set = set()
        self._run()

    def _arc(self, a, b, c) -> None:
        self.adj[a].append(b)
        self.adj[b].append(a)
        self.res[(a, b)] = c
        self.res.setdefault((b, a), 0)

    def _run(self) -> None:
        while True:
            prev = {self.S: None}
            dq = deque([self.S])
            while dq and self.T not in prev:
                a = dq.popleft()
                for b in self.adj[a]:
                    if b not in prev and self.res[(a, b)] > 0:
                        prev[b] = a
                        dq.append(b)
            if self.T not in prev:
                self.reach = set(prev)
                return
            b = self.T
            while prev[b] is not None:
                a = prev[b]
                self.res[(a, b)] -= 1
                self.res[(b, a)] += 1
                b = a
            self.value += 1

    def vertex_paths(self) -> list[list]:
        # Every arc except reverse residuals has a zero-capacity twin, so the flow on an
        # original arc a->b equals the residual of b->a.
        out = []
        for x in sort_ids(self.X):
            if self.res.get(((x, 0), self.S), 0) <= 0:
                continue
            seq = [x]
            while True:
                v = seq[-1]
                if self.res.get((self.T, (v, 1)), 0) > 0 and self._take((v, 1), self.T):
                    break
                nxt = None
                for b in self.adj[(v, 1)]:
                    if b != self.T and b[1] == 0 and b[0] != v and self._take((v, 1), b):
                        nxt = b[0]
                        break
                seq.append(nxt)
            out.append(seq)
        return out

    def _take(self, a, b) -> bool:
        """Consume one unit of flow on a->b during decomposition."""
        if self.res.get((b, a), 0) > 0 and (a, b) in self.res:
            self.res[(b, a)] -= 1
            self.res[(a, b)] += 1
            return True
        return False


def _trim(seq: list, X: frozenset, Y: frozenset) -> list:
    """Shorten a walk so that it meets X only first and Y only last."""
    j = next(i for i, v in enumerate(seq) if v in Y)
    seq = seq[: j + 1]
    i = max(i for i, v in enumerate(seq) if v in X)
    return seq[i:]


def disjoint_paths(
    g: Graph, X: Iterable, Y: Iterable, forbidden_internal: Iterable = ()
) -> tuple[Linkage, Separation]:
    """Maximum family of disjoint X-Y paths with a matching separation.

    Vertices of ``forbidden_internal`` may occur only as ends of the returned paths.
    A vertex in both X and Y yields a length-0 path. The separation is the one closest
    to X; when ``forbidden_internal`` is non-empty it separates the graph in which
    forbidden vertices cannot be passed through.
    """
    X = frozenset(X) & g.vertices
    Y = frozenset(Y) & g.vertices
    forb = frozenset(forbidden_internal)
    fl = _SplitFlow(g, X, Y, forb)
    reach = fl.reach
    A = {v for v in g.vertices if (v, 0) in reach}
    sep = {v for v in A if (v, 1) not in reach}
    B = (g.vertices - A) | sep
    paths = []
    for seq in fl.vertex_paths():
        paths.append(Path.from_vertices(g, _trim(seq, X, Y)))
    paths.sort(key=lambda p: (vkey(p.start), vkey(p.end)))
    return tuple(paths), Separation(frozenset(A), frozenset(B))


@dataclass(frozen=True)
class LeftmostSeparation:
    separation: Separation
    outcome: int  # 1: order k with k disjoint separator-Y paths on the B side; 2: separator inside Y
    linkage: Linkage = ()


def leftmost_min_separation(g: Graph, X: Iterable, Y: Iterable, k: int) -> LeftmostSeparation:
    """Separation (A, B) of order at most k, grown towards Y until it has order k or sits in Y.

    Starts from the minimum cut closest to X among those avoiding X - Y (falling back to
    the closest cut overall). Outcome 1 carries k disjoint separator-Y paths inside G[B].
    """
    X = frozenset(X) & g.vertices
    Y = frozenset(Y) & g.vertices
    paths, sep = disjoint_paths(g, X, Y)
    if len(paths) > k:
        raise MengerViolation(f"{len(paths)} disjoint paths exist, more than {k}")
    # Prefer a cut of the same order that keeps X - Y off the separator.
    alt = _SplitFlow(g, X, Y, frozenset(), uncuttable=X - Y)
    if alt.value == len(paths):
        A = {v for v in g.vertices if (v, 0) in alt.reach}
        B = set(g.vertices - A) | {v for v in A if (v, 1) not in alt.reach}
    else:
        A, B = set(sep.A), set(sep.B)
    while True:
        S = frozenset(A & B)
        gb = g.induced(B)
        link, inner = disjoint_paths(gb, S, Y)
        if len(link) < len(S):
            # push to a tighter cut inside G[B]; B minus A strictly shrinks
            A |= inner.A
            B = set(inner.B)
            continue
        if len(S) == k:
            return LeftmostSeparation(Separation(frozenset(A), frozenset(B)), 1, link)
        if S <= Y:
            return LeftmostSeparation(Separation(frozenset(A), frozenset(B)), 2, link)
        # step one vertex along a separator-to-Y path that leaves S
        x = None
        for p in link:
            if p.length > 0:
                x = p.vertices[1]
                break
        A.add(x)
        # the enlarged A keeps every separator vertex reachable from X inside G[A]
        for v in list(A & B):
            if not any(w in B - A for w in g.neighbors(v)) and v not in Y:
                B.discard(v)


# ---------------------------------------------------------------------------
# bridges


@dataclass(frozen=True)
class Bridge:
    vertices: frozenset  # vertices not in H (empty for a chord)
    edges: frozenset
    attachments: frozenset


def h_bridges(g: Graph, h_vertices: Iterable, h_edges: Iterable = ()) -> list[Bridge]:
    """All H-bridges of G for the subgraph H = (h_vertices, h_edges)."""
    hv = frozenset(h_vertices)
    he = frozenset(h_edges)
    out = []
    for e, (u, v) in g.edges:
        if e not in he and u in hv and v in hv:
            out.append(Bridge(frozenset(), frozenset([e]), frozenset([u, v])))
    for comp in g.components(g.vertices - hv):
        es = frozenset(e for e, (u, v) in g.edges if u in comp or v in comp)
        att = frozenset(x for e in es for x in g.ends[e] if x in hv)
        out.append(Bridge(comp, es, att))
    return out


# ---------------------------------------------------------------------------
# minor models


@dataclass(frozen=True)
class MinorModel:
    branch_sets: tuple  # tuple of frozensets
    witness_edges: tuple  # ((i, j, edge_id), ...) with i < j

    def witness(self, i: int, j: int):
        for a, b, e in self.witness_edges:
            if (a, b) == (min(i, j), max(i, j)):
                return e
        return None


@dataclass(frozen=True)
class GraspBinding:
    """Indices that tie each branch set to the grid it is supposed to be grasped by.

    ``rows`` and ``cols`` are families of paths (horizontal/vertical paths of a mesh, or
    nest cycles given as closed vertex sequences and radial paths). ``assignment[k]`` lists
    the (row index, col index) pairs attributed to branch set k.
    """

    rows: tuple
    cols: tuple
    assignment: tuple
    mode: str = "mesh"  # or "nest"


def model_from_branch_sets(g: Graph, sets: Sequence[Iterable]) -> MinorModel | None:
    bs = tuple(frozenset(s) for s in sets)
    where = {}
    for i, s in enumerate(bs):
        for v in s:
            where[v] = i
    wit = {}
    for e, (u, v) in sorted(g.edges, key=lambda ev: vkey(ev[0])):
        if u in where and v in where and where[u] != where[v]:
            key = (min(where[u], where[v]), max(where[u], where[v]))
            wit.setdefault(key, e)
    t = len(bs)
    if len(wit) != t * (t - 1) // 2:
        return None
    return MinorModel(bs, tuple((i, j, wit[(i, j)]) for i, j in sorted(wit)))


def verify_minor_model(g: Graph, model: MinorModel, grasped_by: GraspBinding | None = None) -> bool:
    bs = model.branch_sets
    seen: set = set()
    for s in bs:
        if not s or not s <= g.vertices or seen & s:
            return False
        seen |= s
        if not g.is_connected_set(s):
            return False
    t = len(bs)
    pairs = {}
    for i, j, e in model.witness_edges:
        if not (0 <= i < j < t) or e not in g.ends:
            return False
        u, v = g.ends[e]
        if not ((u in bs[i] and v in bs[j]) or (u in bs[j] and v in bs[i])):
            return False
        pairs[(i, j)] = e
    if len(pairs) != t * (t - 1) // 2:
        return False
    if grasped_by is not None:
        return grasp_ok(g, model, grasped_by)
    return True


def grasp_ok(g: Graph, model: MinorModel, b: GraspBinding) -> bool:
    """Each branch set owns a row/column pair per branch set, all indices distinct."""
    t = len(model.branch_sets)
    if len(b.assignment) != t:
        return False
    rows = [frozenset(r) for r in b.rows]
    cols = [frozenset(c) for c in b.cols]
    for k, pairs in enumerate(b.assignment):
        if len(pairs) != t:
            return False
        ri = [i for i, _ in pairs]
        ci = [j for _, j in pairs]
        if len(set(ri)) != t or len(set(ci)) != t:
            return False
        for i, j in pairs:
            if not (0 <= i < len(rows) and 0 <= j < len(cols)):
                return False
            if b.mode == "mesh":
                meet = rows[i] & cols[j]
                if not meet or not meet <= model.branch_sets[k]:
                    return False
            else:
                meet = rows[i] & cols[j]
                if not meet <= model.branch_sets[k]:
                    return False
                if not meet:
                    return False
    return True


def find_minor_model_bruteforce(g: Graph, t: int, budget: int = 10**6) -> MinorModel | None:
    """Exhaustive K_t model search by labelling vertices with branch indices.

    Each component is searched on growing BFS balls so that models near the first vertex
    are found quickly; the final ball is the whole component, which makes ``None`` a proof
    of absence. Raises BudgetExceeded once ``budget`` labelling steps are used.
    """
    if t <= 0:
        return MinorModel((), ())
    steps = [0]
    for comp in g.components():
        if len(comp) < t:
            continue
        root = sort_ids(comp)[0]
        dist = {root: 0}
        order = [root]
        for v in order:
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    order.append(w)
        radius = 0
        maxd = max(dist.values())
        while True:
            ball = [v for v in order if dist[v] <= radius]
            if len(ball) >= t:
                m = _label_search(g, ball, t, steps, budget)
                if m is not None:
                    return m
            if radius >= maxd:
                break
            radius += 1
    return None


def _label_search(g: Graph, order: list, t: int, steps: list, budget: int) -> MinorModel | None:
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [[pos[w] for w in g.neighbors(v) if w in pos] for v in order]
    later = [max([j for j in nb] + [i]) for i, nb in enumerate(nbrs)]
    label = [-1] * n

    def closed_ok(upto: int) -> bool:
        # any branch whose vertices have no unlabelled neighbours must already be connected
        for c in range(t):
            members = [i for i in range(upto) if label[i] == c]
            if not members:
                continue
            if any(later[i] >= upto for i in members):
                continue
            if not _connected_idx(members, nbrs, label, c):
                return False
        return True

    def adjacent_all() -> bool:
        adj = set()
        for i in range(n):
            a = label[i]
            if a < 0:
                continue
            for j in nbrs[i]:
                b = label[j]
                if b >= 0 and b != a:
                    adj.add((min(a, b), max(a, b)))
        return len(adj) == t * (t - 1) // 2

    def rec(i: int, used: int) -> bool:
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"minor search exceeded {budget} steps")
        if t - used > n - i:
            return False
        if i == n:
            if used < t:
                return False
            for c in range(t):
                members = [k for k in range(n) if label[k] == c]
                if not _connected_idx(members, nbrs, label, c):
                    return False
            return adjacent_all()
        choices = list(range(min(used + 1, t))) + [-1]
        for c in choices:
            label[i] = c
            if closed_ok(i + 1) and rec(i + 1, max(used, c + 1)):
                return True
        label[i] = -1
        return False

    if not rec(0, 0):
        return None
    sets = [[order[i] for i in range(n) if label[i] == c] for c in range(t)]
    return model_from_branch_sets(g, sets)


def _connected_idx(members: list, nbrs: list, label: list, c: int) -> bool:
    if not members:
        return False
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        x = stack.pop()
        for y in nbrs[x]:
            if y not in seen and label[y] == c:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def bipartite_matching(options: dict) -> dict:
    """Maximum matching from left keys to right values (augmenting paths).

    ``options`` maps each left vertex to the right vertices it may take.
    """
    owner: dict = {}

    def try_assign(w, seen) -> bool:
        for q in options[w]:
            if q in seen:
                continue
            seen.add(q)
            if q not in owner or try_assign(owner[q], seen):
                owner[q] = w
                return True
        return False

    for w in sort_ids(options):
        try_assign(w, set())
    return {w: q for q, w in owner.items()}
