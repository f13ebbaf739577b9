"""Linear decompositions of societies and their adhesion."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph_core import Separation, disjoint_paths, sort_ids
from .society import Society


class EmptyOmega(ValueError):
    pass


@dataclass(frozen=True)
class LinearDecomposition:
    order: tuple  # v_1..v_n, the boundary vertices in cyclic order
    bags: tuple  # X_1..X_n as frozensets
    separations: tuple = ()  # (A_i, B_i) for i = 1..n-1 when built from cuts

    def to_json(self) -> dict:
        from .renditions import _enc

        return {
            "order": [_enc(v) for v in self.order],
            "bags": [[_enc(v) for v in sort_ids(X)] for X in self.bags],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearDecomposition":
        from .renditions import _dec

        return cls(
            tuple(_dec(v) for v in obj["order"]),
            tuple(frozenset(_dec(v) for v in X) for X in obj["bags"]),
        )


def linear_decomposition(soc: Society) -> LinearDecomposition:
    """Bags cut out by the minimum-order separations between every prefix and suffix of Omega.

    Each separation is the minimum cut closest to the prefix, so |A_i| is as small as
    possible; vertices no boundary vertex reaches end up in the last bag.
    """
    order = soc.omega
    n = len(order)
    g = soc.graph
    if n == 0:
        return LinearDecomposition((), ())
    if n == 1:
        return LinearDecomposition(order, (g.vertices,))
    seps = []
    for i in range(1, n):
        _, sep = disjoint_paths(g, order[:i], order[i:])
        seps.append(sep)
    bags = [seps[0].A]
    for i in range(1, n - 1):
        bags.append(seps[i].A & seps[i - 1].B)
    bags.append(seps[-1].B)
    return LinearDecomposition(order, tuple(frozenset(X) for X in bags), tuple(seps))


def adhesion(d: LinearDecomposition) -> int:
    return max((len(a & b) for a, b in zip(d.bags, d.bags[1:])), default=0)


def _is_boundary_order(soc: Society, order: Sequence) -> bool:
    if len(order) != soc.n or set(order) != soc.omega_set:
        return False
    if soc.n <= 2:
        return True
    k = soc.pos[order[0]]
    fwd = [soc.omega[(k + i) % soc.n] for i in range(soc.n)]
    bwd = [soc.omega[(k - i) % soc.n] for i in range(soc.n)]
    return list(order) in (fwd, bwd)


def validate_linear_decomposition(soc: Society, d: LinearDecomposition) -> list[str]:
    out: list[str] = []
    g = soc.graph
    if not _is_boundary_order(soc, d.order):
        out.append("order is not the boundary read around the cycle")
    if len(d.bags) != len(d.order):
        out.append("need exactly one bag per boundary vertex")
        return out
    if not d.bags:
        return out  # no boundary: nothing to decompose
    for i, (v, X) in enumerate(zip(d.order, d.bags)):
        if v not in X:
            out.append(f"bag {i} misses its boundary vertex")
    union = frozenset().union(*d.bags)
    if union != g.vertices:
        extra = union - g.vertices
        out.append("bags mention unknown vertices" if extra else "some vertex lies in no bag")
    for e, (u, v) in g.edges:
        if not any(u in X and v in X for X in d.bags):
            out.append(f"edge {e!r} lies in no bag")
    for x in sort_ids(union & g.vertices):
        idx = [i for i, X in enumerate(d.bags) if x in X]
        if idx[-1] - idx[0] + 1 != len(idx):
            out.append(f"bags holding {x!r} do not form an interval")
    return out


def nested_prefix_sides(d: LinearDecomposition) -> bool:
    """The prefix sides A_1 ⊆ A_2 ⊆ ... of the separations grow monotonically."""
    sides = [s.A for s in d.separations if isinstance(s, Separation)]
    return all(a <= b for a, b in zip(sides, sides[1:]))
