"""Strip societies carved out around planar and crosscap transactions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph_core import Graph, Path, h_bridges, sort_ids
from .society import Society
from .transactions import crosses, is_planar_transaction, make_transaction, planar_labelling


class NotPlanar(ValueError):
    pass


class NotCrosscap(ValueError):
    pass


class TooSmall(ValueError):
    pass


class ProvenanceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class StripSociety:
    society: Society
    boundary_paths: tuple  # (P_1, P_n)
    paths: tuple  # P_1..P_n oriented a_i -> b_i
    parent_digest: str
    segments: tuple = ()  # (X1, X2) for the crosscap construction

    @property
    def interior(self) -> frozenset:
        """Strip vertices off the two boundary paths."""
        p1, pn = self.boundary_paths
        return self.society.graph.vertices - p1.vertex_set - pn.vertex_set


def _carve(soc: Society, paths: Sequence[Path], arc1: tuple, arc2: tuple, omega1: tuple) -> Graph:
    g = soc.graph
    hv = frozenset(v for p in paths for v in p.vertices) | soc.omega_set
    he = frozenset(e for p in paths for e in p.edges)
    h1v = frozenset(v for p in paths for v in p.vertices) | frozenset(arc1) | frozenset(arc2)
    outer_paths = paths[0].vertex_set | paths[-1].vertex_set
    vs = set(h1v)
    es = set(he)
    for b in h_bridges(g, hv, he):
        if not (b.attachments & (h1v - outer_paths)):
            continue
        keep_att = b.attachments & h1v
        vs |= b.vertices | keep_att
        for e in b.edges:
            u, v = g.ends[e]
            if (u in b.vertices or u in keep_att) and (v in b.vertices or v in keep_att):
                es.add(e)
    return Graph(frozenset(vs), tuple((e, g.ends[e]) for e in sort_ids(es)))


def strip_society(soc: Society, T: Sequence[Path]) -> StripSociety:
    paths = list(T)
    if len(paths) < 2:
        raise TooSmall("a strip needs at least two paths")
    if not is_planar_transaction(soc, paths):
        raise NotPlanar("transaction is not planar")
    lab = planar_labelling(soc, make_transaction(soc, paths))
    a1, an = lab[0].start, lab[-1].start
    bn, b1 = lab[-1].end, lab[0].end
    arc1, arc2 = soc.arc(a1, an), soc.arc(bn, b1)
    keep = set(arc1) | set(arc2)
    omega1 = tuple(v for v in soc.omega if v in keep)
    g1 = _carve(soc, lab, arc1, arc2, omega1)
    return StripSociety(Society(g1, omega1), (lab[0], lab[-1]), tuple(lab), soc.digest())


def strip_society_crosscap(soc: Society, T: Sequence[Path], X1: Sequence, X2: Sequence) -> StripSociety:
    paths = list(T)
    if len(paths) < 2:
        raise TooSmall("a strip needs at least two paths")
    X1o, X2o = soc.segment_order(X1), soc.segment_order(X2)
    if set(X1o) & set(X2o):
        raise NotCrosscap("segments overlap")
    r1 = {v: i for i, v in enumerate(X1o)}
    r2 = {v: i for i, v in enumerate(X2o)}
    oriented = []
    for p in paths:
        if p.start in r1 and p.end in r2:
            oriented.append(p)
        elif p.end in r1 and p.start in r2:
            oriented.append(p.reversed())
        else:
            raise NotCrosscap("a member does not run from X1 to X2")
    oriented.sort(key=lambda p: r1[p.start])
    if [r2[p.end] for p in oriented] != sorted(r2[p.end] for p in oriented):
        raise NotCrosscap("endpoint orders on X1 and X2 disagree")
    if not all(crosses(soc, p, q) for i, p in enumerate(oriented) for q in oriented[i + 1 :]):
        raise NotCrosscap("members do not pairwise cross")
    a1, an = oriented[0].start, oriented[-1].start
    b1, bn = oriented[0].end, oriented[-1].end
    arc1, arc2 = soc.arc(a1, an), soc.arc(b1, bn)
    omega1 = tuple(arc1) + tuple(reversed(arc2))
    g1 = _carve(soc, oriented, arc1, arc2, omega1)
    return StripSociety(
        Society(g1, omega1), (oriented[0], oriented[-1]), tuple(oriented), soc.digest(), (X1o, X2o)
    )


def is_isolated(soc: Society, strip: StripSociety) -> bool:
    if strip.parent_digest != soc.digest():
        raise ProvenanceMismatch("strip was built from a different society")
    inside = strip.society.graph.vertices
    core = strip.interior
    for _, (u, v) in soc.graph.edges:
        if (u in core and v not in inside) or (v in core and u not in inside):
            return False
    return True
