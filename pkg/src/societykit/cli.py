"""Command-line front end: analyses on society files, certificate checking and generators."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any, Sequence

from . import generators as gen
from .graph_core import (
    Cycle,
    Graph,
    GraspBinding,
    MinorModel,
    Path,
    grasp_ok,
    sort_ids,
    verify_minor_model,
)
from .renditions import (
    Cell,
    DiskRendition,
    _dec,
    _enc,
    rendition_from_json,
    rendition_to_json,
    rural_rendition,
    validate_rendition,
    vortex_society,
)
from .rerouting import LeapPattern, NotALeap, minimalize_leap, verify_leap
from .society import Society, SocietyFormatError, flip
from .strips import NotCrosscap, NotPlanar, is_isolated, strip_society, strip_society_crosscap
from .transactions import (
    Cross,
    OrderTooSmall,
    WitnessSearchBudgetExceeded,
    depth,
    depth_value,
    extract_monotone,
    find_cross,
    gm9,
    is_cross,
    is_crooked,
    is_crosscap,
    is_planar_transaction,
    is_transaction,
    make_transaction,
    nested_crosses_check,
    planar_or_crooked,
    strong_es,
)
from .vortex import LinearDecomposition, adhesion, linear_decomposition, validate_linear_decomposition
from .walls_cliques import (
    HypothesisViolated,
    RoutingFailed,
    certificate_json,
    clique_from_handles_crosscaps,
    clique_from_nested_crosses,
)

DEFAULT_BUDGET = 10**6


class InputError(Exception):
    pass


class SchemaMismatch(InputError):
    pass


class Negative(Exception):
    """A negative decision; carries the certificate to print."""

    def __init__(self, cert: dict, summary: str):
        super().__init__(summary)
        self.cert = cert
        self.summary = summary


# ---------------------------------------------------------------------------
# JSON helpers


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _society_from(obj: Any, where: str) -> Society:
    try:
        return Society.from_json(obj)
    except (SocietyFormatError, ValueError) as exc:
        raise InputError(f"{where}: {exc.args[0] if exc.args else exc}") from None


def paths_json(paths: Sequence[Path]) -> list:
    return [[_enc(v) for v in p.vertices] for p in paths]


def load_path(g: Graph, item: Any) -> Path:
    try:
        if isinstance(item, dict):
            p = Path(tuple(_dec(v) for v in item["vertices"]), tuple(item["edges"]))
            if not p.is_valid_in(g):
                raise ValueError("not a path of the graph")
            return p
        seq = [_dec(v) for v in item]
        if any(v not in g.vertices for v in seq):
            raise ValueError("unknown vertex")
        p = Path.from_vertices(g, seq)
        if len(set(seq)) != len(seq):
            raise ValueError("repeated vertex")
        return p
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad path {item!r}: {exc}") from None


def load_paths(g: Graph, arr: Any) -> list[Path]:
    if not isinstance(arr, list):
        raise InputError("expected a list of paths")
    return [load_path(g, x) for x in arr]


def load_cycle(g: Graph, item: Any) -> Cycle:
    try:
        return Cycle.from_vertices(g, [_dec(v) for v in item])
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad cycle: {exc}") from None


def _cert(kind: str, soc: Society, **payload) -> dict:
    out = {"v": 1, "kind": kind, "digest": soc.digest()}
    out.update(payload)
    return out


# ---------------------------------------------------------------------------
# relabelling generated objects to integer vertex ids


def _int_map(vertices) -> dict:
    return {v: i for i, v in enumerate(sort_ids(vertices))}


def relabel_society(soc: Society, m: dict) -> Society:
    g = soc.graph
    ng = Graph(frozenset(m[v] for v in g.vertices), tuple((e, (m[u], m[v])) for e, (u, v) in g.edges))
    return Society(ng, tuple(m[v] for v in soc.omega))


def relabel_rendition(r: DiskRendition, soc: Society, m: dict) -> DiskRendition:
    cells = tuple(
        Cell(c.id, tuple(m[v] for v in c.boundary), c.vortex, frozenset(m[v] for v in c.vertices), c.edges)
        for c in r.cells
    )
    rot = {(("n", m[x[1]]) if x[0] == "n" else x): d for x, d in r.rotation.items()}
    return type(r)(soc, cells, dict(r.tie_breaker), rot, r.c0)


def _needs_relabel(soc: Society) -> bool:
    return not all(isinstance(v, (int, str)) and not isinstance(v, bool) for v in soc.graph.vertices)


def society_json(soc: Society) -> dict:
    if _needs_relabel(soc):
        soc = relabel_society(soc, _int_map(soc.graph.vertices))
    return soc.to_json()


# ---------------------------------------------------------------------------
# instance files (society plus extra structure)


def load_instance(path: str) -> tuple[dict, Society]:
    obj = _read_json(path)
    if not isinstance(obj, dict) or "society" not in obj:
        raise InputError(f"{path}: an instance needs a 'society' object")
    return obj, _society_from(obj["society"], path)


def load_input(path: str) -> Society:
    """A society file, or the society embedded in an instance file."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "society" in obj:
        return _society_from(obj["society"], path)
    return _society_from(obj, path)


def _rendition(obj: dict, soc: Society, key: str = "rendition") -> DiskRendition:
    try:
        return rendition_from_json(soc, obj[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad rendition: {exc}") from None


# ---------------------------------------------------------------------------
# producers


def _depth_transaction(soc: Society, need: int) -> list[Path]:
    d, T = depth(soc)
    if d < need:
        raise Negative(
            _cert("depth", soc, value=d, transaction=paths_json(T.paths if T else ())),
            f"depth {d} is below the required {need}",
        )
    return list(T.paths)


def cmd_depth(a, soc: Society):
    d, T = depth(soc)
    return _cert("depth", soc, value=d, transaction=paths_json(T.paths if T else ())), f"depth {d}"


def cmd_cross(a, soc: Society):
    c = find_cross(soc, a.budget)
    if c is None:
        r = rural_rendition(soc)
        cert = _cert("cross", soc, found=False, rendition=rendition_to_json(r))
        raise Negative(cert, "no cross (rural)")
    return _cert("cross", soc, found=True, cross=paths_json([c.p1, c.p2])), "cross found"


def cmd_rural(a, soc: Society):
    r = rural_rendition(soc)
    if r is None:
        c = find_cross(soc, a.budget)
        raise Negative(_cert("rural-rendition", soc, found=False, cross=paths_json([c.p1, c.p2])), "not rural")
    return _cert("rural-rendition", soc, found=True, rendition=rendition_to_json(r)), "rural"


def cmd_crooked(a, soc: Society):
    T = _depth_transaction(soc, a.p + a.q - 2)
    cert = planar_or_crooked(soc, T, a.p, a.q)
    return (
        _cert("crooked", soc, outcome=cert.kind, p=a.p, q=a.q, paths=paths_json(cert.paths)),
        f"{cert.kind} of order {len(cert.paths)}",
    )


def cmd_gm9(a, soc: Society):
    cert = gm9(soc, a.p)
    if cert.kind == "crooked":
        out = _cert("gm9", soc, outcome="crooked", p=a.p, paths=paths_json(cert.paths))
    else:
        out = _cert("gm9", soc, outcome="rendition", p=a.p, rendition=rendition_to_json(cert.data["rendition"]))
    return out, f"gm9: {cert.kind}"


def cmd_monotone(a, soc: Society):
    T = _depth_transaction(soc, (a.s - 1) * (a.t - 1) + 1)
    cert = extract_monotone(soc, make_transaction(soc, T), a.s, a.t)
    return (
        _cert("monotone", soc, outcome=cert.kind, s=a.s, t=a.t, paths=paths_json(cert.paths)),
        f"{cert.kind} of order {len(cert.paths)}",
    )


_ES_KEYS = ("k", "l", "k_star", "l_star", "q", "q_star", "s", "s_star")


def cmd_strong_es(a, soc: Society):
    params = {k: getattr(a, k) for k in _ES_KEYS}
    sp = max(a.s, a.s_star)
    need = (a.k + 2 * a.q) * a.l * (a.k_star + 2 * a.q_star) * a.l_star * sp
    d, T = depth(soc)
    if T is None or d < need:
        raise Negative(_cert("strong-es", soc, found=False, depth=d, need=need), f"depth {d} below {need}")
    cert = strong_es(soc, T.paths, T.A, T.B, **params)
    payload = {"found": True, "outcome": cert.kind, "flipped": cert.data["flipped"], "X1": [_enc(v) for v in T.A]}
    payload["params"] = params
    if cert.kind == "leap":
        pat = cert.data["pattern"]
        payload.update(P=paths_json(pat.P), Q=paths_json(pat.Q))
    else:
        payload["paths"] = paths_json(cert.paths)
    return _cert("strong-es", soc, **payload), f"strong-es: {cert.kind}"


def _leap_instance(obj: dict, soc: Society) -> tuple[LeapPattern, bool]:
    g = soc.graph
    try:
        k, l = int(obj["k"]), int(obj["l"])
    except (KeyError, TypeError, ValueError):
        raise InputError("a leap instance needs integer 'k' and 'l'") from None
    P, Q = load_paths(g, obj.get("P", [])), load_paths(g, obj.get("Q", []))
    return LeapPattern(tuple(P), tuple(Q), k, l), bool(obj.get("twisted", False))


def cmd_leap_verify(a, obj: dict, soc: Society):
    pat, tw = _leap_instance(obj, soc)
    ok = verify_leap(soc, pat, pat.k, pat.l, tw)
    cert = _cert("leap", soc, valid=ok, k=pat.k, l=pat.l, twisted=tw, P=paths_json(pat.P), Q=paths_json(pat.Q))
    if not ok:
        raise Negative(cert, "not a leap pattern")
    return cert, "valid leap pattern"


def cmd_leap_min(a, obj: dict, soc: Society):
    pat, _ = _leap_instance(obj, soc)
    try:
        out = minimalize_leap(soc, pat)
    except NotALeap:
        cert = _cert("leap", soc, valid=False, k=pat.k, l=pat.l, twisted=False, P=paths_json(pat.P), Q=paths_json(pat.Q))
        raise Negative(cert, "not a leap pattern") from None
    cert = _cert("leap", soc, valid=True, k=out.k, l=out.l, twisted=False, P=paths_json(out.P), Q=paths_json(out.Q))
    return cert, f"minimal pattern with {len(out.P)} + {len(out.Q)} paths"


def _strip(soc: Society, T: list[Path]):
    if is_planar_transaction(soc, T):
        return strip_society(soc, T), None
    if is_crosscap(soc, T):
        tr = make_transaction(soc, T)
        return strip_society_crosscap(soc, T, tr.A, tr.B), (tr.A, tr.B)
    return None, None


def cmd_strip(a, soc: Society):
    if a.transaction:
        T = load_paths(soc.graph, _read_json(a.transaction))
    else:
        _, tr = depth(soc)
        T = list(tr.paths) if tr else []
    reason = "no monotone transaction"
    try:
        st, _ = _strip(soc, T) if len(T) >= 2 else (None, None)
    except (NotPlanar, NotCrosscap) as exc:
        st, reason = None, str(exc)
    if st is None:
        raise Negative(_cert("strip", soc, found=False, transaction=paths_json(T)), reason)
    cert = _cert(
        "strip",
        soc,
        found=True,
        transaction=paths_json(T),
        strip=st.society.to_json(),
        paths=paths_json(st.paths),
        isolated=is_isolated(soc, st),
    )
    return cert, f"strip with {len(st.society.graph.vertices)} vertices"


def cmd_lindecomp(a, soc: Society):
    d = linear_decomposition(soc)
    cert = _cert("lindecomp", soc, decomposition=d.to_json(), adhesion=adhesion(d))
    return cert, f"adhesion {adhesion(d)}"


def cmd_rendition_validate(a, soc: Society):
    obj = _read_json(a.rendition)
    if isinstance(obj, dict) and "rendition" in obj and "cells" not in obj:
        obj = obj["rendition"]
    r = _rendition({"rendition": obj}, soc)
    bad = validate_rendition(soc, r)
    cert = _cert("rendition-validate", soc, valid=not bad, violations=bad, rendition=rendition_to_json(r))
    if bad:
        raise Negative(cert, f"{len(bad)} violation(s)")
    return cert, "valid rendition"


def _nest_and(obj: dict, soc: Society, key: str) -> tuple:
    g = soc.graph
    try:
        nest = [load_cycle(g, c) for c in obj["nest"]]
        p = int(obj["p"])
        extra = obj[key]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"instance needs 'nest', 'p' and '{key}'") from None
    return nest, p, extra


def cmd_clique_nested(a, obj: dict, soc: Society):
    g = soc.graph
    nest, p, _ = _nest_and(obj, soc, "N")
    r = _rendition(obj, soc)
    P, N = load_paths(g, obj.get("P")), load_paths(g, obj.get("N"))
    tw = obj.get("twisted")
    res = clique_from_nested_crosses(r, nest, P, N, p, None if tw is None else bool(tw))
    cert = _cert("clique", soc, source="nested-crosses", p=p, rows="nest", cols="P", model=certificate_json(res))
    return cert, f"K{p} model"


def cmd_clique_handles(a, obj: dict, soc: Society):
    g = soc.graph
    nest, p, raw = _nest_and(obj, soc, "transactions")
    r = _rendition(obj, soc)
    trans = [load_paths(g, T) for T in raw]
    segs = [[_dec(v) for v in X] for X in obj.get("segments", [])]
    res = clique_from_handles_crosscaps(r, nest, trans, segs, p)
    cert = _cert(
        "clique",
        soc,
        source="handles-crosscaps",
        p=p,
        rows="nest",
        cols="transactions",
        trace=[[s, k] for s, k in res.trace],
        model=certificate_json(res),
    )
    return cert, f"K{p} model after {len(res.trace)} linking steps"


# ---------------------------------------------------------------------------
# verification


def _need(cert: dict, *keys: str) -> None:
    for k in keys:
        if k not in cert:
            raise SchemaMismatch(f"certificate of kind {cert.get('kind')!r} lacks {k!r}")


def _check_paths(soc: Society, arr) -> list[Path] | None:
    try:
        return load_paths(soc.graph, arr)
    except InputError:
        return None


def _verify_clique(cert: dict, obj: dict | None, soc: Society) -> bool:
    _need(cert, "model", "rows", "cols")
    if obj is None:
        raise SchemaMismatch("clique certificates are checked against their instance file")
    g = soc.graph
    m = cert["model"]
    try:
        bs = tuple(frozenset(_dec(v) for v in X) for X in m["branch_sets"])
        wit = tuple((int(i), int(j), e) for i, j, e in m["witness_edges"])
        grasp = m["grasped"]
        assignment = tuple(tuple((int(i), int(j)) for i, j in pairs) for pairs in grasp["assignment"])
    except (KeyError, TypeError, ValueError):
        raise SchemaMismatch("malformed clique model") from None
    model = MinorModel(bs, wit)
    if not verify_minor_model(g, model):
        return False
    rows = [c for c in obj.get("nest", [])]
    if cert["cols"] == "P":
        cols = obj.get("P", [])
    else:
        cols = [q for T in obj.get("transactions", []) for q in T]
    rows = [tuple(_dec(v) for v in x) for x in rows]
    cols = [tuple(_dec(v) for v in x) for x in cols]
    b = GraspBinding(tuple(rows), tuple(cols), assignment, grasp.get("mode", "nest"))
    return grasp_ok(g, model, b)


def verify_certificate(cert: dict, soc: Society, obj: dict | None = None) -> bool:
    """Re-run the predicate behind a certificate. Raises SchemaMismatch on malformed input."""
    if not isinstance(cert, dict) or cert.get("v") != 1 or "kind" not in cert:
        raise SchemaMismatch("not a version-1 certificate")
    if cert.get("digest") != soc.digest():
        return False
    kind = cert["kind"]
    if kind == "depth":
        _need(cert, "value", "transaction")
        T = _check_paths(soc, cert["transaction"])
        if T is None or len(T) != cert["value"] or (T and not is_transaction(soc, T)):
            return False
        return depth_value(soc) == cert["value"]
    if kind in ("cross", "rural-rendition"):
        _need(cert, "found")
        positive = cert["found"] if kind == "cross" else not cert["found"]
        if positive:
            _need(cert, "cross")
            ps = _check_paths(soc, cert["cross"])
            return ps is not None and len(ps) == 2 and is_cross(soc, Cross(ps[0], ps[1]))
        _need(cert, "rendition")
        r = _rendition(cert, soc)
        return not validate_rendition(soc, r) and not r.vortices()
    if kind == "crooked":
        _need(cert, "outcome", "paths", "p", "q")
        ps = _check_paths(soc, cert["paths"])
        if ps is None:
            return False
        if cert["outcome"] == "planar":
            return len(ps) == cert["p"] and is_planar_transaction(soc, ps)
        return len(ps) >= cert["q"] and is_transaction(soc, ps) and is_crooked(soc, ps)
    if kind == "gm9":
        _need(cert, "outcome", "p")
        p = cert["p"]
        if cert["outcome"] == "crooked":
            _need(cert, "paths")
            ps = _check_paths(soc, cert["paths"])
            return ps is not None and len(ps) >= p and is_transaction(soc, ps) and is_crooked(soc, ps)
        _need(cert, "rendition")
        r = _rendition(cert, soc)
        if validate_rendition(soc, r):
            return False
        return all(depth_value(vortex_society(r, c.id)) <= 6 * p for c in r.vortices())
    if kind == "monotone":
        _need(cert, "outcome", "paths", "s", "t")
        ps = _check_paths(soc, cert["paths"])
        if ps is None:
            return False
        if cert["outcome"] == "crosscap":
            return len(ps) == cert["s"] and is_crosscap(soc, ps)
        return len(ps) == cert["t"] and is_planar_transaction(soc, ps)
    if kind == "strong-es":
        _need(cert, "found")
        if not cert["found"]:
            return depth_value(soc) < cert.get("need", 0)
        _need(cert, "outcome", "flipped", "X1", "params")
        pr = cert["params"]
        wsoc = flip(soc, [_dec(v) for v in cert["X1"]]) if cert["flipped"] else soc
        k, l = (pr["k_star"], pr["l_star"]) if cert["flipped"] else (pr["k"], pr["l"])
        q = pr["q_star"] if cert["flipped"] else pr["q"]
        if cert["outcome"] == "leap":
            P, Q = _check_paths(soc, cert["P"]), _check_paths(soc, cert["Q"])
            return P is not None and Q is not None and verify_leap(wsoc, (P, Q), k, l)
        ps = _check_paths(soc, cert["paths"])
        if ps is None:
            return False
        if cert["outcome"] == "planar":
            return len(ps) >= min(pr["s"], pr["s_star"]) and is_planar_transaction(wsoc, ps)
        return nested_crosses_check(wsoc, ps, q) is not None
    if kind == "leap":
        _need(cert, "valid", "k", "l", "P", "Q")
        P, Q = _check_paths(soc, cert["P"]), _check_paths(soc, cert["Q"])
        if P is None or Q is None:
            return False
        return verify_leap(soc, (P, Q), cert["k"], cert["l"], bool(cert.get("twisted"))) == bool(cert["valid"])
    if kind == "strip":
        _need(cert, "found", "transaction")
        T = _check_paths(soc, cert["transaction"])
        if T is None:
            return False
        try:
            st, _ = _strip(soc, T) if len(T) >= 2 else (None, None)
        except (NotPlanar, NotCrosscap):
            st = None
        if not cert["found"]:
            return st is None
        _need(cert, "strip", "paths")
        return st is not None and st.society.to_json() == cert["strip"] and paths_json(st.paths) == cert["paths"]
    if kind == "lindecomp":
        _need(cert, "decomposition", "adhesion")
        try:
            d = LinearDecomposition.from_json(cert["decomposition"])
        except (KeyError, TypeError):
            raise SchemaMismatch("malformed decomposition") from None
        return not validate_linear_decomposition(soc, d) and adhesion(d) == cert["adhesion"]
    if kind == "rendition-validate":
        _need(cert, "valid", "rendition")
        r = _rendition(cert, soc)
        return (not validate_rendition(soc, r)) == bool(cert["valid"])
    if kind == "clique":
        return _verify_clique(cert, obj, soc)
    raise SchemaMismatch(f"unknown certificate kind {kind!r}")


def cmd_verify(a):
    cert = _read_json(a.certificate)
    target = _read_json(a.input)
    obj = target if isinstance(target, dict) and "society" in target else None
    soc = _society_from(obj["society"] if obj else target, a.input)
    ok = verify_certificate(cert, soc, obj)
    kind = cert.get("kind")
    out = {"v": 1, "kind": "verify", "of": kind, "digest": soc.digest(), "ok": ok}
    if not ok:
        raise Negative(out, f"{kind} certificate rejected")
    return out, f"{kind} certificate ok"


# ---------------------------------------------------------------------------
# generators


def _instance_json(soc: Society, r: DiskRendition, **parts) -> dict:
    m = _int_map(soc.graph.vertices)
    nsoc = relabel_society(soc, m)
    nr = relabel_rendition(r, nsoc, m)
    out = {"v": 1, "society": nsoc.to_json(), "rendition": rendition_to_json(nr)}
    for key, val in parts.items():
        out[key] = _relabel_any(val, m)
    return out


def _relabel_any(x, m: dict):
    if isinstance(x, (Path, Cycle)):
        return [m[v] for v in x.vertices]
    if isinstance(x, list):
        return [_relabel_any(y, m) for y in x]
    return m[x]


def cmd_gen(a):
    rng = random.Random(a.seed)
    kind = a.kind
    if kind == "ladder":
        return society_json(gen.ladder(a.n))
    if kind == "crosscap":
        return society_json(gen.crosscap_chords(a.n))
    if kind == "planar":
        return society_json(gen.planar_chords(a.n))
    if kind == "random":
        return society_json(gen.random_society(rng, a.n))
    if kind == "leap":
        soc, pat = gen.leap_pattern(rng, a.k, a.l)
        m = _int_map(soc.graph.vertices)
        return {
            "v": 1,
            "society": relabel_society(soc, m).to_json(),
            "P": [[m[v] for v in p.vertices] for p in pat.P],
            "Q": [[m[v] for v in q.vertices] for q in pat.Q],
            "k": pat.k,
            "l": pat.l,
        }
    if kind == "nested-crosses":
        cf = gen.nested_crosses_fixture(a.p, a.twisted)
        fx = cf.fixture
        inst = _instance_json(fx.society, fx.rendition, nest=list(fx.nest), P=list(fx.spokes), N=list(cf.N))
        inst.update(p=a.p, twisted=a.twisted)
        return inst
    if kind == "gadgets":
        gf = gen.gadget_ring(a.p, a.kinds, rng)
        fx = gf.fixture
        m = _int_map(fx.society.graph.vertices)
        inst = _instance_json(fx.society, fx.rendition, nest=list(fx.nest))
        inst["transactions"] = [[[m[v] for v in q.vertices] for q in T] for T in gf.transactions]
        inst["segments"] = [[m[v] for v in X] for X in gf.segments]
        inst.update(p=a.p, kinds=gf.kinds)
        return inst
    raise gen.BadParams(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# entry point


def _budget(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("SOCIETYKIT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError("SOCIETYKIT_BUDGET must be an integer") from None
    return DEFAULT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--json", action="store_true", help="print the certificate as JSON")
    common.add_argument("--quiet", action="store_true", help="print nothing; use the exit code")
    ap = argparse.ArgumentParser(prog="societykit", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, inp: str | None = "society"):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if inp:
            sp.add_argument(inp)
        return sp

    add("depth", "largest transaction order")
    add("cross", "find a cross, or a rural rendition")
    add("rural", "vortex-free disk rendition, or a cross")
    sp = add("crooked", "planar or crooked sub-transaction")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=2)
    sp = add("gm9", "crooked transaction or shallow cylindrical rendition")
    sp.add_argument("--p", type=int, default=4)
    sp = add("monotone", "crosscap or planar sub-transaction")
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--t", type=int, default=2)
    sp = add("strong-es", "leap, nested crosses or planar, possibly after a flip")
    for k, default in zip(_ES_KEYS, (1, 1, 1, 1, 0, 0, 2, 2)):
        sp.add_argument("--" + k.replace("_", "-"), dest=k, type=int, default=default)
    add("leap-verify", "check a leap pattern instance", "instance")
    add("leap-min", "shrink P of a leap pattern instance", "instance")
    sp = add("strip", "strip society around a monotone transaction")
    sp.add_argument("--transaction", default=None, help="JSON list of paths")
    add("lindecomp", "linear decomposition of the society")
    sp = add("rendition-validate", "check a rendition against a society")
    sp.add_argument("rendition")
    add("clique-nested", "K_p from nested crosses", "instance")
    add("clique-handles", "K_p from handles and crosscaps", "instance")
    sp = add("verify", "re-check a certificate", None)
    sp.add_argument("certificate")
    sp.add_argument("input", help="society or instance file")
    sp = add("gen", "generate a society or instance", None)
    sp.add_argument("--kind", required=True, choices=["ladder", "crosscap", "planar", "random", "leap", "nested-crosses", "gadgets"])
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--l", type=int, default=2)
    sp.add_argument("--kinds", default=None, help="c/h letters, one per gadget")
    sp.add_argument("--twisted", action="store_true")
    return ap


_SOCIETY_CMDS = {
    "depth": cmd_depth,
    "cross": cmd_cross,
    "rural": cmd_rural,
    "crooked": cmd_crooked,
    "gm9": cmd_gm9,
    "monotone": cmd_monotone,
    "strong-es": cmd_strong_es,
    "strip": cmd_strip,
    "lindecomp": cmd_lindecomp,
    "rendition-validate": cmd_rendition_validate,
}
_INSTANCE_CMDS = {
    "leap-verify": cmd_leap_verify,
    "leap-min": cmd_leap_min,
    "clique-nested": cmd_clique_nested,
    "clique-handles": cmd_clique_handles,
}


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        a = ap.parse_args(list(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    code, cert, summary = 0, None, ""
    try:
        a.budget = _budget(a.budget)
        if a.command == "gen":
            cert, summary = cmd_gen(a), ""
            a.json = True
        elif a.command == "verify":
            cert, summary = cmd_verify(a)
        elif a.command in _INSTANCE_CMDS:
            obj, soc = load_instance(a.instance)
            cert, summary = _INSTANCE_CMDS[a.command](a, obj, soc)
        else:
            soc = load_input(a.society)
            cert, summary = _SOCIETY_CMDS[a.command](a, soc)
    except Negative as neg:
        code, cert, summary = 2, neg.cert, neg.summary
    except (InputError, gen.BadParams, OrderTooSmall, HypothesisViolated) as exc:
        if not a.quiet:
            print(f"error: {exc}", file=err)
        return 1
    except (RoutingFailed, WitnessSearchBudgetExceeded) as exc:
        if not a.quiet:
            print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 1
    except ValueError as exc:
        if not a.quiet:
            print(f"error: {exc}", file=err)
        return 1
    if not a.quiet:
        print(dumps(cert) if a.json else summary, file=out)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
