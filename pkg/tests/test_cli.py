import io
import json

import pytest

from societykit.cli import run
from societykit.society import Society


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def gen(tmp_path, name, *args):
    code, text, _ = call("gen", *args)
    assert code == 0
    path = tmp_path / name
    path.write_text(text)
    return path


def cert_of(tmp_path, name, *argv):
    code, text, _ = call(*argv, "--json")
    path = tmp_path / name
    path.write_text(text)
    return code, json.loads(text), path


def test_gen_relabels_to_integers(tmp_path):
    path = gen(tmp_path, "nc.json", "--kind", "nested-crosses", "--p", "1")
    obj = json.loads(path.read_text())
    soc = Society.from_json(obj["society"])
    assert all(isinstance(v, int) for v in soc.graph.vertices)
    assert sorted(soc.graph.vertices) == list(range(len(soc.graph.vertices)))
    assert {"rendition", "nest", "P", "N", "p", "twisted"} <= set(obj)


@pytest.mark.parametrize(
    "argv",
    [
        ("depth",),
        ("crooked", "--p", "2", "--q", "3"),
        ("monotone", "--s", "2", "--t", "2"),
        ("lindecomp",),
        ("gm9",),
        ("strip",),
    ],
)
def test_society_commands_verify(tmp_path, argv):
    soc = gen(tmp_path, "ladder.json", "--kind", "ladder", "--n", "5")
    code, cert, cpath = cert_of(tmp_path, "c.json", *argv, soc)
    assert code == 0 and cert["v"] == 1 and cert["digest"]
    assert call("verify", cpath, soc)[0] == 0


def test_cross_and_rural_are_dual(tmp_path):
    cc = gen(tmp_path, "cc.json", "--kind", "crosscap", "--n", "3")
    pl = gen(tmp_path, "pl.json", "--kind", "planar", "--n", "3")
    assert cert_of(tmp_path, "a.json", "cross", cc)[0] == 0
    code, cert, cpath = cert_of(tmp_path, "b.json", "cross", pl)
    assert code == 2 and cert["kind"] == "cross" and cert["found"] is False
    assert call("verify", cpath, pl)[0] == 0
    code, cert, cpath = cert_of(tmp_path, "c.json", "rural", cc)
    assert code == 2 and cert["kind"] == "rural-rendition" and "cross" in cert
    assert call("verify", cpath, cc)[0] == 0


def test_tampered_certificate_is_rejected(tmp_path):
    soc = gen(tmp_path, "ladder.json", "--kind", "ladder", "--n", "4")
    _, cert, cpath = cert_of(tmp_path, "c.json", "depth", soc)
    cert["value"] += 1
    cpath.write_text(json.dumps(cert))
    assert call("verify", cpath, soc)[0] == 2
    other = gen(tmp_path, "other.json", "--kind", "ladder", "--n", "5")
    _, cert, cpath = cert_of(tmp_path, "d.json", "depth", soc)
    assert call("verify", cpath, other)[0] == 2


def test_schema_and_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [1],\n  "edges": [[1 2]]}')
    code, _, err = call("depth", bad)
    assert code == 1 and "bad.json:2:" in err
    odd = tmp_path / "odd.json"
    odd.write_text(json.dumps({"vertices": [1], "edges": []}))
    assert call("depth", odd)[0] == 1
    soc = gen(tmp_path, "ladder.json", "--kind", "ladder", "--n", "4")
    junk = tmp_path / "junk.json"
    digest = Society.from_json(json.loads(soc.read_text())).digest()
    junk.write_text(json.dumps({"v": 1, "kind": "nonsense", "digest": digest}))
    assert call("verify", junk, soc)[0] == 1
    junk.write_text(json.dumps({"v": 1, "kind": "depth", "digest": digest}))
    assert call("verify", junk, soc)[0] == 1
    junk.write_text(json.dumps({"v": 1, "kind": "depth", "digest": "0" * 16, "value": 0, "transaction": []}))
    assert call("verify", junk, soc)[0] == 2
    assert call("depth", tmp_path / "missing.json")[0] == 1


def test_negative_when_depth_is_too_small(tmp_path):
    soc = gen(tmp_path, "ladder.json", "--kind", "ladder", "--n", "2")
    code, cert, _ = cert_of(tmp_path, "c.json", "monotone", "--s", "3", "--t", "3", soc)
    assert code == 2 and cert["kind"] == "depth"


def test_quiet_and_budget(tmp_path, monkeypatch):
    soc = gen(tmp_path, "ladder.json", "--kind", "ladder", "--n", "3")
    assert call("depth", soc, "--quiet") == (0, "", "")
    monkeypatch.setenv("SOCIETYKIT_BUDGET", "lots")
    assert call("depth", soc)[0] == 1
    monkeypatch.setenv("SOCIETYKIT_BUDGET", "10")
    assert call("depth", soc)[0] == 0


def test_bad_generator_parameters():
    assert call("gen", "--kind", "gadgets", "--p", "2", "--kinds", "cx")[0] == 1
    assert call("gen", "--kind", "unknown")[0] == 1
    assert call("nonsense")[0] == 1


def test_leap_commands(tmp_path):
    inst = gen(tmp_path, "leap.json", "--kind", "leap", "--k", "2", "--l", "1", "--seed", "4")
    for cmd in ("leap-verify", "leap-min"):
        code, cert, cpath = cert_of(tmp_path, cmd + ".json", cmd, inst)
        assert code == 0
        assert call("verify", cpath, inst)[0] == 0


def test_clique_handles_command(tmp_path):
    inst = gen(tmp_path, "gad.json", "--kind", "gadgets", "--p", "2", "--kinds", "chch")
    code, cert, cpath = cert_of(tmp_path, "c.json", "clique-handles", inst)
    assert code == 0 and len(cert["model"]["branch_sets"]) == 2
    assert call("verify", cpath, inst)[0] == 0


def test_rendition_validate(tmp_path):
    inst = gen(tmp_path, "nc.json", "--kind", "nested-crosses", "--p", "1")
    code, cert, cpath = cert_of(tmp_path, "c.json", "rendition-validate", inst, inst)
    assert code == 0 and cert["valid"] is True
    assert call("verify", cpath, inst)[0] == 0
