from __future__ import annotations

import json

from conftest import ab_signature
from diagre.rewrite import Mode, normalize
from diagre.terms import Gen, Seq, layer, preprocess
from diagre.textio import parse_term
from diagre.traces import dumps_trace, load_trace, parse_trace_text, read_trace, verify_trace, write_trace
from conftest import CF_EXAMPLE_TEXT, NF_EXAMPLE_TEXT


def _r10_trace():
    g1, g2 = Gen("g1", 1, 1), Gen("g2", 2, 3)
    t = Seq(layer(2, 0, g1), layer(0, 1, g2))
    from diagre.terms import Signature

    sig = Signature({"g1": (1, 1), "g2": (2, 3)})
    return normalize(t, sig, Mode.PRO)[1]


def test_r10_trace_verifies(tmp_path):
    trace = _r10_trace()
    assert [str(s.rule) for s in trace.steps] == ["R10"]
    path = tmp_path / "r10.json"
    write_trace(trace, str(path))
    ok, checks = verify_trace(read_trace(str(path)))
    assert ok and len(checks) == 1
    assert checks[0].line().startswith("1: @ε R10")
    assert checks[0].line().endswith("[OK]")


def test_both_formats_round_trip(tmp_path):
    sig = ab_signature()
    _, trace = normalize(preprocess(parse_term(NF_EXAMPLE_TEXT, sig)), sig, Mode.PRO)
    for name in ("t.json", "t.jsonl"):
        path = tmp_path / name
        write_trace(trace, str(path))
        doc = read_trace(str(path))
        back = load_trace(doc)
        assert back.initial == trace.initial and back.final == trace.final
        assert [(s.rule, s.position, s.after) for s in back.steps] == [
            (s.rule, s.position, s.after) for s in trace.steps
        ]
        ok, checks = verify_trace(doc)
        assert ok and len(checks) == len(trace)
    lines = (tmp_path / "t.jsonl").read_text().splitlines()
    assert len(lines) == len(trace) + 2
    assert "final" in json.loads(lines[-1])


def test_perm_trace_verifies():
    _, trace = normalize(preprocess(parse_term(CF_EXAMPLE_TEXT)), None, Mode.PERM)
    ok, checks = verify_trace(parse_trace_text(dumps_trace(trace)))
    assert ok and len(checks) == len(trace)


def test_tampered_trace_fails():
    doc = json.loads(dumps_trace(_r10_trace()))
    doc["steps"][0]["position"] = "1"
    ok, checks = verify_trace(parse_trace_text(json.dumps(doc)))
    assert not ok and "[FAIL]" in checks[0].line()
    doc = json.loads(dumps_trace(_r10_trace()))
    doc["steps"][0]["rule"] = "R11"
    assert not verify_trace(parse_trace_text(json.dumps(doc)))[0]
    doc = json.loads(dumps_trace(_r10_trace()))
    doc["final"] = doc["initial"]
    assert not verify_trace(parse_trace_text(json.dumps(doc)))[0]
