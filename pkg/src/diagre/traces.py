"""Reading, writing and replaying rewrite traces.

Two encodings are supported.  The document form is one JSON object with the
fields ``version``, ``mode``, ``signature``, ``initial``, ``steps`` and
``final``.  The line form (JSONL) puts the header fields on the first line,
one step per following line, and ``{"final": ...}`` last.  Terms are written
in the text grammar and positions as digit strings (0 = left of ⨾, 1 = right
of ⨾, 2 = left of ⊗, 3 = right of ⊗).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import DiagreError, NotApplicable, ParseError
from .measures import DecreaseReport, verify_decrease
from .permutation import interpret
from .rewrite import Mode, RewriteStep, RewriteTrace, RuleId, step
from .terms import EMPTY_SIGNATURE, position_from_str, position_to_str
from .textio import format_signature, parse_signature, parse_term, print_term

TRACE_VERSION = 1


def _header(trace: RewriteTrace) -> dict:
    sig = trace.signature or EMPTY_SIGNATURE
    return {
        "version": TRACE_VERSION,
        "mode": Mode(trace.mode).value,
        "signature": format_signature(sig),
        "initial": print_term(trace.initial),
    }


def _step_record(s: RewriteStep) -> dict:
    return {"rule": str(s.rule), "position": position_to_str(s.position), "after": print_term(s.after)}


def trace_to_dict(trace: RewriteTrace) -> dict:
    doc = _header(trace)
    doc["steps"] = [_step_record(s) for s in trace.steps]
    doc["final"] = print_term(trace.final)
    return doc


def dumps_trace(trace: RewriteTrace, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(trace_to_dict(trace), indent=1, ensure_ascii=False) + "\n"
    if fmt == "jsonl":
        lines = [json.dumps(_header(trace), ensure_ascii=False)]
        lines += [json.dumps(_step_record(s), ensure_ascii=False) for s in trace.steps]
        lines.append(json.dumps({"final": print_term(trace.final)}, ensure_ascii=False))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown trace format {fmt!r}")


def write_trace(trace: RewriteTrace, path: str) -> None:
    fmt = "jsonl" if str(path).endswith(".jsonl") else "json"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_trace(trace, fmt))


@dataclass
class TraceDocument:
    """A trace as read from disk, before any replay."""

    version: int
    mode: Mode
    signature_text: str
    initial: str
    steps: list = field(default_factory=list)
    final: Optional[str] = None


def parse_trace_text(text: str) -> TraceDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if doc is None or not isinstance(doc, dict) or "steps" not in doc:
        records = []
        for n, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise ParseError(f"trace line {n}: {e.msg}", line=n) from None
        if not records:
            raise ParseError("empty trace")
        doc = dict(records[0])
        doc["steps"] = [r for r in records[1:] if "rule" in r]
        finals = [r["final"] for r in records[1:] if "final" in r]
        doc["final"] = finals[-1] if finals else None
    try:
        return TraceDocument(
            int(doc.get("version", TRACE_VERSION)),
            Mode(doc.get("mode", "pro")),
            doc.get("signature", ""),
            doc["initial"],
            list(doc["steps"]),
            doc.get("final"),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise ParseError(f"malformed trace: {e}") from None


def read_trace(path: str) -> TraceDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_trace_text(fh.read())


def load_trace(doc: TraceDocument) -> RewriteTrace:
    """Parse every term of ``doc`` and rebuild the steps; no replay is done."""
    sig = parse_signature(doc.signature_text)
    current = parse_term(doc.initial, sig)
    initial = current
    steps = []
    for rec in doc.steps:
        after = parse_term(rec["after"], sig)
        steps.append(RewriteStep(RuleId.parse(rec["rule"]), position_from_str(rec["position"]), current, after))
        current = after
    final = parse_term(doc.final, sig) if doc.final is not None else current
    return RewriteTrace(initial, steps, final, doc.mode, sig)


@dataclass
class StepCheck:
    index: int
    rule: str
    position: str
    ok: bool
    report: Optional[DecreaseReport] = None
    problem: str = ""

    def line(self) -> str:
        where = self.position or "ε"
        if self.report is not None and not self.problem:
            return f"{self.index}: @{where} {self.report.line()}"
        return f"{self.index}: {self.rule} @{where} {self.problem} [FAIL]"


def verify_trace(doc: TraceDocument) -> tuple[bool, list[StepCheck]]:
    """Replay every step and check its measures.

    A step passes when its rule really applies at the recorded position,
    produces the recorded term, and satisfies ``verify_decrease``.  In perm
    mode the interpretation must also be unchanged.
    """
    sig = parse_signature(doc.signature_text)
    mode = doc.mode
    current = parse_term(doc.initial, sig)
    checks = []
    for i, rec in enumerate(doc.steps, start=1):
        rule, pos = rec.get("rule", "?"), rec.get("position", "")
        try:
            recorded = parse_term(rec["after"], sig)
            s = step(current, position_from_str(pos), RuleId.parse(rule), sig, mode)
        except NotApplicable as e:
            checks.append(StepCheck(i, rule, pos, False, problem=str(e)))
            break
        except (DiagreError, KeyError, ValueError) as e:
            checks.append(StepCheck(i, rule, pos, False, problem=f"unreadable step: {e}"))
            break
        if s.after != recorded:
            checks.append(StepCheck(i, rule, pos, False, problem="replay does not match the recorded term"))
            break
        report = verify_decrease(s, sig, mode)
        ok = report.ok
        problem = ""
        if mode == Mode.PERM and interpret(s.before) != interpret(s.after):
            ok = False
            problem = "interpretation changed"
        checks.append(StepCheck(i, str(s.rule), pos, ok, report, problem))
        current = s.after
    ok = all(c.ok for c in checks) and len(checks) == len(doc.steps)
    if ok and doc.final is not None and parse_term(doc.final, sig) != current:
        ok = False
        checks.append(StepCheck(len(checks) + 1, "final", "", False, problem="final term does not match the last step"))
    return ok, checks
