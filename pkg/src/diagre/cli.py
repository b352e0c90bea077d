"""Command-line interface.

Exit codes: 0 success, 1 negative verdict or failed check, 2 malformed input,
3 a term outside the mode's language (a state/effect generator, or a
generator in perm mode), 4 step budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from typing import Optional

from . import oracle as oracle_mod
from .errors import (
    DiagreError,
    NotSymmetryOnly,
    StateOrEffect,
    StepBudgetExceeded,
)
from .measures import measure_tuple
from .permutation import ADOPTED, LITERAL, cf, interpret
from .render import render
from .rewrite import Mode, check_mode, equiv, normalize, parse_strategy
from .terms import (
    EMPTY_SIGNATURE,
    Signature,
    check_symmetry_only,
    generators_of,
    is_canonical_form,
    is_normal_form,
    is_preprocessed,
    preprocess,
)
from .textio import parse_signature, parse_term, print_term
from .traces import read_trace, verify_trace, write_trace

log = logging.getLogger("diagre")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_LANGUAGE = 3
EXIT_BUDGET = 4

DEFAULT_ORACLE_SIGNATURE = "A : 1 -> 1\nB : 2 -> 2\n"


def _text_arg(value: str) -> str:
    """A term argument: literal text, ``-`` for stdin, or ``@path``."""
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            return fh.read()
    return value


def _signature(path: Optional[str]) -> Signature:
    if not path:
        return EMPTY_SIGNATURE
    with open(path, encoding="utf-8") as fh:
        return parse_signature(fh.read())


def _seed(args) -> Optional[int]:
    env = os.environ.get("DIAGRE_SEED")
    if env:
        return int(env)
    return args.seed


def _strategy(args):
    return parse_strategy(args.strategy, _seed(args))


def _out(args, t) -> None:
    print(print_term(t, unicode=args.unicode))


# ----------------------------------------------------------------- commands


def cmd_normalize(args) -> int:
    sig = _signature(args.sig)
    t = parse_term(_text_arg(args.term), sig)
    mode = Mode(args.mode)
    check_mode(t, mode)
    result, trace = normalize(preprocess(t), sig, mode, _strategy(args), args.max_steps)
    if args.trace:
        write_trace(trace, args.trace)
    log.info("%d steps", len(trace))
    _out(args, result)
    return EXIT_OK


def cmd_canonize(args) -> int:
    t = parse_term(_text_arg(args.term), EMPTY_SIGNATURE)
    check_symmetry_only(t)
    result, trace = normalize(preprocess(t), None, Mode.PERM, _strategy(args), args.max_steps)
    if args.trace:
        write_trace(trace, args.trace)
    expected = cf(interpret(t))
    if result != expected:
        print(f"engine result {print_term(result)} differs from cf(interpret) {print_term(expected)}", file=sys.stderr)
        _out(args, result)
        return EXIT_NEGATIVE
    _out(args, result)
    return EXIT_OK


def cmd_equiv(args) -> int:
    sig = _signature(args.sig)
    t1 = parse_term(_text_arg(args.t1), sig)
    t2 = parse_term(_text_arg(args.t2), sig)
    same, traces = equiv(t1, t2, sig, Mode(args.mode), _strategy(args))
    if args.traces and traces is not None:
        for path, tr in zip(args.traces, traces):
            write_trace(tr, path)
    print("EQUIVALENT" if same else "DISTINCT")
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_interpret(args) -> int:
    t = parse_term(_text_arg(args.term), EMPTY_SIGNATURE)
    print(interpret(t, LITERAL if args.literal_swap else ADOPTED))
    return EXIT_OK


def cmd_measures(args) -> int:
    sig = _signature(args.sig)
    t = parse_term(_text_arg(args.term), sig)
    m = measure_tuple(t, sig, Mode(args.mode))
    print(f"α={m.alpha} β={m.beta} γ={m.gamma} δ={m.delta} D={m.d_param}")
    return EXIT_OK


def cmd_verify_trace(args) -> int:
    doc = read_trace(args.file)
    ok, checks = verify_trace(doc)
    for c in checks:
        print(c.line())
    print(f"{len(checks)} steps checked, {'all OK' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    mode = Mode(args.mode)
    failed = False
    t0 = time.perf_counter()
    if mode == Mode.PERM:
        sig = None
        atoms = oracle_mod.perm_atoms(args.max_wires)
    else:
        if args.sig:
            sig = _signature(args.sig)
        else:
            sig = parse_signature(DEFAULT_ORACLE_SIGNATURE)
        atoms = oracle_mod.pro_atoms(sig, args.max_wires)
    terms = oracle_mod.enumerate_terms(atoms, args.max_atoms, args.max_wires)
    if mode == Mode.PRO:
        terms = [t for t in terms if all(g.dom > 0 and g.cod > 0 for g in generators_of(t))]
    report = oracle_mod.check_confluence(
        terms, mode, sig, search="explicit" if args.explicit else "compositional", budget=args.budget
    )
    print(f"{report.terms} of {report.total} terms, {report.nodes} graph nodes, {report.edges} root steps checked")
    print(f"{len(report.failures)} failures")
    if not report.complete:
        failed = True
        print(f"incomplete: budget of {args.budget}s exhausted at {print_term(report.stopped_at)}")
    if report.failures:
        failed = True
        print(f"minimal counterexample: {report.failures[0]}")
        for f in report.failures[1:]:
            print(f"  {f}", file=sys.stderr)
    if args.perm_size is not None:
        b = oracle_mod.check_cf_bijection(args.perm_size)
        print(
            f"Perm({b.size}): {b.permutations} permutations, {b.distinct} distinct canonical forms, "
            f"{'all round-trip' if b.ok else 'FAILED'}"
        )
        for f in b.failures:
            print(f"  {f}", file=sys.stderr)
        failed = failed or not b.ok
    log.info("oracle finished in %.1fs", time.perf_counter() - t0)
    return EXIT_NEGATIVE if failed else EXIT_OK


def cmd_render(args) -> int:
    sig = _signature(args.sig)
    t = parse_term(_text_arg(args.term), sig)
    print(render(t))
    return EXIT_OK


def cmd_check(args) -> int:
    sig = _signature(args.sig)
    t = parse_term(_text_arg(args.term), sig)
    if args.kind == "nf":
        ok = is_normal_form(t, sig)
    elif args.kind == "cf":
        ok = is_canonical_form(t)
    else:
        ok = is_preprocessed(t)
    print("yes" if ok else "no")
    return EXIT_OK if ok else EXIT_NEGATIVE


# ------------------------------------------------------------------ parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diagre", description="Normalize and compare string-diagram terms.")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    p.add_argument("--unicode", action="store_true", help="print terms with ⨾ and ⊗")
    sub = p.add_subparsers(dest="command", required=True)

    def engine_opts(q, mode_default="pro"):
        q.add_argument("--strategy", default="staged", help="staged, innermost, outermost or random")
        q.add_argument("--seed", type=int, default=None, help="seed for the random strategy")
        q.add_argument("--max-steps", type=int, default=None)
        if mode_default is not None:
            q.add_argument("--mode", choices=[m.value for m in Mode], default=mode_default)

    q = sub.add_parser("normalize", help="print the normal form of a term")
    q.add_argument("term")
    q.add_argument("--sig")
    q.add_argument("--trace", help="write the rewrite trace (.json or .jsonl)")
    engine_opts(q)
    q.set_defaults(func=cmd_normalize)

    q = sub.add_parser("canonize", help="print the canonical form of a symmetry-only term")
    q.add_argument("term")
    q.add_argument("--trace")
    engine_opts(q, mode_default=None)
    q.set_defaults(func=cmd_canonize)

    q = sub.add_parser("equiv", help="decide whether two terms are equivalent")
    q.add_argument("t1")
    q.add_argument("t2")
    q.add_argument("--sig")
    q.add_argument("--traces", nargs=2, metavar=("FILE1", "FILE2"), help="write both traces")
    engine_opts(q)
    q.set_defaults(func=cmd_equiv)

    q = sub.add_parser("interpret", help="print the permutation of a symmetry-only term")
    q.add_argument("term")
    q.add_argument("--literal-swap", action="store_true", help="use the alternative reading of swap[n,m]")
    q.set_defaults(func=cmd_interpret)

    q = sub.add_parser("measures", help="print the termination measures of a term")
    q.add_argument("term")
    q.add_argument("--sig")
    q.add_argument("--mode", choices=[m.value for m in Mode], default="pro")
    q.set_defaults(func=cmd_measures)

    q = sub.add_parser("verify-trace", help="replay a trace and check every step")
    q.add_argument("file")
    q.set_defaults(func=cmd_verify_trace)

    q = sub.add_parser("oracle", help="exhaustive confluence check at bounded size")
    q.add_argument("--mode", choices=[m.value for m in Mode], default="perm")
    q.add_argument("--max-atoms", type=int, default=3)
    q.add_argument("--max-wires", type=int, default=4)
    q.add_argument("--perm-size", type=int, default=None)
    q.add_argument("--sig", help="signature for pro mode (default A : 1 -> 1, B : 2 -> 2)")
    q.add_argument("--explicit", action="store_true", help="walk every node of the rewrite graph")
    q.add_argument("--budget", type=float, default=None, help="stop after this many seconds (reported as incomplete)")
    q.set_defaults(func=cmd_oracle)

    q = sub.add_parser("render", help="draw a term as ASCII art")
    q.add_argument("term")
    q.add_argument("--sig")
    q.set_defaults(func=cmd_render)

    q = sub.add_parser("check", help="test a term for a syntactic class")
    q.add_argument("term")
    q.add_argument("--kind", choices=["nf", "cf", "pp"], required=True)
    q.add_argument("--sig")
    q.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (StateOrEffect, NotSymmetryOnly) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LANGUAGE
    except StepBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (DiagreError, OSError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
