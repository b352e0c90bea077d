"""Exhaustive checks at bounded size.

``enumerate_terms`` lists every typed term over a set of atoms up to a bound;
``RewriteGraph`` explores every rewrite path from a term and records the
irreducible terms it reaches, checking each edge along the way.
"""

from __future__ import annotations

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .measures import MeasureCache, verify_decrease
from .normal_form import nf_value, to_term
from .permutation import all_permutations, cf, compose, dsum, interpret
from .rewrite import _DISPATCH, Mode, RewriteStep, check_mode, rewrites
from .terms import (
    Gen,
    Id,
    Par,
    Seq,
    Signature,
    Swap,
    Term,
    is_canonical_form,
    preprocess,
)

log = logging.getLogger(__name__)


def perm_atoms(max_wires: int) -> list[Term]:
    atoms: list[Term] = [Id(n) for n in range(max_wires + 1)]
    atoms += [Swap(n, w - n) for w in range(max_wires + 1) for n in range(w + 1)]
    return atoms


def pro_atoms(sig: Signature, max_wires: int) -> list[Term]:
    atoms: list[Term] = [Id(n) for n in range(max_wires + 1)]
    atoms += [g for g in sig.generators() if g.dom <= max_wires and g.cod <= max_wires]
    return atoms


def enumerate_terms(atoms: Iterable[Term], max_atoms: int, max_wires: int) -> list[Term]:
    """All terms with at most ``max_atoms`` atoms and at most ``max_wires`` wires.

    Results are ordered by atom count, so the first failing term of a check is a
    smallest counterexample.
    """
    by_size: dict[int, list[Term]] = {1: [a for a in atoms if a.dom <= max_wires and a.cod <= max_wires]}
    by_size_dom: dict[int, dict[int, list[Term]]] = {}

    def index(s):
        table = defaultdict(list)
        for t in by_size[s]:
            table[t.dom].append(t)
        by_size_dom[s] = table

    index(1)
    for s in range(2, max_atoms + 1):
        out = []
        for s1 in range(1, s):
            s2 = s - s1
            for u in by_size[s1]:
                for v in by_size_dom[s2].get(u.cod, ()):
                    out.append(Seq(u, v))
                for v in by_size[s2]:
                    if u.dom + v.dom <= max_wires and u.cod + v.cod <= max_wires:
                        out.append(Par(u, v))
        by_size[s] = out
        index(s)
    return [t for s in range(1, max_atoms + 1) for t in by_size[s]]


class CycleFound(Exception):
    pass


class BudgetExceeded(Exception):
    """The wall-clock budget of an exhaustive check ran out mid-search."""


@dataclass
class Failure:
    term: Term
    message: str

    def __str__(self):
        return f"{self.term}: {self.message}"


@dataclass
class OracleReport:
    mode: Mode
    terms: int = 0
    nodes: int = 0
    edges: int = 0
    failures: list = field(default_factory=list)
    total: int = 0
    elapsed: float = 0.0
    stopped_at: Optional[Term] = None

    @property
    def complete(self) -> bool:
        return self.stopped_at is None and self.terms == self.total

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        text = (
            f"mode={self.mode} terms={self.terms}/{self.total} graph-nodes={self.nodes} "
            f"edges={self.edges} {len(self.failures)} failures in {self.elapsed:.1f}s"
        )
        if self.stopped_at is not None:
            text += f"; budget exhausted at {self.stopped_at}"
        return text


class RewriteGraph:
    """Memoized exploration of all rewrite paths, shared across start terms.

    Every edge is checked for type preservation, the measure pattern of its
    rule, and preservation of the semantic value (the normal form in pro mode,
    the permutation in perm mode).
    """

    def __init__(self, mode: Mode, sig: Optional[Signature] = None, check_edges: bool = True):
        self.mode = Mode(mode)
        self.sig = sig
        self.check_edges = check_edges
        self.reached: dict[Term, frozenset] = {}
        self._values: dict[Term, object] = {}
        self._nf_cache: dict = {}
        self._measures = MeasureCache()
        self.nodes = 0
        self.edges = 0
        self.edge_failures: list[Failure] = []
        self.deadline: Optional[float] = None

    def value(self, t: Term):
        v = self._values.get(t)
        if v is None:
            if self.mode == Mode.PRO:
                v = nf_value(t, self._nf_cache)
            elif isinstance(t, Seq):
                v = compose(self.value(t.right), self.value(t.left))
            elif isinstance(t, Par):
                v = dsum(self.value(t.left), self.value(t.right))
            else:
                v = interpret(t)
            self._values[t] = v
        return v

    def _check_edge(self, t, p, rule, after):
        s = RewriteStep(rule, p, t, after)
        report = verify_decrease(s, self.sig, self.mode, cache=self._measures)
        if not report.ok:
            self.edge_failures.append(Failure(t, f"{rule} at {p}: " + "; ".join(report.reasons)))
        if self.value(t) != self.value(after):
            self.edge_failures.append(Failure(t, f"{rule} at {p} changed the semantic value"))

    def normal_forms(self, root: Term) -> frozenset:
        """The set of irreducible terms reachable from ``root``."""
        reached = self.reached
        if root in reached:
            return reached[root]
        pending_succ: dict[Term, list] = {}
        stack = [root]
        while stack:
            t = stack[-1]
            if t in reached:
                stack.pop()
                continue
            succ = pending_succ.get(t)
            if succ is None:
                if self.deadline is not None and time.perf_counter() > self.deadline:
                    raise BudgetExceeded()
                succ = []
                for p, rule, after in rewrites(t, self.mode):
                    succ.append(after)
                    self.edges += 1
                    if self.check_edges:
                        self._check_edge(t, p, rule, after)
                pending_succ[t] = succ
                todo = [a for a in succ if a not in reached]
                for a in todo:
                    if a in pending_succ:
                        raise CycleFound(str(a))
                if todo:
                    stack.extend(todo)
                    continue
            else:
                todo = [a for a in succ if a not in reached]
                if todo:
                    stack.extend(todo)
                    continue
            if not succ:
                result = frozenset((t,))
            else:
                sets = {reached[a] for a in succ}
                result = sets.pop() if len(sets) == 1 else frozenset().union(*sets)
            reached[t] = result
            self.nodes += 1
            del pending_succ[t]
            stack.pop()
        return reached[root]

    def expected(self, t: Term) -> Term:
        if self.mode == Mode.PRO:
            return to_term(self.value(t))
        return cf(self.value(t))


class NormalFormSearch:
    """Exhaustive search for the irreducible terms reachable from a term.

    Equivalent to walking the whole rewrite graph, but without enumerating the
    interleavings of independent steps.  Every path from ``C(s1, s2)`` is a run
    of steps inside ``s1`` and ``s2`` followed, possibly, by a step at the root.
    Because every rule is linear in its variables, a root redex whose variable
    parts have been rewritten further is reachable from the reduct of the
    earliest such redex, so only these earliest ("minimal") redexes need to be
    explored.  ``top_events(s)`` collects ``s`` and everything produced by a
    root step reachable from it; every reachable term is obtained from one
    of them by steps strictly below the root.

    Each distinct root step found is checked like an edge of the graph: type
    preservation, the measure pattern of its rule, and preservation of the
    semantic value.
    """

    def __init__(self, mode: Mode, sig: Optional[Signature] = None, check_edges: bool = True):
        self.mode = Mode(mode)
        self.sig = sig
        self.check_edges = check_edges
        self._table = _DISPATCH[self.mode]
        self._top: dict[Term, frozenset] = {}
        self._nf: dict[Term, frozenset] = {}
        self._results_memo: dict[Term, tuple] = {}
        self._reducts: dict[Term, tuple] = {}
        self._layer_memo: dict[Term, frozenset] = {}
        self._kind_memo: dict = {}
        self._graph = RewriteGraph(self.mode, sig)
        self.root_steps = 0
        self.edge_failures: list[Failure] = []
        self.deadline: Optional[float] = None

    def clear(self) -> None:
        """Drop the memo tables, keeping counters and pending failures."""
        for table in (self._top, self._nf, self._results_memo, self._reducts, self._layer_memo, self._kind_memo):
            table.clear()
        self._graph = RewriteGraph(self.mode, self.sig)

    @property
    def memo_size(self) -> int:
        return len(self._top)

    # -- root steps

    def _root_results(self, m: Term) -> tuple:
        got = self._results_memo.get(m)
        if got is None:
            got = []
            for rule, fn in self._table[type(m)]:
                r = fn(m, None)
                if r is not None:
                    got.append((rule, r))
                    self._check_root_step(m, rule, r)
            got = self._results_memo[m] = tuple(got)
        return got

    def _has_id(self, s: Term) -> bool:
        if isinstance(s, Id):
            return True
        return s.dom == s.cod and Id(s.dom) in self.top_events(s)

    def _tops(self, s: Term, kind: type) -> tuple:
        key = (s, kind)
        got = self._kind_memo.get(key)
        if got is None:
            got = self._kind_memo[key] = tuple(r for r in self.top_events(s) if isinstance(r, kind))
        return got

    def _layers(self, s: Term) -> frozenset:
        got = self._layer_memo.get(s)
        if got is None:
            got = self._layer_memo[s] = frozenset(self._find_layers(s))
        return got

    def _find_layers(self, s: Term) -> set:
        out = set()
        for r in self._tops(s, Par):
            if not self._has_id(r.left):
                continue
            for r2 in self._tops(r.right, Par):
                if not self._has_id(r2.right):
                    continue
                for g in self.top_events(r2.left):
                    if isinstance(g, (Gen, Swap)):
                        out.add(Par(Id(r.left.dom), Par(g, Id(r2.right.dom))))
        return out

    def _minimal_redexes(self, s: Term) -> set:
        cands = set()
        if isinstance(s, Seq):
            a, b = s.left, s.right
            cands.update(Seq(r, b) for r in self._tops(a, Seq))
            if self._has_id(a):
                cands.add(Seq(Id(a.dom), b))
            if self._has_id(b):
                cands.add(Seq(a, Id(b.dom)))
            left_layers = self._layers(a)
            if left_layers:
                rights = set(self._layers(b))
                for r in self._tops(b, Seq):
                    rights.update(Seq(x, r.right) for x in self._layers(r.left))
                cands.update(Seq(x, y) for x in left_layers for y in rights)
        elif isinstance(s, Par):
            a, b = s.left, s.right
            cands.update(Par(r, b) for r in self._tops(a, Par))
            if not isinstance(a, Id) and not isinstance(b, Id):
                cands.add(s)
            b_id = self._has_id(b)
            if self._has_id(a):
                i = Id(a.dom)
                if b_id:
                    cands.add(Par(i, Id(b.dom)))
                for r in self._tops(b, Par):
                    if self._has_id(r.left):
                        cands.add(Par(i, Par(Id(r.left.dom), r.right)))
                cands.update(Par(i, r) for r in self._tops(b, Seq))
            if b_id:
                cands.update(Par(r, Id(b.dom)) for r in self._tops(a, Seq))
        else:
            cands.add(s)
        return cands

    def _check_root_step(self, m, rule, r):
        self.root_steps += 1
        if self.check_edges:
            self._graph._check_edge(m, (), rule, r)
            if self._graph.edge_failures:
                self.edge_failures.extend(self._graph.edge_failures)
                self._graph.edge_failures = []

    # -- reachability

    def _root_reducts(self, s: Term) -> list:
        got = self._reducts.get(s)
        if got is None:
            if self.deadline is not None and time.perf_counter() > self.deadline:
                raise BudgetExceeded()
            got = {r for m in self._minimal_redexes(s) for _, r in self._root_results(m)}
            got = self._reducts[s] = tuple(got)
        return got

    def top_events(self, s: Term) -> frozenset:
        """``s`` together with every root reduct reachable from it."""
        got = self._top.get(s)
        if got is not None:
            return got
        out = {s}
        for r in self._root_reducts(s):
            out |= self.top_events(r)
        got = self._top[s] = frozenset(out)
        return got

    def _root_irreducible(self, t: Term) -> bool:
        return not self._root_results(t)

    def normal_forms(self, s: Term) -> frozenset:
        """The set of irreducible terms reachable from ``s``."""
        got = self._nf.get(s)
        if got is not None:
            return got
        out = set()
        if isinstance(s, (Seq, Par)):
            ctor = type(s)
            for a in self.normal_forms(s.left):
                for b in self.normal_forms(s.right):
                    c = ctor(a, b)
                    if self._root_irreducible(c):
                        out.add(c)
        elif self._root_irreducible(s):
            out.add(s)
        for r in self._root_reducts(s):
            out |= self.normal_forms(r)
        got = self._nf[s] = frozenset(out)
        return got

    def expected(self, t: Term) -> Term:
        return self._graph.expected(t)


def check_confluence(
    terms: Iterable[Term],
    mode: Mode,
    sig: Optional[Signature] = None,
    max_failures: int = 20,
    search: str = "compositional",
    budget: Optional[float] = None,
    max_memo: int = 50_000,
) -> OracleReport:
    """Exhaustively verify unique normal forms that agree with the direct oracle.

    ``search="explicit"`` walks every node of the rewrite graph instead; it is
    only practical for very small terms and serves as a cross-check.  With a
    ``budget`` in seconds the check stops when time runs out, even in the
    middle of a term, and the report is marked incomplete.  The compositional
    memo is cleared between terms once it holds ``max_memo`` entries.
    """
    mode = Mode(mode)
    terms = list(terms)
    graph = NormalFormSearch(mode, sig) if search == "compositional" else RewriteGraph(mode, sig)
    report = OracleReport(mode, total=len(terms))
    start = time.perf_counter()
    if budget is not None:
        graph.deadline = start + budget
    cleared_nodes = 0
    for raw in terms:
        check_mode(raw, mode)
        t = preprocess(raw)
        try:
            found = graph.normal_forms(t)
        except CycleFound as e:
            report.terms += 1
            report.failures.append(Failure(raw, f"rewrite cycle through {e}"))
            continue
        except BudgetExceeded:
            report.stopped_at = raw
            break
        report.terms += 1
        expected = graph.expected(t)
        if len(found) != 1:
            report.failures.append(Failure(raw, f"{len(found)} distinct normal forms"))
        elif next(iter(found)) != expected:
            report.failures.append(Failure(raw, f"normal form {next(iter(found))} differs from oracle {expected}"))
        if graph.edge_failures:
            report.failures.extend(graph.edge_failures)
            graph.edge_failures = []
        if len(report.failures) >= max_failures:
            break
        if isinstance(graph, NormalFormSearch) and graph.memo_size > max_memo:
            cleared_nodes += graph.memo_size
            graph.clear()
    # Steps checked before the budget ran out still count.
    report.failures.extend(graph.edge_failures)
    graph.edge_failures = []
    report.elapsed = time.perf_counter() - start
    if isinstance(graph, NormalFormSearch):
        report.nodes = cleared_nodes + graph.memo_size
        report.edges = graph.root_steps
    else:
        report.nodes = graph.nodes
        report.edges = graph.edges
    log.info(report.summary())
    return report


@dataclass
class BijectionReport:
    size: int
    permutations: int
    distinct: int
    failures: list

    @property
    def ok(self):
        return not self.failures and self.distinct == self.permutations


def check_cf_bijection(n: int) -> BijectionReport:
    """cf on Perm(n): injective, lands in canonical forms, and inverts interpretation."""
    images = {}
    failures = []
    count = 0
    for p in all_permutations(n):
        count += 1
        t = cf(p)
        if not is_canonical_form(t):
            failures.append(f"cf{p} = {t} is not canonical")
        if interpret(t) != p:
            failures.append(f"interpret(cf{p}) = {interpret(t)}")
        if t in images:
            failures.append(f"cf{p} = cf{images[t]}")
        images[t] = p
    return BijectionReport(n, count, len(images), failures)

