"""The rewriting systems for free PROs (pro mode) and for permutations (perm mode).

Pro mode uses R1-R11.  Perm mode replaces the layer commutation rules R10 and
R11 by the toboggan rules R15-R22 and adds the symmetry rules R12-R14.  Layer
patterns are matched literally: ``id[k] * (g * id[l])``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .errors import InvalidPosition, NotApplicable, StateOrEffect, StepBudgetExceeded
from .terms import (
    Gen,
    Id,
    Par,
    Seq,
    Signature,
    Swap,
    Term,
    as_layer,
    check_symmetry_only,
    generators_of,
    layer,
    preprocess,
    replace_at,
    subterm_at,
    toboggan,
)
from .terms import Dir


class Mode(str, enum.Enum):
    PRO = "pro"
    PERM = "perm"

    def __str__(self):
        return self.value


class RuleId(enum.IntEnum):
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4
    R5 = 5
    R6 = 6
    R7 = 7
    R8 = 8
    R9 = 9
    R10 = 10
    R11 = 11
    R12 = 12
    R13 = 13
    R14 = 14
    R15 = 15
    R16 = 16
    R17 = 17
    R18 = 18
    R19 = 19
    R20 = 20
    R21 = 21
    R22 = 22

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "RuleId":
        return cls[text.strip().upper()]


COHERENCE_RULES = frozenset(RuleId(i) for i in range(1, 10))
SYMMETRY_RULES = frozenset({RuleId.R12, RuleId.R13, RuleId.R14})
PRO_LAYER_RULES = frozenset({RuleId.R10, RuleId.R11})
PERM_LAYER_RULES = frozenset(RuleId(i) for i in range(15, 23))

SYSTEM = {
    Mode.PRO: COHERENCE_RULES | PRO_LAYER_RULES,
    Mode.PERM: COHERENCE_RULES | SYMMETRY_RULES | PERM_LAYER_RULES,
}


# ------------------------------------------------------------- rule bodies


def _r1(t, mode):
    if isinstance(t, Seq) and isinstance(t.left, Seq):
        return Seq(t.left.left, Seq(t.left.right, t.right))


def _r2(t, mode):
    if isinstance(t, Par) and isinstance(t.left, Par):
        return Par(t.left.left, Par(t.left.right, t.right))


def _r3(t, mode):
    if isinstance(t, Seq) and isinstance(t.left, Id):
        return t.right


def _r4(t, mode):
    if isinstance(t, Seq) and isinstance(t.right, Id):
        return t.left


def _r5(t, mode):
    if isinstance(t, Par) and isinstance(t.left, Id) and isinstance(t.right, Id):
        return Id(t.left.n + t.right.n)


def _r6(t, mode):
    if isinstance(t, Par) and isinstance(t.left, Id):
        inner = t.right
        if isinstance(inner, Par) and isinstance(inner.left, Id):
            return Par(Id(t.left.n + inner.left.n), inner.right)


def _r7(t, mode):
    if isinstance(t, Par) and not isinstance(t.left, Id) and not isinstance(t.right, Id):
        u, v = t.left, t.right
        return Seq(Par(u, Id(v.dom)), Par(Id(u.cod), v))


def _r8(t, mode):
    if isinstance(t, Par) and isinstance(t.left, Id) and isinstance(t.right, Seq):
        i = t.left
        return Seq(Par(i, t.right.left), Par(i, t.right.right))


def _r9(t, mode):
    if isinstance(t, Par) and isinstance(t.left, Seq) and isinstance(t.right, Id):
        i = t.right
        return Seq(Par(t.left.left, i), Par(t.left.right, i))


def _pro_layer(t):
    x = as_layer(t)
    if x is not None and x.g.dom > 0 and x.g.cod > 0:
        return x
    return None


def _commute(x1, x2):
    """Layer commutation for pro mode, or None when the side condition fails."""
    if x1.k >= x2.k + x2.g.dom:
        return (
            layer(x2.k, x2.l + x1.g.defect, x2.g),
            layer(x1.k - x2.g.defect, x1.l, x1.g),
        )
    return None


def _r10(t, mode):
    if isinstance(t, Seq):
        x1 = _pro_layer(t.left)
        if x1 is not None:
            x2 = _pro_layer(t.right)
            if x2 is not None:
                r = _commute(x1, x2)
                if r is not None:
                    return Seq(*r)


def _r11(t, mode):
    if isinstance(t, Seq) and isinstance(t.right, Seq):
        x1 = _pro_layer(t.left)
        if x1 is not None:
            x2 = _pro_layer(t.right.left)
            if x2 is not None:
                r = _commute(x1, x2)
                if r is not None:
                    return Seq(r[0], Seq(r[1], t.right.right))


def _r12(t, mode):
    if isinstance(t, Swap) and t.n == 0:
        return Id(t.m)


def _r13(t, mode):
    if isinstance(t, Swap) and t.m == 0:
        return Id(t.n)


def _r14(t, mode):
    if isinstance(t, Swap) and t.n >= 1 and t.m >= 2:
        n, m = t.n, t.m
        return Seq(Par(Swap(n, m - 1), Id(1)), Par(Id(m - 1), toboggan(n + 1)))


def _tob_layer(t):
    """(k, l, d) when ``t`` is a toboggan layer of size d >= 2."""
    x = as_layer(t)
    if x is not None and isinstance(x.g, Swap) and x.g.m == 1 and x.g.n >= 1:
        return x.k, x.l, x.g.n + 1
    return None


def _tl(k, l, d):
    return layer(k, l, toboggan(d))


def _perm_pair(t, ctx: bool):
    """Split ``t`` into two toboggan layers and an optional tail."""
    if not isinstance(t, Seq):
        return None
    if ctx:
        if not isinstance(t.right, Seq):
            return None
        second, tail = t.right.left, t.right.right
    else:
        second, tail = t.right, None
    a = _tob_layer(t.left)
    if a is None:
        return None
    b = _tob_layer(second)
    if b is None:
        return None
    return a, b, tail


def _with_tail(first, second, tail):
    if tail is None:
        return Seq(first, second)
    return Seq(first, Seq(second, tail))


def _nat(t, ctx):
    m = _perm_pair(t, ctx)
    if m is None:
        return None
    (k1, l1, d1), (k2, l2, d2), tail = m
    if k2 <= k1 < k2 + d2 - d1:
        return _with_tail(_tl(k2, l2, d2), _tl(k1 + 1, l1 - 1, d1), tail)


def _con(t, ctx):
    m = _perm_pair(t, ctx)
    if m is None:
        return None
    (k1, l1, d1), (k2, l2, d2), tail = m
    if k2 <= k1 and k2 + d2 - d1 <= k1 < k2 + d2 - 1:
        return _with_tail(_tl(k2, l2 + 1, d2 - 1), _tl(k1 + 1, l1, d1 - 1), tail)


def _fus(t, ctx):
    m = _perm_pair(t, ctx)
    if m is None:
        return None
    (k1, l1, d1), (k2, l2, d2), tail = m
    if k1 == k2 + d2 - 1:
        fused = _tl(k2, l1, d1 + d2 - 1)
        return fused if tail is None else Seq(fused, tail)


def _com(t, ctx):
    m = _perm_pair(t, ctx)
    if m is None:
        return None
    (k1, l1, d1), (k2, l2, d2), tail = m
    if k1 > k2 + d2 - 1:
        return _with_tail(_tl(k2, l2, d2), _tl(k1, l1, d1), tail)


RULES: dict[RuleId, Callable[[Term, Mode], Optional[Term]]] = {
    RuleId.R1: _r1,
    RuleId.R2: _r2,
    RuleId.R3: _r3,
    RuleId.R4: _r4,
    RuleId.R5: _r5,
    RuleId.R6: _r6,
    RuleId.R7: _r7,
    RuleId.R8: _r8,
    RuleId.R9: _r9,
    RuleId.R10: _r10,
    RuleId.R11: _r11,
    RuleId.R12: _r12,
    RuleId.R13: _r13,
    RuleId.R14: _r14,
    RuleId.R15: lambda t, mode: _nat(t, False),
    RuleId.R16: lambda t, mode: _nat(t, True),
    RuleId.R17: lambda t, mode: _con(t, False),
    RuleId.R18: lambda t, mode: _con(t, True),
    RuleId.R19: lambda t, mode: _fus(t, False),
    RuleId.R20: lambda t, mode: _fus(t, True),
    RuleId.R21: lambda t, mode: _com(t, False),
    RuleId.R22: lambda t, mode: _com(t, True),
}


def _by_node(mode: Mode, allowed) -> dict[type, tuple]:
    rules = sorted(SYSTEM[mode] & allowed)
    seq_rules = {RuleId.R1, RuleId.R3, RuleId.R4} | PRO_LAYER_RULES | PERM_LAYER_RULES
    par_rules = {RuleId.R2, RuleId.R5, RuleId.R6, RuleId.R7, RuleId.R8, RuleId.R9}
    return {
        Seq: tuple((r, RULES[r]) for r in rules if r in seq_rules),
        Par: tuple((r, RULES[r]) for r in rules if r in par_rules),
        Swap: tuple((r, RULES[r]) for r in rules if r in SYMMETRY_RULES),
        Id: (),
        Gen: (),
    }


_ALL = frozenset(RuleId)
_DISPATCH = {mode: _by_node(mode, _ALL) for mode in Mode}
_STRUCTURAL = {mode: _by_node(mode, COHERENCE_RULES | SYMMETRY_RULES) for mode in Mode}
_LAYER = {mode: _by_node(mode, PRO_LAYER_RULES | PERM_LAYER_RULES) for mode in Mode}


def match_rule(rule: RuleId, t: Term, sig: Optional[Signature] = None, mode: Mode = Mode.PRO) -> Optional[Term]:
    """The reduct of ``t`` at the root under ``rule``, or None."""
    mode = Mode(mode)
    rule = RuleId(rule)
    if rule not in SYSTEM[mode]:
        return None
    return RULES[rule](t, mode)


def _rewrites(t: Term, table) -> Iterator[tuple[tuple, RuleId, Term]]:
    for rule, fn in table[type(t)]:
        r = fn(t, None)
        if r is not None:
            yield (), rule, r
    if isinstance(t, Seq):
        for p, rule, r in _rewrites(t.left, table):
            yield (Dir.SEQ_LEFT,) + p, rule, Seq(r, t.right)
        for p, rule, r in _rewrites(t.right, table):
            yield (Dir.SEQ_RIGHT,) + p, rule, Seq(t.left, r)
    elif isinstance(t, Par):
        for p, rule, r in _rewrites(t.left, table):
            yield (Dir.PAR_LEFT,) + p, rule, Par(r, t.right)
        for p, rule, r in _rewrites(t.right, table):
            yield (Dir.PAR_RIGHT,) + p, rule, Par(t.left, r)


def rewrites(t: Term, mode: Mode = Mode.PRO) -> Iterator[tuple[tuple, RuleId, Term]]:
    """Every one-step rewrite of ``t`` as (position, rule, resulting whole term).

    Positions come in preorder, rules in ascending order at each position.
    """
    return _rewrites(t, _DISPATCH[Mode(mode)])


def applicable(t: Term, sig: Optional[Signature] = None, mode: Mode = Mode.PRO) -> list[tuple[tuple, RuleId]]:
    return [(p, rule) for p, rule, _ in rewrites(t, mode)]


# ------------------------------------------------------------------ steps


@dataclass(frozen=True)
class RewriteStep:
    rule: RuleId
    position: tuple
    before: Term
    after: Term


@dataclass
class RewriteTrace:
    initial: Term
    steps: list = field(default_factory=list)
    final: Optional[Term] = None
    mode: Mode = Mode.PRO
    signature: Optional[Signature] = None

    def __post_init__(self):
        if self.final is None:
            self.final = self.steps[-1].after if self.steps else self.initial

    def __len__(self):
        return len(self.steps)

    def check_chain(self) -> bool:
        current = self.initial
        for s in self.steps:
            if s.before != current:
                return False
            current = s.after
        return current == self.final


def step(t: Term, p: Sequence[int], r: RuleId, sig: Optional[Signature] = None, mode: Mode = Mode.PRO) -> RewriteStep:
    """Apply rule ``r`` at position ``p`` of ``t``."""
    try:
        sub = subterm_at(t, p)
    except InvalidPosition:
        raise NotApplicable(f"{r} at invalid position {tuple(p)}") from None
    reduct = match_rule(r, sub, sig, mode)
    if reduct is None:
        raise NotApplicable(f"{r} does not apply at position {tuple(p)}")
    return RewriteStep(RuleId(r), tuple(Dir(d) for d in p), t, replace_at(t, p, reduct))


# ------------------------------------------------------------- strategies


@dataclass(frozen=True)
class Strategy:
    """How the next redex is picked.

    ``kind`` is one of ``innermost``, ``outermost``, ``random`` or ``staged``.
    Staged exhausts the structural rules (R1-R9, R12-R14) before any layer
    rule, scanning leftmost-outermost.
    """

    kind: str
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("innermost", "outermost", "random", "staged"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("the random strategy needs a seed")

    def __str__(self):
        return f"random({self.seed})" if self.kind == "random" else self.kind


LEFTMOST_INNERMOST = Strategy("innermost")
LEFTMOST_OUTERMOST = Strategy("outermost")
STAGED = Strategy("staged")


def random_seeded(seed: int) -> Strategy:
    return Strategy("random", seed)


def parse_strategy(name: str, seed: Optional[int] = None) -> Strategy:
    aliases = {
        "innermost": "innermost",
        "leftmost-innermost": "innermost",
        "li": "innermost",
        "outermost": "outermost",
        "leftmost-outermost": "outermost",
        "lo": "outermost",
        "staged": "staged",
        "random": "random",
    }
    kind = aliases.get(name.lower())
    if kind is None:
        raise ValueError(f"unknown strategy {name!r}")
    if kind == "random":
        return Strategy("random", 0 if seed is None else seed)
    return Strategy(kind)


def _outermost(t: Term, table):
    """First redex in preorder: (position, rule, reduct)."""
    stack = [((), t)]
    while stack:
        p, u = stack.pop()
        for rule, fn in table[type(u)]:
            r = fn(u, None)
            if r is not None:
                return p, rule, r
        if isinstance(u, Seq):
            stack.append((p + (Dir.SEQ_RIGHT,), u.right))
            stack.append((p + (Dir.SEQ_LEFT,), u.left))
        elif isinstance(u, Par):
            stack.append((p + (Dir.PAR_RIGHT,), u.right))
            stack.append((p + (Dir.PAR_LEFT,), u.left))
    return None


def _innermost(t: Term, table, p=()):
    """First redex in postorder, which is the leftmost of the innermost ones."""
    if isinstance(t, Seq):
        found = _innermost(t.left, table, p + (Dir.SEQ_LEFT,))
        if found is None:
            found = _innermost(t.right, table, p + (Dir.SEQ_RIGHT,))
        if found is not None:
            return found
    elif isinstance(t, Par):
        found = _innermost(t.left, table, p + (Dir.PAR_LEFT,))
        if found is None:
            found = _innermost(t.right, table, p + (Dir.PAR_RIGHT,))
        if found is not None:
            return found
    for rule, fn in table[type(t)]:
        r = fn(t, None)
        if r is not None:
            return p, rule, r
    return None


class _Picker:
    def __init__(self, strategy: Strategy, mode: Mode):
        self.strategy = strategy
        self.mode = mode
        self.rng = random.Random(strategy.seed) if strategy.kind == "random" else None

    def __call__(self, t: Term):
        kind = self.strategy.kind
        if kind == "outermost":
            found = _outermost(t, _DISPATCH[self.mode])
        elif kind == "innermost":
            found = _innermost(t, _DISPATCH[self.mode])
        elif kind == "staged":
            found = _outermost(t, _STRUCTURAL[self.mode])
            if found is None:
                found = _outermost(t, _LAYER[self.mode])
        else:
            options = list(rewrites(t, self.mode))
            if not options:
                return None
            p, rule, after = self.rng.choice(options)
            return p, rule, subterm_at(after, p), after
        if found is None:
            return None
        p, rule, reduct = found
        return p, rule, reduct, None


def default_max_steps(t: Term) -> int:
    return 10 * max(t.size, 2) ** 3


def check_mode(t: Term, mode: Mode) -> None:
    """Reject terms outside the mode's term language."""
    if mode == Mode.PERM:
        check_symmetry_only(t)
        return
    for g in generators_of(t):
        if g.dom == 0 or g.cod == 0:
            raise StateOrEffect(g.name if isinstance(g, Gen) else f"swap[{g.n},{g.m}]")


def normalize(
    t: Term,
    sig: Optional[Signature] = None,
    mode: Mode = Mode.PRO,
    strategy: Strategy = STAGED,
    max_steps: Optional[int] = None,
) -> tuple[Term, RewriteTrace]:
    """Rewrite ``t`` until no rule applies, recording every step.

    ``t`` should already be preprocessed.
    """
    mode = Mode(mode)
    check_mode(t, mode)
    if max_steps is None:
        max_steps = default_max_steps(t)
    pick = _Picker(strategy, mode)
    steps = []
    current = t
    while True:
        found = pick(current)
        if found is None:
            break
        if len(steps) >= max_steps:
            raise StepBudgetExceeded(max_steps)
        p, rule, reduct, after = found
        if after is None:
            after = replace_at(current, p, reduct)
        steps.append(RewriteStep(rule, p, current, after))
        current = after
    return current, RewriteTrace(t, steps, current, mode, sig)


def equiv(
    t1: Term,
    t2: Term,
    sig: Optional[Signature] = None,
    mode: Mode = Mode.PRO,
    strategy: Strategy = STAGED,
) -> tuple[bool, Optional[tuple[RewriteTrace, RewriteTrace]]]:
    """Decide equivalence by comparing normal forms of the preprocessed terms.

    The two traces certify ``t1 ->* nf <-* t2`` when the answer is True.
    """
    mode = Mode(mode)
    check_mode(t1, mode)
    check_mode(t2, mode)
    if (t1.dom, t1.cod) != (t2.dom, t2.cod):
        return False, None
    n1, tr1 = normalize(preprocess(t1), sig, mode, strategy)
    n2, tr2 = normalize(preprocess(t2), sig, mode, strategy)
    return n1 == n2, (tr1, tr2)
