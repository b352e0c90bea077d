"""Termination measures and the per-rule decrease checks.

All arithmetic is exact: ``delta`` is a ``Fraction`` whose denominator is a
power of D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DMismatch, NotSymmetryOnly, PatternViolation
from .rewrite import COHERENCE_RULES, Mode, RewriteStep, RuleId
from .terms import Dir, Gen, Id, Par, Seq, Signature, Swap, Term, generators_of, subterm_at


def big_d(t: Term, sig: Optional[Signature] = None) -> int:
    """2 plus the largest absolute defect among the generators of ``t``."""
    return 2 + max((abs(g.defect) for g in generators_of(t)), default=0)


def alpha(t: Term) -> int:
    if isinstance(t, Swap):
        return t.n * t.m * t.m + 1
    if isinstance(t, (Id, Gen)):
        return 0
    return alpha(t.left) + alpha(t.right)


def beta(t: Term) -> int:
    if isinstance(t, Id):
        return 2
    if isinstance(t, (Gen, Swap)):
        return 5
    if isinstance(t, Seq):
        return 2 * beta(t.left) + beta(t.right) + 1
    b = beta(t.left)
    return b * b * beta(t.right)


def gamma(t: Term) -> int:
    if isinstance(t, Id):
        return t.n
    if isinstance(t, (Gen, Swap)):
        return 0
    if isinstance(t, Seq):
        return gamma(t.left) + gamma(t.right)
    return gamma(t.left) + 2 * gamma(t.right)


def delta(t: Term, d: int) -> Fraction:
    if isinstance(t, (Id, Gen, Swap)):
        return Fraction(0)
    if isinstance(t, Seq):
        return delta(t.left, d) + delta(t.right, d) / d
    if isinstance(t.left, Id):
        return t.left.n + delta(t.right, d)
    return delta(t.left, d) + delta(t.right, d)


@dataclass(frozen=True)
class MeasureTuple:
    alpha: int
    beta: int
    gamma: int
    delta: Fraction
    d_param: int

    def key(self, mode: Mode) -> tuple:
        if Mode(mode) == Mode.PRO:
            return (self.beta, self.delta)
        return (self.alpha, self.beta, self.gamma, self.delta)


def measure_tuple(t: Term, sig: Optional[Signature] = None, mode: Mode = Mode.PRO) -> MeasureTuple:
    mode = Mode(mode)
    if mode == Mode.PERM:
        for g in generators_of(t):
            if isinstance(g, Gen):
                raise NotSymmetryOnly(g.name)
        d = 2
    else:
        d = big_d(t, sig)
    return MeasureTuple(alpha(t), beta(t), gamma(t), delta(t, d), d)


class MeasureCache:
    """Memoized measures over shared subterms, for checking many related terms."""

    def __init__(self):
        self._abg: dict[Term, tuple] = {}
        self._delta: dict[tuple, Fraction] = {}
        self._defect: dict[Term, int] = {}

    def _max_defect(self, t: Term) -> int:
        got = self._defect.get(t)
        if got is None:
            if isinstance(t, (Seq, Par)):
                got = max(self._max_defect(t.left), self._max_defect(t.right))
            elif isinstance(t, (Gen, Swap)):
                got = abs(t.defect)
            else:
                got = 0
            self._defect[t] = got
        return got

    def _alpha_beta_gamma(self, t: Term) -> tuple:
        got = self._abg.get(t)
        if got is None:
            if isinstance(t, (Seq, Par)):
                a1, b1, c1 = self._alpha_beta_gamma(t.left)
                a2, b2, c2 = self._alpha_beta_gamma(t.right)
                if isinstance(t, Seq):
                    got = (a1 + a2, 2 * b1 + b2 + 1, c1 + c2)
                else:
                    got = (a1 + a2, b1 * b1 * b2, c1 + 2 * c2)
            else:
                got = (alpha(t), beta(t), gamma(t))
            self._abg[t] = got
        return got

    def delta(self, t: Term, d: int) -> Fraction:
        if not isinstance(t, (Seq, Par)):
            return Fraction(0)
        key = (t, d)
        got = self._delta.get(key)
        if got is None:
            if isinstance(t, Seq):
                got = self.delta(t.left, d) + self.delta(t.right, d) / d
            elif isinstance(t.left, Id):
                got = t.left.n + self.delta(t.right, d)
            else:
                got = self.delta(t.left, d) + self.delta(t.right, d)
            self._delta[key] = got
        return got

    def measure(self, t: Term, sig: Optional[Signature] = None, mode: Mode = Mode.PRO) -> MeasureTuple:
        if Mode(mode) == Mode.PERM:
            d = 2
        else:
            d = 2 + self._max_defect(t)
        a, b, c = self._alpha_beta_gamma(t)
        return MeasureTuple(a, b, c, self.delta(t, d), d)


def lex_less(a: MeasureTuple, b: MeasureTuple, mode: Mode = Mode.PRO) -> bool:
    """Strict lexicographic comparison on the mode's components."""
    if a.d_param != b.d_param:
        raise DMismatch(f"D differs: {a.d_param} vs {b.d_param}")
    return a.key(mode) < b.key(mode)


# ------------------------------------------------------ decrease checking

# (component, relation) pairs the table fills in for each rule; '>' is a
# strict decrease, '=' preservation.
_PRO_PATTERN = {r: (("beta", ">"),) for r in COHERENCE_RULES}
_PRO_PATTERN.update({RuleId.R10: (("beta", "="), ("delta", ">")), RuleId.R11: (("beta", "="), ("delta", ">"))})

_PERM_PATTERN = {r: (("alpha", "="), ("beta", ">")) for r in COHERENCE_RULES}
for _r in (RuleId.R12, RuleId.R13, RuleId.R14, RuleId.R17, RuleId.R18, RuleId.R19, RuleId.R20):
    _PERM_PATTERN[_r] = (("alpha", ">"),)
for _r in (RuleId.R15, RuleId.R16):
    _PERM_PATTERN[_r] = (("alpha", "="), ("beta", "="), ("gamma", ">"))
for _r in (RuleId.R21, RuleId.R22):
    _PERM_PATTERN[_r] = (("alpha", "="), ("beta", "="), ("gamma", "="), ("delta", ">"))

_DELTA_RULES = {RuleId.R10, RuleId.R11, RuleId.R21, RuleId.R22}


def expected_pattern(rule: RuleId, mode: Mode) -> tuple:
    table = _PRO_PATTERN if Mode(mode) == Mode.PRO else _PERM_PATTERN
    return table[RuleId(rule)]


@dataclass
class DecreaseReport:
    rule: RuleId
    before: MeasureTuple
    after: MeasureTuple
    ok: bool
    reasons: list = field(default_factory=list)
    redex_drop: Optional[Fraction] = None

    def line(self) -> str:
        b, a = self.before, self.after
        return (
            f"{self.rule} α:{b.alpha}→{a.alpha} β:{b.beta}→{a.beta} "
            f"γ:{b.gamma}→{a.gamma} δ:{b.delta}→{a.delta} [{'OK' if self.ok else 'FAIL'}]"
        )


def verify_decrease(
    step: RewriteStep,
    sig: Optional[Signature] = None,
    mode: Mode = Mode.PRO,
    strict: bool = False,
    cache: Optional[dict] = None,
) -> DecreaseReport:
    """Check the decrease/preserve pattern of one rewrite step.

    Besides the pattern, the whole-term tuple must drop lexicographically and D
    must be unchanged.  For the layer commutation rules the redex itself must
    lose at least 1/D of delta; the whole term then loses at least that much
    divided by D once per right-of-⨾ step on the path to the redex.
    """
    mode = Mode(mode)

    def measure(t):
        if cache is None:
            return measure_tuple(t, sig, mode)
        if isinstance(cache, MeasureCache):
            return cache.measure(t, sig, mode)
        m = cache.get(t)
        if m is None:
            m = cache[t] = measure_tuple(t, sig, mode)
        return m

    before = measure(step.before)
    after = measure(step.after)
    reasons = []
    if (step.before.dom, step.before.cod) != (step.after.dom, step.after.cod):
        reasons.append("type not preserved")
    if before.d_param != after.d_param:
        reasons.append(f"D changed {before.d_param}→{after.d_param}")
    else:
        if not lex_less(after, before, mode):
            reasons.append("measure tuple did not decrease")
    try:
        pattern = expected_pattern(step.rule, mode)
    except KeyError:
        pattern = ()
        reasons.append(f"{step.rule} is not a {mode} rule")
    for comp, rel in pattern:
        x, y = getattr(before, comp), getattr(after, comp)
        if rel == ">" and not x > y:
            reasons.append(f"{comp} not decreased ({x}→{y})")
        if rel == "=" and x != y:
            reasons.append(f"{comp} not preserved ({x}→{y})")
    redex_drop = None
    if step.rule in _DELTA_RULES and not reasons:
        d = before.d_param
        lhs = subterm_at(step.before, step.position)
        rhs = subterm_at(step.after, step.position)
        if isinstance(cache, MeasureCache):
            redex_drop = cache.delta(lhs, d) - cache.delta(rhs, d)
        else:
            redex_drop = delta(lhs, d) - delta(rhs, d)
        bound = Fraction(1, d)
        if redex_drop < bound:
            reasons.append(f"redex delta drop {redex_drop} < {bound}")
        depth = sum(1 for x in step.position if x == Dir.SEQ_RIGHT)
        whole_bound = bound / d**depth
        if before.delta - after.delta < whole_bound:
            reasons.append(f"delta drop {before.delta - after.delta} < {whole_bound}")
    report = DecreaseReport(step.rule, before, after, not reasons, reasons, redex_drop)
    if strict and not report.ok:
        raise PatternViolation(step.rule, before, after, reasons)
    return report
