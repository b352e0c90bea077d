from __future__ import annotations

import random

import pytest

from conftest import ab_signature, cf_example_expected, nf_example_expected
from diagre.errors import NotApplicable, NotSymmetryOnly, StateOrEffect, StepBudgetExceeded
from diagre.generate import random_perm_term, random_pro_term
from diagre.normal_form import nf
from diagre.permutation import interpret
from diagre.rewrite import (
    LEFTMOST_INNERMOST,
    LEFTMOST_OUTERMOST,
    STAGED,
    Mode,
    RuleId,
    applicable,
    equiv,
    match_rule,
    normalize,
    parse_strategy,
    random_seeded,
    step,
)
from diagre.terms import (
    Dir,
    Gen,
    Id,
    Par,
    Seq,
    Signature,
    Swap,
    is_canonical_form,
    is_normal_form,
    layer,
    preprocess,
    toboggan,
    toboggan_layers,
)


def test_r10_example():
    g1, g2 = Gen("g1", 1, 1), Gen("g2", 2, 3)
    # The lower width of the g2 layer must be 1 for the pair to be typed.
    t = Seq(layer(2, 0, g1), layer(0, 1, g2))
    r = match_rule(RuleId.R10, t)
    assert r == Seq(layer(0, 1, g2), layer(3, 0, g1))
    assert (r.dom, r.cod) == (t.dom, t.cod)
    assert match_rule(RuleId.R10, t, mode=Mode.PERM) is None


def test_r14_example():
    r = match_rule(RuleId.R14, Swap(1, 2), mode=Mode.PERM)
    assert r == Seq(Par(Swap(1, 1), Id(1)), Par(Id(1), toboggan(2)))
    assert str(interpret(Swap(1, 2))) == str(interpret(r)) == "(3,1,2)"


def test_simple_matches():
    assert match_rule(RuleId.R12, Swap(0, 5), mode=Mode.PERM) == Id(5)
    assert match_rule(RuleId.R13, Swap(5, 0), mode=Mode.PERM) == Id(5)
    A = Gen("A", 1, 1)
    assert match_rule(RuleId.R7, Par(Id(2), A)) is None
    assert match_rule(RuleId.R7, Par(A, A)) == Seq(Par(A, Id(1)), Par(Id(1), A))
    assert match_rule(RuleId.R5, Par(Id(2), Id(3))) == Id(5)
    assert match_rule(RuleId.R6, Par(Id(2), Par(Id(3), A))) == Par(Id(5), A)


def test_perm_layer_rules():
    # R19 fuses tau_2 at k=1 after tau_2 at k=0 into tau_3.
    t = Seq(layer(1, 0, toboggan(2)), layer(0, 1, toboggan(2)))
    assert match_rule(RuleId.R19, t, mode=Mode.PERM) == layer(0, 0, toboggan(3))
    # R21 swaps layers that are far apart.
    t = Seq(layer(2, 0, toboggan(2)), layer(0, 2, toboggan(2)))
    assert match_rule(RuleId.R21, t, mode=Mode.PERM) == Seq(layer(0, 2, toboggan(2)), layer(2, 0, toboggan(2)))
    # R22 is the contextual form of R21 (its printed right side repeats the left side).
    tail = layer(0, 2, toboggan(2))
    t = Seq(layer(2, 0, toboggan(2)), Seq(layer(0, 2, toboggan(2)), tail))
    r = match_rule(RuleId.R22, t, mode=Mode.PERM)
    assert r == Seq(layer(0, 2, toboggan(2)), Seq(layer(2, 0, toboggan(2)), tail))
    assert interpret(t) == interpret(r)


def test_applicable(nf_example, sig):
    assert applicable(Id(3)) == []
    found = applicable(nf_example, sig)
    assert ((Dir.SEQ_LEFT,), RuleId.R7) in found
    cf = toboggan_layers([0, 1], [1, 0], [2, 2])
    assert applicable(cf, mode=Mode.PERM) == []
    # Preorder: the root before its left subtree, the left subtree before the right.
    assert found[0][0] == (Dir.SEQ_LEFT,)
    assert found[-1][0][0] == Dir.SEQ_RIGHT


def test_step_examples():
    A = Gen("A", 1, 1)
    assert step(Swap(0, 2), (), RuleId.R12, mode=Mode.PERM).after == Id(2)
    assert step(Seq(Id(1), A), (), RuleId.R3).after == A
    with pytest.raises(NotApplicable):
        step(Seq(Id(1), A), (Dir.PAR_LEFT,), RuleId.R3)
    with pytest.raises(NotApplicable):
        step(Seq(Id(1), A), (), RuleId.R4)


def test_normalize_examples(nf_example, cf_example, sig):
    result, trace = normalize(preprocess(nf_example), sig, Mode.PRO)
    assert result == nf_example_expected(sig)
    assert trace.check_chain()
    result, trace = normalize(preprocess(cf_example), None, Mode.PERM)
    assert result == cf_example_expected()
    assert trace.check_chain()
    for mode in Mode:
        result, trace = normalize(Id(4), None, mode)
        assert result == Id(4) and len(trace) == 0


def test_normalize_budget(nf_example, sig):
    with pytest.raises(StepBudgetExceeded):
        normalize(preprocess(nf_example), sig, Mode.PRO, STAGED, max_steps=3)


def test_mode_language_checks():
    with pytest.raises(NotSymmetryOnly):
        normalize(layer(0, 0, Gen("A", 1, 1)), None, Mode.PERM)
    with pytest.raises(StateOrEffect):
        normalize(Gen("C", 0, 1), None, Mode.PRO)


def test_equiv_examples(cf_example, sig):
    ok, traces = equiv(cf_example, cf_example_expected(), None, Mode.PERM)
    assert ok and traces[0].final == traces[1].final
    A, B = sig.gen("A"), sig.gen("B")
    ok, _ = equiv(Par(A, B), Seq(Par(A, Id(2)), Par(Id(A.cod), B)), sig, Mode.PRO)
    assert ok
    ok, _ = equiv(toboggan(2), Id(2), None, Mode.PERM)
    assert not ok
    ok, traces = equiv(Id(2), Id(3), None, Mode.PERM)
    assert not ok and traces is None


def test_equiv_symmetric():
    rng = random.Random(5)
    for _ in range(100):
        t1 = random_perm_term(rng, 3, rng.randint(1, 4))
        t2 = random_perm_term(rng, 3, rng.randint(1, 4))
        assert equiv(t1, t2, None, Mode.PERM)[0] == equiv(t2, t1, None, Mode.PERM)[0]


def test_parse_strategy():
    assert parse_strategy("staged") == STAGED
    assert parse_strategy("LI") == LEFTMOST_INNERMOST
    assert parse_strategy("leftmost-outermost") == LEFTMOST_OUTERMOST
    assert parse_strategy("random", 4) == random_seeded(4)
    with pytest.raises(ValueError):
        parse_strategy("sideways")


def test_step_invariants_on_random_runs():
    rng = random.Random(21)
    sig = ab_signature()
    for i in range(120):
        if i % 2:
            t, mode = preprocess(random_perm_term(rng, rng.randint(1, 4), rng.randint(1, 6))), Mode.PERM
        else:
            t, mode = preprocess(random_pro_term(rng, sig, rng.randint(1, 3), rng.randint(1, 6))), Mode.PRO
        result, trace = normalize(t, sig, mode, random_seeded(i))
        assert applicable(result, sig, mode) == []
        for s in trace.steps:
            assert (s.before.dom, s.before.cod) == (s.after.dom, s.after.cod)
            if mode == Mode.PERM:
                assert interpret(s.before) == interpret(s.after)
            else:
                assert nf(s.before) == nf(s.after)
        if mode == Mode.PERM:
            assert is_canonical_form(result)
        else:
            assert is_normal_form(result, sig)
