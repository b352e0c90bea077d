from __future__ import annotations

import pytest

from diagre.terms import Gen, Id, Par, Seq, Signature, Swap, layers, toboggan, toboggan_layers
from diagre.textio import parse_signature, parse_term

AB_TEXT = "A : 1 -> 1\nB : 2 -> 2\n"
NF_EXAMPLE_TEXT = "((A ; id[1]) * ((A * A) ; B)) ; (B * A)"
CF_EXAMPLE_TEXT = (
    "(id[1] * tob[2] * tob[2]) ; (swap[2,2] * id[1]) ; (swap[1,2] * tob[2]) ; "
    "(id[1] * swap[1,2] * id[1]) ; (id[3] * tob[2]) ; (tob[4] * id[1])"
)


def ab_signature() -> Signature:
    return parse_signature(AB_TEXT, state_and_effect_free=True)


def nf_example_expected(sig: Signature):
    A, B = sig.gen("A"), sig.gen("B")
    return layers([0, 1, 2, 1, 0, 2], [2, 1, 0, 0, 1, 0], [A, A, A, B, B, A])


def cf_example_expected():
    return toboggan_layers([0, 1, 2, 3], [2, 0, 1, 0], [3, 4, 2, 2])


@pytest.fixture
def sig():
    return ab_signature()


@pytest.fixture
def nf_example(sig):
    return parse_term(NF_EXAMPLE_TEXT, sig)


@pytest.fixture
def cf_example():
    return parse_term(CF_EXAMPLE_TEXT)


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
