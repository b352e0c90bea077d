"""Concrete syntax for signatures and terms.

Terms::

    term  := par (';' term)?          sequential composition, right-associative
    par   := atom ('*' par)?          parallel composition, binds tighter
    atom  := 'id[' n ']' | 'swap[' n ',' m ']' | 'tob[' d ']' | NAME | '(' term ')'

``⨾`` and ``⊗`` are accepted as synonyms of ``;`` and ``*``.

Signatures hold one ``NAME : D -> C`` entry per line; ``#`` starts a comment.
"""

from __future__ import annotations

import re

from .errors import DuplicateName, ParseError, ReservedName
from .terms import (
    EMPTY_SIGNATURE,
    NAME_RE,
    RESERVED_NAMES,
    Id,
    Seq,
    Signature,
    Swap,
    Term,
    validate,
)

_SIG_LINE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(\d+)\s*->\s*(\d+)\s*\Z")


def parse_signature(text: str, state_and_effect_free: bool = False) -> Signature:
    entries: dict[str, tuple[int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _SIG_LINE.match(line)
        if not m:
            raise ParseError(f"expected 'NAME : D -> C', got {line.strip()!r}", line=lineno)
        name, dom, cod = m.group(1), int(m.group(2)), int(m.group(3))
        if name in RESERVED_NAMES:
            raise ReservedName(name)
        if name in entries:
            raise DuplicateName(name)
        entries[name] = (dom, cod)
    return Signature(entries, state_and_effect_free)


def format_signature(sig: Signature) -> str:
    return "".join(f"{name} : {d} -> {c}\n" for name, (d, c) in sig.entries.items())


# ------------------------------------------------------------------ lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[;*()\[\],⨾⊗])
    """,
    re.VERBOSE,
)

_OP_ALIASES = {"⨾": ";", "⊗": "*"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", offset=pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "op":
                value = _OP_ALIASES.get(value, value)
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.next()
        if v != value or kind == "eof":
            found = "end of input" if kind == "eof" else repr(v)
            raise ParseError(f"expected {value!r}, found {found}", offset=pos)

    def integer(self) -> int:
        kind, v, pos = self.next()
        if kind != "int":
            raise ParseError(f"expected an integer, found {v!r}", offset=pos)
        return int(v)

    def term(self):
        parts = [self.par()]
        while self.peek()[1] == ";":
            self.next()
            parts.append(self.par())
        raw = parts[-1]
        for p in reversed(parts[:-1]):
            raw = ("seq", p, raw)
        return raw

    def par(self):
        parts = [self.atom()]
        while self.peek()[1] == "*":
            self.next()
            parts.append(self.atom())
        raw = parts[-1]
        for p in reversed(parts[:-1]):
            raw = ("par", p, raw)
        return raw

    def atom(self):
        kind, v, pos = self.next()
        if v == "(" and kind == "op":
            raw = self.term()
            self.expect(")")
            return raw
        if kind != "name":
            found = "end of input" if kind == "eof" else repr(v)
            raise ParseError(f"expected a term, found {found}", offset=pos)
        if v == "id":
            self.expect("[")
            n = self.integer()
            self.expect("]")
            return ("id", n)
        if v == "swap":
            self.expect("[")
            n = self.integer()
            self.expect(",")
            m = self.integer()
            self.expect("]")
            return ("swap", n, m)
        if v == "tob":
            self.expect("[")
            _, _, dpos = self.peek()
            d = self.integer()
            self.expect("]")
            if d < 1:
                raise ParseError("toboggan size must be at least 1", offset=dpos)
            return ("swap", d - 1, 1)
        return ("gen", v)


def parse_raw(text: str):
    p = _Parser(text)
    raw = p.term()
    kind, v, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {v!r}", offset=pos)
    return raw


def parse_term(text: str, sig: Signature = EMPTY_SIGNATURE) -> Term:
    return validate(parse_raw(text), sig)


# ---------------------------------------------------------------- printer


def _atom_text(t: Term, sugar: bool) -> str:
    if isinstance(t, Id):
        return f"id[{t.n}]"
    if isinstance(t, Swap):
        if sugar and t.m == 1:
            return f"tob[{t.n + 1}]"
        return f"swap[{t.n},{t.m}]"
    return t.name


def print_term(t: Term, unicode: bool = False, sugar: bool = False) -> str:
    """Render ``t`` with the fewest parentheses that re-parse to the same tree."""
    seq_op = " ⨾ " if unicode else " ; "
    par_op = " ⊗ " if unicode else " * "

    def go(u: Term) -> str:
        if u.is_atom:
            return _atom_text(u, sugar)
        left, right = go(u.left), go(u.right)
        if isinstance(u, Seq):
            if isinstance(u.left, Seq):
                left = f"({left})"
            return left + seq_op + right
        if not u.left.is_atom:
            left = f"({left})"
        if isinstance(u.right, Seq):
            right = f"({right})"
        return left + par_op + right

    return go(t)


def is_name(text: str) -> bool:
    return bool(NAME_RE.match(text)) and text not in RESERVED_NAMES

