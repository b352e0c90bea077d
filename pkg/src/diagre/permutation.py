"""Finite permutations as the semantics of symmetry-only terms.

A permutation of size n is stored as the tuple of its 1-based images,
``images[i] = π(i + 1)``.  The interpretation of a term sends input wire i to
the output position π(i).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from itertools import permutations as _itertools_permutations

from .errors import EmptyPermutation, NotSymmetryOnly, ParseError, SizeMismatch
from .normal_form import NFValue, par_values, seq_values, to_term
from .terms import Gen, Id, Layer, Seq, Swap, Term, toboggan


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation")

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        # Skips validation; only for images built from valid permutations.
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.images)) + ")"

    def compose(self, first: "Permutation") -> "Permutation":
        """``self ∘ first``: apply ``first``, then ``self``."""
        return compose(self, first)

    def __add__(self, other: "Permutation") -> "Permutation":
        return dsum(self, other)

    def inverse(self) -> "Permutation":
        return inverse(self)


def compose(p2: Permutation, p1: Permutation) -> Permutation:
    """``p2 ∘ p1``, i.e. ``i ↦ p2(p1(i))``."""
    if len(p1) != len(p2):
        raise SizeMismatch(f"cannot compose permutations of sizes {len(p2)} and {len(p1)}")
    img2 = p2.images
    return Permutation._trusted(tuple(img2[j - 1] for j in p1.images))


def dsum(p1: Permutation, p2: Permutation) -> Permutation:
    n = len(p1)
    return Permutation._trusted(p1.images + tuple(n + j for j in p2.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p.images, start=1):
        inv[j - 1] = i
    return Permutation._trusted(tuple(inv))


def preimage_of_one(p: Permutation) -> int:
    if not len(p):
        raise EmptyPermutation("the empty permutation has no preimage of 1")
    return p.images.index(1) + 1


def restrict_first(p: Permutation) -> Permutation:
    """Drop the wire sent to position 1 and renumber the rest."""
    if not len(p):
        raise EmptyPermutation("cannot restrict the empty permutation")
    j = preimage_of_one(p)
    img = p.images
    return Permutation(tuple(img[i] - 1 for i in range(len(img)) if i != j - 1))


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in _itertools_permutations(range(1, n + 1)):
        yield Permutation(images)


def parse_permutation(text: str) -> Permutation:
    s = text.strip()
    if not re.fullmatch(r"\(\s*(\d+\s*(,\s*\d+\s*)*)?\)", s):
        raise ParseError(f"malformed permutation {text!r}")
    body = s[1:-1].strip()
    images = tuple(int(x) for x in body.split(",")) if body else ()
    try:
        return Permutation(images)
    except ValueError as e:
        raise ParseError(str(e)) from None


# ------------------------------------------------------------ interpretation


ADOPTED = "adopted"
LITERAL = "literal"


def swap_permutation(n: int, m: int, convention: str = ADOPTED) -> Permutation:
    """The permutation of ``swap[n,m]``.

    The adopted reading sends the upper ``n`` wires below the lower ``m``,
    ``(m+1, ..., m+n, 1, ..., m)``, so that the toboggan of size d is
    ``(2, ..., d, 1)``.  ``LITERAL`` gives the other reading,
    ``(n+1, ..., n+m, 1, ..., n)``, which is its inverse.
    """
    if convention == ADOPTED:
        return Permutation._trusted(tuple(range(m + 1, m + n + 1)) + tuple(range(1, m + 1)))
    if convention == LITERAL:
        return Permutation._trusted(tuple(range(n + 1, n + m + 1)) + tuple(range(1, n + 1)))
    raise ValueError(f"unknown convention {convention!r}")


def interpret(t: Term, convention: str = ADOPTED) -> Permutation:
    if isinstance(t, Id):
        return Permutation.identity(t.n)
    if isinstance(t, Swap):
        return swap_permutation(t.n, t.m, convention)
    if isinstance(t, Gen):
        raise NotSymmetryOnly(t.name)
    left = interpret(t.left, convention)
    right = interpret(t.right, convention)
    if isinstance(t, Seq):
        return compose(right, left)
    return dsum(left, right)


# --------------------------------------------------------------- canonizing


def cf_value(p: Permutation) -> NFValue:
    n = len(p)
    if n <= 1:
        return n
    j = preimage_of_one(p)
    tail = par_values(1, cf_value(restrict_first(p)))
    if j == 1:
        return tail
    return seq_values((Layer(0, n - j, toboggan(j)),), tail)


def cf(p: Permutation) -> Term:
    """The canonical form of ``p``."""
    return to_term(cf_value(p))


def canonize(t: Term) -> Term:
    """Canonical form of a symmetry-only term, computed semantically."""
    return cf(interpret(t))
