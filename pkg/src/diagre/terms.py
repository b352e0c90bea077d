"""Terms of a free PRO: identities, generators, symmetries, and the two compositions.

Terms are immutable, carry their domain and codomain, and hash in O(1), so
they can be used freely as dictionary keys during rewrite-graph searches.
"""

from __future__ import annotations

import enum
import re
import weakref
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    BadArity,
    InvalidPosition,
    NotSymmetryOnly,
    ReservedName,
    SeqMismatch,
    SignatureError,
    StateOrEffect,
    TypeMismatchAtHole,
    UnknownGenerator,
)

RESERVED_NAMES = frozenset({"id", "swap", "tob"})
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class Term:
    """Base class of the five term constructors.

    Terms are hash-consed: building a term equal to an existing one returns
    the existing object, so equality of live terms is object identity.
    ``dom`` and ``cod`` are computed once at construction; ``size`` counts the
    atoms (identities, generators and symmetries) of the term.
    """

    __slots__ = ("dom", "cod", "size", "_hash", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    @classmethod
    def _make(cls, key, hkey, dom: int, cod: int, size: int, **fields):
        t = object.__new__(cls)
        for k, v in fields.items():
            object.__setattr__(t, k, v)
        object.__setattr__(t, "dom", dom)
        object.__setattr__(t, "cod", cod)
        object.__setattr__(t, "size", size)
        object.__setattr__(t, "_hash", hash(hkey))
        _INTERNED[key] = t
        return t

    def _fields(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._fields() == other._fields()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .textio import print_term

        return f"<{type(self).__name__} {print_term(self)}>"

    def __str__(self):
        from .textio import print_term

        return print_term(self)

    def __reduce__(self):
        return (type(self), self._fields())

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @property
    def defect(self) -> int:
        return self.dom - self.cod

    @property
    def is_atom(self) -> bool:
        return isinstance(self, (Id, Gen, Swap))

    @property
    def is_generator(self) -> bool:
        return isinstance(self, (Gen, Swap))


_INTERNED: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()


class Id(Term):
    __slots__ = ("n",)

    def __new__(cls, n: int):
        key = ("id", n)
        t = _INTERNED.get(key)
        if t is not None:
            return t
        if n < 0:
            raise BadArity(f"id[{n}]: wire count must be non-negative")
        return cls._make(key, key, n, n, 1, n=n)

    def _fields(self):
        return (self.n,)


class Gen(Term):
    """An opaque box drawn from a signature."""

    __slots__ = ("name",)

    def __new__(cls, name: str, dom: int, cod: int):
        key = ("gen", name, dom, cod)
        t = _INTERNED.get(key)
        if t is not None:
            return t
        if dom < 0 or cod < 0:
            raise BadArity(f"{name}: arities must be non-negative")
        return cls._make(key, key, dom, cod, 1, name=name)

    def _fields(self):
        return (self.name, self.dom, self.cod)


class Swap(Term):
    """The symmetry exchanging an upper bundle of ``n`` wires with a lower bundle of ``m``."""

    __slots__ = ("n", "m")

    def __new__(cls, n: int, m: int):
        key = ("swap", n, m)
        t = _INTERNED.get(key)
        if t is not None:
            return t
        if n < 0 or m < 0:
            raise BadArity(f"swap[{n},{m}]: wire counts must be non-negative")
        return cls._make(key, key, n + m, n + m, 1, n=n, m=m)

    def _fields(self):
        return (self.n, self.m)

    @property
    def toboggan_size(self) -> Optional[int]:
        """``d`` when this swap is the toboggan of size ``d``, else None."""
        return self.n + 1 if self.m == 1 else None


class Seq(Term):
    __slots__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        # Children are interned and kept alive by the parent, so their ids
        # identify them for as long as the table entry exists.
        key = ("seq", id(left), id(right))
        t = _INTERNED.get(key)
        if t is not None:
            return t
        if left.cod != right.dom:
            raise SeqMismatch(left.cod, right.dom)
        hkey = ("seq", left._hash, right._hash)
        return cls._make(key, hkey, left.dom, right.cod, left.size + right.size, left=left, right=right)

    def _fields(self):
        return (self.left, self.right)


class Par(Term):
    __slots__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        key = ("par", id(left), id(right))
        t = _INTERNED.get(key)
        if t is not None:
            return t
        return cls._make(
            key,
            ("par", left._hash, right._hash),
            left.dom + right.dom, left.cod + right.cod, left.size + right.size, left=left, right=right
        )

    def _fields(self):
        return (self.left, self.right)


def toboggan(d: int) -> Swap:
    """The toboggan of size ``d``: lifts the last of ``d`` wires to the top."""
    if d < 1:
        raise BadArity(f"toboggan size must be at least 1, got {d}")
    return Swap(d - 1, 1)


def defect(t: Term) -> int:
    return t.dom - t.cod


def generators_of(t: Term) -> frozenset:
    """The set of generator occurrences (``Gen`` and ``Swap`` atoms) in ``t``."""
    found = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Seq, Par)):
            stack.append(u.left)
            stack.append(u.right)
        elif u.is_generator:
            found.add(u)
    return frozenset(found)


def is_symmetry_only(t: Term) -> bool:
    return not any(isinstance(g, Gen) for g in generators_of(t))


def check_symmetry_only(t: Term) -> None:
    for g in generators_of(t):
        if isinstance(g, Gen):
            raise NotSymmetryOnly(g.name)


def iter_subterms(t: Term) -> Iterator[Term]:
    """Preorder traversal of all subterms."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, (Seq, Par)):
            stack.append(u.right)
            stack.append(u.left)


def recompute_type(t: Term) -> tuple[int, int]:
    """Recompute (dom, cod) bottom-up without trusting the cached fields."""
    if isinstance(t, Id):
        return t.n, t.n
    if isinstance(t, Swap):
        return t.n + t.m, t.n + t.m
    if isinstance(t, Gen):
        return t.dom, t.cod
    ld, lc = recompute_type(t.left)
    rd, rc = recompute_type(t.right)
    if isinstance(t, Seq):
        if lc != rd:
            raise SeqMismatch(lc, rd)
        return ld, rc
    return ld + rd, lc + rc


# ---------------------------------------------------------------- signatures


@dataclass(frozen=True)
class Signature:
    """Named generators with their arities.

    With ``state_and_effect_free`` set, every generator must have at least one
    input and one output wire.
    """

    entries: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    state_and_effect_free: bool = False

    def __post_init__(self):
        entries = dict(self.entries)
        for name, (dom, cod) in entries.items():
            if name in RESERVED_NAMES:
                raise ReservedName(name)
            if not NAME_RE.match(name):
                raise SignatureError(f"invalid generator name {name!r}")
            if dom < 0 or cod < 0:
                raise BadArity(f"{name}: arities must be non-negative")
            if self.state_and_effect_free and (dom == 0 or cod == 0):
                raise StateOrEffect(name)
        object.__setattr__(self, "entries", entries)

    def __contains__(self, name) -> bool:
        return name in self.entries

    def __len__(self):
        return len(self.entries)

    def names(self) -> list[str]:
        return list(self.entries)

    def gen(self, name: str) -> Gen:
        try:
            dom, cod = self.entries[name]
        except KeyError:
            raise UnknownGenerator(name) from None
        return Gen(name, dom, cod)

    def generators(self) -> list[Gen]:
        return [Gen(name, d, c) for name, (d, c) in self.entries.items()]

    def with_state_and_effect_free(self, flag: bool = True) -> "Signature":
        return Signature(self.entries, flag)


EMPTY_SIGNATURE = Signature()


RawTerm = Union[tuple, Term]


def validate(raw: RawTerm, sig: Signature = EMPTY_SIGNATURE) -> Term:
    """Type an untyped term tree.

    ``raw`` is a nested tuple: ``("id", n)``, ``("gen", name)``,
    ``("swap", n, m)``, ``("seq", a, b)`` or ``("par", a, b)``.  Already
    constructed terms are re-checked against ``sig``.
    """
    if isinstance(raw, Term):
        raw = to_raw(raw)
    kind = raw[0]
    if kind == "id":
        return Id(raw[1])
    if kind == "gen":
        g = sig.gen(raw[1])
        if sig.state_and_effect_free and (g.dom == 0 or g.cod == 0):
            raise StateOrEffect(g.name)
        return g
    if kind == "swap":
        n, m = raw[1], raw[2]
        if sig.state_and_effect_free and n + m == 0:
            raise StateOrEffect("swap[0,0]")
        return Swap(n, m)
    if kind == "seq":
        return Seq(validate(raw[1], sig), validate(raw[2], sig))
    if kind == "par":
        return Par(validate(raw[1], sig), validate(raw[2], sig))
    raise ValueError(f"unknown raw term kind {kind!r}")


def to_raw(t: Term) -> tuple:
    if isinstance(t, Id):
        return ("id", t.n)
    if isinstance(t, Gen):
        return ("gen", t.name)
    if isinstance(t, Swap):
        return ("swap", t.n, t.m)
    kind = "seq" if isinstance(t, Seq) else "par"
    return (kind, to_raw(t.left), to_raw(t.right))


# ----------------------------------------------------------------- positions


class Dir(enum.IntEnum):
    SEQ_LEFT = 0
    SEQ_RIGHT = 1
    PAR_LEFT = 2
    PAR_RIGHT = 3


Position = tuple  # tuple[Dir, ...]; the empty tuple is the root

ROOT: Position = ()


def _child(t: Term, d: int) -> Term:
    if d == Dir.SEQ_LEFT and isinstance(t, Seq):
        return t.left
    if d == Dir.SEQ_RIGHT and isinstance(t, Seq):
        return t.right
    if d == Dir.PAR_LEFT and isinstance(t, Par):
        return t.left
    if d == Dir.PAR_RIGHT and isinstance(t, Par):
        return t.right
    raise InvalidPosition(d)


def subterm_at(t: Term, p: Sequence[int]) -> Term:
    u = t
    try:
        for d in p:
            u = _child(u, d)
    except InvalidPosition:
        raise InvalidPosition(tuple(p)) from None
    return u


def _replace(t: Term, p: Sequence[int], i: int, s: Term) -> Term:
    if i == len(p):
        return s
    d = p[i]
    child = _child(t, d)
    new = _replace(child, p, i + 1, s)
    if new is child:
        return t
    if d == Dir.SEQ_LEFT:
        return Seq(new, t.right)
    if d == Dir.SEQ_RIGHT:
        return Seq(t.left, new)
    if d == Dir.PAR_LEFT:
        return Par(new, t.right)
    return Par(t.left, new)


def replace_at(t: Term, p: Sequence[int], s: Term) -> Term:
    """Fill the hole at ``p`` with ``s``; ``s`` must have the hole's type."""
    old = subterm_at(t, p)
    if (old.dom, old.cod) != (s.dom, s.cod):
        raise TypeMismatchAtHole((old.dom, old.cod), (s.dom, s.cod))
    return _replace(t, tuple(p), 0, s)


def position_to_str(p: Sequence[int]) -> str:
    return "".join(str(int(d)) for d in p)


def position_from_str(text: str) -> Position:
    try:
        return tuple(Dir(int(c)) for c in text)
    except ValueError:
        raise InvalidPosition(text) from None


# -------------------------------------------------------------------- layers


@dataclass(frozen=True)
class Layer:
    """``id_k ⊗ (g ⊗ id_l)``: one generator padded by identity wires."""

    k: int
    l: int
    g: Term

    @property
    def dom(self) -> int:
        return self.k + self.g.dom + self.l

    @property
    def cod(self) -> int:
        return self.k + self.g.cod + self.l

    @property
    def height(self) -> int:
        return self.k + self.g.dom

    def to_term(self) -> Term:
        return Par(Id(self.k), Par(self.g, Id(self.l)))


@dataclass(frozen=True)
class LayerSequence:
    """A non-empty right-nested chain of layers, given by parallel lists."""

    ks: tuple
    ls: tuple
    gs: tuple

    def __post_init__(self):
        ks, ls, gs = tuple(self.ks), tuple(self.ls), tuple(self.gs)
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "ls", ls)
        object.__setattr__(self, "gs", gs)
        if not (len(ks) == len(ls) == len(gs)) or not ks:
            raise ValueError("layer lists must be non-empty and of equal length")
        for i in range(len(ks) - 1):
            lower = ks[i] + gs[i].cod + ls[i]
            upper = ks[i + 1] + gs[i + 1].dom + ls[i + 1]
            if lower != upper:
                raise SeqMismatch(lower, upper)

    @classmethod
    def from_layers(cls, layers: Sequence[Layer]) -> "LayerSequence":
        return cls(tuple(x.k for x in layers), tuple(x.l for x in layers), tuple(x.g for x in layers))

    def layers(self) -> list[Layer]:
        return [Layer(k, l, g) for k, l, g in zip(self.ks, self.ls, self.gs)]

    def __len__(self):
        return len(self.ks)

    def to_term(self) -> Term:
        layers = self.layers()
        t = layers[-1].to_term()
        for x in reversed(layers[:-1]):
            t = Seq(x.to_term(), t)
        return t


def layer(k: int, l: int, g: Term) -> Term:
    return Layer(k, l, g).to_term()


def layers(ks, ls, gs) -> Term:
    return LayerSequence(ks, ls, gs).to_term()


def toboggan_layers(ks, ls, ds) -> Term:
    """The layer sequence whose generators are toboggans of the given sizes."""
    return layers(ks, ls, [toboggan(d) for d in ds])


def as_layer(t: Term) -> Optional[Layer]:
    if isinstance(t, Par) and isinstance(t.left, Id):
        inner = t.right
        if isinstance(inner, Par) and inner.left.is_generator and isinstance(inner.right, Id):
            return Layer(t.left.n, inner.right.n, inner.left)
    return None


def as_layer_sequence(t: Term) -> Optional[LayerSequence]:
    found = []
    u = t
    while isinstance(u, Seq):
        x = as_layer(u.left)
        if x is None:
            return None
        found.append(x)
        u = u.right
    x = as_layer(u)
    if x is None:
        return None
    found.append(x)
    return LayerSequence.from_layers(found)


# -------------------------------------------------------------- classifiers


class TermClass(enum.IntEnum):
    GENERAL = 0
    PREPROCESSED = 1
    PRENORMAL = 2
    NORMAL_FORM = 3
    CANONICAL_FORM = 4


def preprocess(t: Term) -> Term:
    """Replace every bare generator ``g`` by the layer ``id_0 ⊗ (g ⊗ id_0)``.

    Generators already sitting in layer position are left alone, which makes
    the operation idempotent.
    """
    if as_layer(t) is not None:
        return t
    if t.is_generator:
        return layer(0, 0, t)
    if isinstance(t, Id):
        return t
    left, right = preprocess(t.left), preprocess(t.right)
    if left is t.left and right is t.right:
        return t
    return Seq(left, right) if isinstance(t, Seq) else Par(left, right)


def is_preprocessed(t: Term) -> bool:
    """True iff every generator occurrence is the centre of a layer."""
    if as_layer(t) is not None or isinstance(t, Id):
        return True
    if t.is_generator:
        return False
    return is_preprocessed(t.left) and is_preprocessed(t.right)


def is_prenormal(t: Term) -> bool:
    return isinstance(t, Id) or as_layer_sequence(t) is not None


def is_normal_form(t: Term, sig: Optional[Signature] = None) -> bool:
    if isinstance(t, Id):
        return True
    seq = as_layer_sequence(t)
    if seq is None:
        return False
    if sig is not None:
        for g in seq.gs:
            if isinstance(g, Gen) and g.name not in sig:
                return False
    return all(
        seq.ks[i] < seq.ks[i + 1] + seq.gs[i + 1].dom for i in range(len(seq) - 1)
    )


def is_canonical_form(t: Term) -> bool:
    check_symmetry_only(t)
    if isinstance(t, Id):
        return True
    seq = as_layer_sequence(t)
    if seq is None:
        return False
    for g in seq.gs:
        d = g.toboggan_size
        if d is None or d < 2:
            return False
    return all(seq.ks[i] < seq.ks[i + 1] for i in range(len(seq) - 1))


def classify(t: Term) -> TermClass:
    """The strongest class of the ladder CF ⊂ NF ⊂ pre-normal ⊂ PP ⊂ T containing ``t``."""
    if is_symmetry_only(t) and is_canonical_form(t):
        return TermClass.CANONICAL_FORM
    if is_normal_form(t):
        return TermClass.NORMAL_FORM
    if is_prenormal(t):
        return TermClass.PRENORMAL
    if is_preprocessed(t):
        return TermClass.PREPROCESSED
    return TermClass.GENERAL
