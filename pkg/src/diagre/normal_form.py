"""Direct computation of normal forms by structural recursion.

``seq_nf`` and ``par_nf`` compute the normal form of a sequential and a
parallel composition of two normal forms.  ``nf`` folds them over a term.
None of this uses the rewrite rules, so it serves as an oracle for the
rewrite engine.

Internally a normal form is either an ``int`` (the identity on that many
wires) or a non-empty tuple of ``Layer`` values.
"""

from __future__ import annotations

from typing import Optional, Union

from .errors import NotNormalForm, SeqMismatch, StateOrEffect, UnknownGenerator
from .terms import (
    Gen,
    Id,
    Layer,
    LayerSequence,
    Par,
    Seq,
    Signature,
    Swap,
    Term,
    as_layer_sequence,
    generators_of,
    is_normal_form,
)

NFValue = Union[int, tuple]


def value_dom(v: NFValue) -> int:
    return v if isinstance(v, int) else v[0].dom


def value_cod(v: NFValue) -> int:
    return v if isinstance(v, int) else v[-1].cod


def insert_layer(top: Layer, rest: tuple) -> tuple:
    """``top • rest`` for a single layer followed by a non-empty normal form."""
    out = []
    moving = top
    i = 0
    while i < len(rest):
        first = rest[i]
        if moving.k < first.k + first.g.dom:
            break
        g, g2 = first.g, moving.g
        shifted_l = first.l + g2.defect
        shifted_k = moving.k - g.defect
        assert shifted_k >= 0 and shifted_l >= 0, "layer commutation left the wire range"
        out.append(Layer(first.k, shifted_l, g))
        moving = Layer(shifted_k, moving.l, g2)
        i += 1
    out.append(moving)
    out.extend(rest[i:])
    return tuple(out)


def seq_values(a: NFValue, b: NFValue) -> NFValue:
    if value_cod(a) != value_dom(b):
        raise SeqMismatch(value_cod(a), value_dom(b))
    if isinstance(a, int):
        return b
    if isinstance(b, int):
        return a
    result = b
    for x in reversed(a):
        result = insert_layer(x, result)
    return result


def par_values(a: NFValue, b: NFValue) -> NFValue:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if isinstance(a, int):
        return tuple(Layer(x.k + a, x.l, x.g) for x in b)
    if isinstance(b, int):
        return tuple(Layer(x.k, x.l + b, x.g) for x in a)
    c = value_cod(a)
    d = value_dom(b)
    return tuple(Layer(x.k, x.l + d, x.g) for x in a) + tuple(Layer(x.k + c, x.l, x.g) for x in b)


def to_term(v: NFValue) -> Term:
    if isinstance(v, int):
        return Id(v)
    return LayerSequence.from_layers(v).to_term()


def from_term(t: Term) -> NFValue:
    """Decompose a term already in normal form."""
    if isinstance(t, Id):
        return t.n
    seq = as_layer_sequence(t) if is_normal_form(t) else None
    if seq is None:
        raise NotNormalForm(f"{t} is not in normal form")
    return tuple(seq.layers())


def seq_nf(a: Term, b: Term) -> Term:
    """Normal form of ``a ⨾ b`` for normal forms ``a`` and ``b``."""
    return to_term(seq_values(from_term(a), from_term(b)))


def par_nf(a: Term, b: Term) -> Term:
    """Normal form of ``a ⊗ b`` for normal forms ``a`` and ``b``."""
    return to_term(par_values(from_term(a), from_term(b)))


def _check_generator(g: Term) -> None:
    if g.dom == 0 or g.cod == 0:
        raise StateOrEffect(g.name if isinstance(g, Gen) else f"swap[{g.n},{g.m}]")


def nf_value(t: Term, _cache: Optional[dict] = None) -> NFValue:
    if _cache is not None:
        hit = _cache.get(t)
        if hit is not None:
            return hit
    if isinstance(t, Id):
        v = t.n
    elif isinstance(t, (Gen, Swap)):
        _check_generator(t)
        v = (Layer(0, 0, t),)
    elif isinstance(t, Seq):
        v = seq_values(nf_value(t.left, _cache), nf_value(t.right, _cache))
    else:
        v = par_values(nf_value(t.left, _cache), nf_value(t.right, _cache))
    if _cache is not None:
        _cache[t] = v
    return v


def nf(t: Term, sig: Optional[Signature] = None) -> Term:
    """The normal form of ``t`` over a state-and-effect-free signature."""
    if sig is not None:
        for g in generators_of(t):
            if isinstance(g, Gen) and sig.entries.get(g.name) != (g.dom, g.cod):
                raise UnknownGenerator(g.name)
    return to_term(nf_value(t))
