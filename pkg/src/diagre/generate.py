"""Random terms, normal forms and canonical forms for property testing."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .terms import Id, Layer, LayerSequence, Par, Seq, Signature, Swap, Term, toboggan


def random_perm_term(rng: random.Random, wires: int, atoms: int, id_weight: float = 0.25) -> Term:
    """A symmetry-only term on ``wires`` wires with exactly ``atoms`` atoms."""
    if atoms <= 1:
        if rng.random() < id_weight:
            return Id(wires)
        n = rng.randint(0, wires)
        return Swap(n, wires - n)
    a1 = rng.randint(1, atoms - 1)
    if rng.random() < 0.5:
        return Seq(random_perm_term(rng, wires, a1, id_weight), random_perm_term(rng, wires, atoms - a1, id_weight))
    w1 = rng.randint(0, wires)
    return Par(random_perm_term(rng, w1, a1, id_weight), random_perm_term(rng, wires - w1, atoms - a1, id_weight))


def random_pro_term(
    rng: random.Random,
    sig: Signature,
    dom: int,
    atoms: int,
    id_weight: float = 0.2,
) -> Term:
    """A term over ``sig`` with the given domain and exactly ``atoms`` atoms."""
    gens = sig.generators()

    def go(d: int, a: int) -> Term:
        if a <= 1:
            fitting = [g for g in gens if g.dom == d]
            if not fitting or rng.random() < id_weight:
                return Id(d)
            return rng.choice(fitting)
        a1 = rng.randint(1, a - 1)
        if rng.random() < 0.5:
            u = go(d, a1)
            return Seq(u, go(u.cod, a - a1))
        d1 = rng.randint(0, d)
        return Par(go(d1, a1), go(d - d1, a - a1))

    return go(dom, atoms)


def random_normal_form(
    rng: random.Random,
    generators: Sequence[Term],
    max_layers: int,
    max_width: int,
) -> Term:
    """A random term in normal form, built directly from layers.

    ``generators`` must all have at least one input and one output.
    """
    width = rng.randint(1, max_width)
    p = rng.randint(0, max_layers)
    if p == 0:
        return Id(width)
    first = [g for g in generators if g.dom <= width]
    if not first:
        return Id(width)
    g = rng.choice(first)
    k = rng.randint(0, width - g.dom)
    chain = [Layer(k, width - k - g.dom, g)]
    for _ in range(p - 1):
        prev = chain[-1]
        w = prev.cod
        options = [
            (h, k2)
            for h in generators
            if h.dom <= w
            for k2 in range(0, w - h.dom + 1)
            if prev.k < k2 + h.dom
        ]
        if not options:
            break
        h, k2 = rng.choice(options)
        chain.append(Layer(k2, w - k2 - h.dom, h))
    return LayerSequence.from_layers(chain).to_term()


def random_canonical_form(rng: random.Random, wires: int, max_layers: Optional[int] = None) -> Term:
    """A random canonical form on ``wires`` wires."""
    if wires < 2:
        return Id(wires)
    slots = list(range(wires - 1))
    limit = len(slots) if max_layers is None else min(max_layers, len(slots))
    p = rng.randint(0, limit)
    if p == 0:
        return Id(wires)
    ks = sorted(rng.sample(slots, p))
    chain = []
    for k in ks:
        d = rng.randint(2, wires - k)
        chain.append(Layer(k, wires - k - d, toboggan(d)))
    return LayerSequence.from_layers(chain).to_term()
