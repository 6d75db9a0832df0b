"""Random instances for property tests, the selftest command and acceptance runs.

Every sampler takes an explicit ``random.Random`` so that runs are
reproducible from a seed.
"""

from __future__ import annotations

import random
from typing import Optional

from .complexes import Presentation
from .matlin import ElementaryWord, Matrix, Transvection, WhiteheadBlock, direct_sum_identity
from .rings import (
    GroupRingElem,
    Laurent,
    LaurentRing,
    ModulusDecomp,
    crt_join,
    invert_unit_rn,
    units_mod,
)


def random_laurent(rng: random.Random, modulus: int, span: int = 3, box: int = 3, low: int = -2) -> Laurent:
    """Polynomial supported in [j0, j0 + span]; coefficients mod ``modulus`` or in [-box, box] over Z."""
    j0 = rng.randint(low, -low) if low else 0
    terms = {}
    for j in range(j0, j0 + span + 1):
        c = rng.randrange(modulus) if modulus else rng.randint(-box, box)
        if c:
            terms[j] = c
    return Laurent(terms, modulus)


def random_nonzero_laurent(rng: random.Random, modulus: int, span: int = 3) -> Laurent:
    while True:
        f = random_laurent(rng, modulus, span)
        if f:
            return f


def _component_unit(rng: random.Random, p: int, e: int, span: int) -> Laurent:
    q = p**e
    c = rng.choice([r for r in range(1, q) if r % p])
    m = Laurent.monomial(c, rng.randint(-2, 2), q)
    g = random_laurent(rng, q, span)
    return m * (1 + g * p)


def random_unit_rn(rng: random.Random, n: int, span: int = 2) -> Laurent:
    """monomial * (1 + p*g) on each prime-power component, joined by CRT."""
    d = ModulusDecomp.of(n)
    return crt_join([_component_unit(rng, p, e, span) for p, e in d.factors], d)


def random_nonunit_rn(rng: random.Random, n: int, span: int = 2) -> Laurent:
    """Some component is (non-monomial mod p) * unit, so the result is not a unit."""
    d = ModulusDecomp.of(n)
    bad = rng.randrange(len(d.factors))
    parts = []
    for idx, (p, e) in enumerate(d.factors):
        u = _component_unit(rng, p, e, span)
        if idx == bad:
            q = p**e
            if rng.random() < 0.3:
                u = u * p  # zero mod p
            else:
                a = rng.randrange(1, p)
                u = u * Laurent({0: 1, rng.randint(1, 3): a}, q)
        parts.append(u)
    return crt_join(parts, d)


def random_word(
    rng: random.Random,
    k: int,
    n: int,
    length: Optional[int] = None,
    span: int = 3,
    side: Optional[str] = None,
    whitehead: float = 0.15,
) -> ElementaryWord:
    """Up to 12 random elementary ops, mostly transvections, entry span <= ``span``."""
    ring = LaurentRing(n)
    d = ModulusDecomp.of(n)
    length = rng.randint(0, 12) if length is None else length
    ops = []
    for _ in range(length):
        i, j = rng.sample(range(k), 2)
        s = side or rng.choice("LR")
        if rng.random() < whitehead:
            ops.append(WhiteheadBlock(i, j, invert_unit_rn(random_unit_rn(rng, n, 1), d), s))
        else:
            ops.append(Transvection(i, j, random_laurent(rng, n, span), s))
    return ElementaryWord(k, ring, ops)


def random_sl_matrix(rng: random.Random, k: int, n: int, length: Optional[int] = None) -> Matrix:
    return random_word(rng, k, n, length).evaluate()


def random_matrix(rng: random.Random, rows: int, cols: int, modulus: int, span: int = 3) -> Matrix:
    ring = LaurentRing(modulus)
    return Matrix(
        [[random_laurent(rng, modulus, span) for _ in range(cols)] for _ in range(rows)], ring
    )


def random_alpha_instance(rng: random.Random, n: int, k: int, alpha: Optional[Laurent] = None):
    """(alpha, B) with B = L (alpha (+) I_(k-1)) R for random elementary L, R."""
    alpha = alpha if alpha is not None else random_unit_rn(rng, n)
    ring = LaurentRing(n)
    core = direct_sum_identity(Matrix([[alpha]], ring), k - 1)
    left = random_word(rng, k, n, side="L")
    right = random_word(rng, k, n, side="R")
    return alpha, right.apply(left.apply(core))


def random_group_elem(rng: random.Random, n: int, span: int = 2, box: int = 3, terms: int = 4) -> GroupRingElem:
    out: dict[tuple[int, int], int] = {}
    for _ in range(rng.randint(0, terms)):
        key = (rng.randrange(n) if n else rng.randint(-2, 2), rng.randint(-span, span))
        out[key] = out.get(key, 0) + rng.randint(-box, box)
    return GroupRingElem(n, out)


def random_aug_elem(rng: random.Random, n: int, **kw) -> GroupRingElem:
    """Random element of the augmentation ideal."""
    g = random_group_elem(rng, n, **kw)
    return g - sum(g.terms.values())


def _random_letters(rng: random.Random, ngens: int, length: int):
    return [(rng.randrange(ngens), rng.choice((1, -1))) for _ in range(length)]


def _inverse(word):
    return [(g, -e) for g, e in reversed(word)]


def random_presentation(
    rng: random.Random,
    n: int,
    max_gens: int = 4,
    max_rels: int = 4,
    max_len: int = 12,
) -> Presentation:
    """A presentation with every relator trivial in C_n x Z (not necessarily of that group).

    Relators are commutators of short words, w * perm(w)^-1 (trivial since
    the target is abelian), or x^n-style powers when they fit in ``max_len``.
    """
    ngens = rng.randint(1, max_gens)
    names = tuple("xtuvwyz"[:ngens]) if ngens <= 7 else tuple(f"g{i}" for i in range(ngens))
    assignment = tuple((rng.randrange(n), rng.randint(-2, 2)) for _ in range(ngens))
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        kind = rng.randrange(3)
        if kind == 0:
            u = _random_letters(rng, ngens, rng.randint(1, max_len // 4))
            v = _random_letters(rng, ngens, rng.randint(1, max_len // 4))
            w = u + v + _inverse(u) + _inverse(v)
        elif kind == 1:
            u = _random_letters(rng, ngens, rng.randint(1, max_len // 2))
            perm = u[:]
            rng.shuffle(perm)
            w = u + _inverse(perm)
        else:
            g = rng.randrange(ngens)
            a, b = assignment[g]
            if b == 0 and n <= max_len:
                w = [(g, 1)] * n
            else:
                w = [(g, 1), (g, -1)]
        rels.append(tuple(w))
    return Presentation(names, tuple(rels), n, assignment)


def random_unit_mod(rng: random.Random, n: int) -> int:
    return rng.choice(units_mod(n)) if n > 2 else 1
