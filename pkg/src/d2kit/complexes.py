"""Fox calculus, algebraic 2-complexes of presentations and the Ext^3 classifier.

Conventions: modules are right modules, elements are column vectors and
boundary maps act by left multiplication by the displayed matrices.  d2 has
one row per generator and one column per relator, entry (i, j) being the
Fox derivative of relator j with respect to generator i.  A 3-cochain (a b)
is a row; its coboundary is (a b) * d3.
"""

from __future__ import annotations

import re
from itertools import groupby
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Optional, Sequence, Union

from .errors import (
    NotACocycle,
    NotCoprime,
    NotInAugmentationIdeal,
    ParseError,
    RelatorNotTrivial,
    UnknownGenerator,
)
from .matlin import Matrix
from .rings import GroupRing, GroupRingElem, augment_eps, divide_by_x_minus_1

Letter = tuple[int, int]  # (generator index, +-1)
Word = tuple[Letter, ...]


@dataclass(frozen=True)
class Presentation:
    """Generators, relators, and an assignment generator -> (a mod n, b) in C_n x Z.

    ``n == 0`` means both factors are infinite cyclic.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    n: int
    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.assignment) != len(self.generators):
            raise ParseError("assignment must give one image per generator")
        if len(set(self.generators)) != len(self.generators):
            raise ParseError("duplicate generator names")
        for w in self.relators:
            for g, e in w:
                if not 0 <= g < len(self.generators) or e not in (1, -1):
                    raise ParseError(f"bad letter {(g, e)} in relator")

    def index(self, gen: Union[str, int]) -> int:
        if isinstance(gen, int):
            if 0 <= gen < len(self.generators):
                return gen
            raise UnknownGenerator(gen)
        try:
            return self.generators.index(gen)
        except ValueError:
            raise UnknownGenerator(gen) from None

    def evaluate(self, word: Sequence[Letter]) -> tuple[int, int]:
        a = b = 0
        for g, e in word:
            ga, gb = self.assignment[g]
            a += e * ga
            b += e * gb
        return (a % self.n if self.n else a, b)

    def image(self, letter: Letter) -> GroupRingElem:
        ga, gb = self.assignment[letter[0]]
        e = letter[1]
        return GroupRingElem.monomial(self.n, e * ga, e * gb)

    def word_text(self, word: Sequence[Letter]) -> str:
        if not word:
            return "1"
        out = []
        for (g, e), run in groupby(word):
            k = e * len(list(run))
            name = self.generators[g]
            out.append(name if k == 1 else f"{name}^{k}")
        return " ".join(out)

    def to_text(self) -> str:
        gens = ",".join(self.generators)
        mapping = ", ".join(f"{g}=({a},{b})" for g, (a, b) in zip(self.generators, self.assignment))
        rels = ", ".join(self.word_text(w) for w in self.relators)
        return f"gens: {gens}; n: {self.n}; map: {mapping}; rels: {rels}"

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        """Parse ``gens: x,t; n: 5; map: x=(1,0), t=(0,1); rels: x^5, x t x^-1 t^-1``."""
        fields = {}
        for part in text.split(";"):
            if not part.strip():
                continue
            if ":" not in part:
                raise ParseError(f"expected 'key: value' in {part!r}")
            key, value = part.split(":", 1)
            fields[key.strip().lower()] = value.strip()
        try:
            gens = tuple(g.strip() for g in fields["gens"].split(",") if g.strip())
            n = int(fields["n"])
            maps = dict(
                (m.group(1), (int(m.group(2)), int(m.group(3))))
                for m in re.finditer(r"(\w+)\s*=\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", fields["map"])
            )
            assignment = tuple(maps[g] for g in gens)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"malformed presentation: {exc}") from exc
        rel_text = fields.get("rels", "")
        relators = tuple(
            parse_word(r, gens) for r in rel_text.split(",") if r.strip()
        )
        return cls(gens, relators, n, assignment)


def parse_word(text: str, generators: Sequence[str]) -> Word:
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    word: list[Letter] = []
    for token in re.split(r"[\s*]+", text):
        if not token:
            continue
        m = re.fullmatch(r"(\w+?)(?:\^\(?([+-]?\d+)\)?)?", token)
        if not m or m.group(1) not in generators:
            raise ParseError(f"unknown generator or malformed letter {token!r}")
        g = list(generators).index(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        word.extend([(g, 1 if e > 0 else -1)] * abs(e))
    return tuple(word)


COMMUTATOR: Word = ((0, 1), (1, 1), (0, -1), (1, -1))


def _cyclic_presentation(name: str, n: int, v: int, power_first: bool) -> Presentation:
    rels = (COMMUTATOR, ((0, 1),) * n)
    if power_first:
        rels = rels[::-1]
    return Presentation((name, "t"), rels, n, ((v, 0), (0, 1)))


def standard_presentation(n: int, power_first: bool = False) -> Presentation:
    """<x, t | x t x^-1 t^-1, x^n>, commutator first unless ``power_first``."""
    return _cyclic_presentation("x", n, 1, power_first)


def gv_presentation(n: int, v: int, power_first: bool = False) -> Presentation:
    """<y, t | y t y^-1 t^-1, y^n> with y = x^v; the standard one when v = 1."""
    if gcd(v, n) != 1:
        raise NotCoprime(f"v={v} is not coprime to n={n}")
    v %= n
    if v == 1 or n == 1:
        return standard_presentation(n, power_first)
    return _cyclic_presentation("y", n, v, power_first)


def fox_derivative(word: Sequence[Letter], gen: Union[str, int], pres: Presentation) -> GroupRingElem:
    """d(word)/d(gen) pushed into Z[Gamma]."""
    g = pres.index(gen)
    acc: dict[tuple[int, int], int] = {}
    pa = pb = 0  # image of the prefix read so far
    n = pres.n
    for h, e in word:
        ha, hb = pres.assignment[h]
        if h == g:
            if e == 1:
                key, c = (pa, pb), 1
            else:
                key, c = (pa - ha, pb - hb), -1
            key = (key[0] % n if n else key[0], key[1])
            acc[key] = acc.get(key, 0) + c
        pa += e * ha
        pb += e * hb
    return GroupRingElem(n, acc)


@dataclass(frozen=True)
class FoxComplex:
    presentation: Presentation
    d2: Matrix  # g x r
    d1: Matrix  # 1 x g

    @property
    def n(self) -> int:
        return self.presentation.n

    def check(self) -> list[str]:
        problems = []
        prod = self.d1 * self.d2
        if not prod.is_zero():
            problems.append("d1*d2 != 0")
        if any(augment_eps(v) for v in self.d1.rows[0]):
            problems.append("eps o d1 != 0")
        return problems


def build_complex(pres: Presentation) -> FoxComplex:
    for w in pres.relators:
        val = pres.evaluate(w)
        if val != (0, 0):
            raise RelatorNotTrivial(pres.word_text(w), val)
    zg = GroupRing(pres.n)
    g = len(pres.generators)
    d2 = [[fox_derivative(w, i, pres) for w in pres.relators] for i in range(g)]
    if not pres.relators:
        d2 = [[] for _ in range(g)]
    d1 = [[pres.image((i, 1)) - 1 for i in range(g)]]
    return FoxComplex(pres, Matrix._raw(d2, zg), Matrix._raw(d1, zg))


def stabilize_complex(c: FoxComplex, m: int) -> FoxComplex:
    """Add m trivial relators, i.e. m zero columns in d2."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return c
    pres = replace(c.presentation, relators=c.presentation.relators + ((),) * m)
    zg = c.d2.ring
    d2 = [list(row) + [zg.zero()] * m for row in c.d2.rows]
    return FoxComplex(pres, Matrix._raw(d2, zg), c.d1)


# the G(v) realization ------------------------------------------------------

def inverse_mod(v: int, n: int) -> int:
    if gcd(v, n) != 1:
        raise NotCoprime(f"{v} is not a unit mod {n}")
    return pow(v, -1, n) if n > 1 else 0


def tau(n: int, v: int) -> GroupRingElem:
    """1 + x^v + ... + x^(v(w-1)) with w = v^-1 mod n."""
    w = inverse_mod(v, n) or 1
    return GroupRingElem(n, {((v * i) % n, 0): 1 for i in range(w)})


def pi2_generators(n: int) -> list[list[GroupRingElem]]:
    """The generators (0, x-1)^T and (N, t-1)^T of pi_2 of the standard complex."""
    x, t, N = GroupRingElem.x(n), GroupRingElem.t(n), GroupRingElem.norm(n)
    return [[GroupRingElem(n), x - 1], [N, t - 1]]


@dataclass
class ChainMapWitness:
    f3: GroupRingElem
    f2: Matrix
    f1: Matrix
    source: FoxComplex
    target: FoxComplex
    pi2: list = field(default_factory=list)


@dataclass
class ChainMapReport:
    ok: bool
    failed_square: Optional[str] = None
    details: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def gv_chain_map(n: int, v: int) -> ChainMapWitness:
    t_ = tau(n, v)
    zg = GroupRing(n)
    one, zero = zg.one(), zg.zero()
    f2 = Matrix._raw([[t_, zero], [zero, t_]], zg)
    f1 = Matrix._raw([[t_, zero], [zero, one]], zg)
    return ChainMapWitness(
        f3=t_,
        f2=f2,
        f1=f1,
        source=build_complex(standard_presentation(n)),
        target=build_complex(gv_presentation(n, v)),
        pi2=pi2_generators(n),
    )


def _column(vec):
    return Matrix._raw([[v] for v in vec], GroupRing(vec[0].n))


def verify_chain_map(wit: ChainMapWitness) -> ChainMapReport:
    """Check every square of the ladder source -> target exactly.

    Squares are tried in the order d1, d2, pi2; ``failed_square`` names the
    first failure and ``details`` lists all of them.
    """
    src, tgt = wit.source, wit.target
    g_s, r_s = src.d2.shape
    g_t, r_t = tgt.d2.shape
    if wit.f2.shape != (r_t, r_s) or wit.f1.shape != (g_t, g_s):
        return ChainMapReport(False, "shapes", [f"f2 {wit.f2.shape}, f1 {wit.f1.shape}"])
    failed: list[tuple[str, str]] = []
    if tgt.d1 * wit.f1 != src.d1:
        failed.append(("d1", "target.d1 * f1 != source.d1 (f0 = Id)"))
    if tgt.d2 * wit.f2 != wit.f1 * src.d2:
        failed.append(("d2", "target.d2 * f2 != f1 * source.d2"))
    for idx, z in enumerate(wit.pi2 or pi2_generators(src.n)):
        zc = _column(z)
        if not (src.d2 * zc).is_zero():
            failed.append(("pi2", f"pi2 generator {idx} is not a cycle of the source"))
        if wit.f2 * zc != zc.scale(wit.f3):
            failed.append(("pi2", f"f2 and f3 disagree on pi2 generator {idx}"))
        if not (tgt.d2 * zc.scale(wit.f3)).is_zero():
            failed.append(("pi2", f"f3 image of generator {idx} is not a cycle of the target"))
    if failed:
        return ChainMapReport(False, failed[0][0], [d for _, d in failed])
    return ChainMapReport(True)


def identity_chain_map(n: int) -> ChainMapWitness:
    cx = build_complex(standard_presentation(n))
    zg = GroupRing(n)
    return ChainMapWitness(zg.one(), Matrix.identity(2, zg), Matrix.identity(2, zg), cx, cx, pi2_generators(n))


# Ext^3 -------------------------------------------------------------------------

@dataclass(frozen=True)
class Ext3Class:
    n: int
    value: int


def standard_d2(n: int) -> Matrix:
    return build_complex(standard_presentation(n)).d2


def d3_matrix(n: int) -> Matrix:
    """((0, N), (x-1, t-1))."""
    x, t, N = GroupRingElem.x(n), GroupRingElem.t(n), GroupRingElem.norm(n)
    return Matrix._raw([[GroupRingElem(n), N], [x - 1, t - 1]], GroupRing(n))


def _row(a: GroupRingElem, b: GroupRingElem) -> Matrix:
    return Matrix._raw([[a, b]], GroupRing(a.n))


def is_cocycle(a: GroupRingElem, b: GroupRingElem) -> bool:
    """(a b) * d4 == 0, where the periodic resolution repeats d4 = d2."""
    if augment_eps(a) or augment_eps(b):
        raise NotInAugmentationIdeal(f"eps(a)={augment_eps(a)}, eps(b)={augment_eps(b)}")
    return (_row(a, b) * standard_d2(a.n)).is_zero()


def coboundary(a: GroupRingElem, b: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem]:
    """(a b) * d3 for a, b in the augmentation ideal."""
    if augment_eps(a) or augment_eps(b):
        raise NotInAugmentationIdeal(f"eps(a)={augment_eps(a)}, eps(b)={augment_eps(b)}")
    row = (_row(a, b) * d3_matrix(a.n)).rows[0]
    return row[0], row[1]


def cocycle_from_alphas(alpha1: GroupRingElem, alpha2_t: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem]:
    """(alpha1 (x-1), (alpha1 + alpha2 N)(t-1)); alpha2 must be x-free."""
    n = alpha1.n
    if any(a for (a, _) in alpha2_t.terms):
        raise ValueError("alpha2 must lie in R (no x terms)")
    x, t, N = GroupRingElem.x(n), GroupRingElem.t(n), GroupRingElem.norm(n)
    return alpha1 * (x - 1), (alpha1 + alpha2_t * N) * (t - 1)


def cocycle_of_endomorphism(f3: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem]:
    """Cocycle of the endomorphism 'multiply by f3' of pi_2 = I."""
    n = f3.n
    return f3 * (GroupRingElem.x(n) - 1), f3 * (GroupRingElem.t(n) - 1)


def ext3_class(a: GroupRingElem, b: GroupRingElem) -> Ext3Class:
    """eps(alpha1) mod n where a = alpha1 (x-1)."""
    if not is_cocycle(a, b):
        raise NotACocycle("(a b) * d2 != 0")
    alpha1 = divide_by_x_minus_1(a)
    return Ext3Class(a.n, augment_eps(alpha1) % a.n)


@dataclass
class Realization:
    n: int
    w: int
    v: int
    presentation: Presentation
    complex: FoxComplex
    witness: ChainMapWitness
    report: ChainMapReport
    ext3: Ext3Class


def realize_unit(n: int, w: int) -> Realization:
    """Presentation G(v), v = w^-1 mod n, whose complex has Ext^3 class w."""
    v = inverse_mod(w, n)
    wit = gv_chain_map(n, v)
    report = verify_chain_map(wit)
    cls = ext3_class(*cocycle_of_endomorphism(wit.f3))
    return Realization(n, w % n, v, wit.target.presentation, wit.target, wit, report, cls)


def check_cinf_squared(d2: Optional[Matrix] = None) -> bool:
    """d1*d2 == 0 and eps o d1 == 0 for <x, t | x t x^-1 t^-1> over Z[C_inf x C_inf]."""
    pres = Presentation(("x", "t"), (COMMUTATOR,), 0, ((1, 0), (0, 1)))
    cx = build_complex(pres)
    if d2 is not None:
        cx = FoxComplex(pres, d2, cx.d1)
    return not cx.check()
