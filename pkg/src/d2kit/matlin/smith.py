"""Euclidean division and Smith normal form over F_p[t, t^-1].

The Euclidean degree is the span (max exponent - min exponent).  Units are
the monomials c t^j; a nonzero entry is *normalized* when its lowest exponent
is 0 and its top coefficient is 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..rings import Laurent, UnitCert, is_prime
from .elementary import ElementaryWord, Transvection, WhiteheadBlock
from .matrix import Matrix


def euclid_divide(a: Laurent, b: Laurent) -> tuple[Laurent, Laurent]:
    """a = q b + r with r == 0 or span(r) < span(b)."""
    p = b.modulus
    if a.modulus != p or not is_prime(p):
        raise ValueError("euclid_divide works over F_p[t,t^-1]")
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return a, a
    vb = b.min_exp
    db = b.max_exp - vb
    inv_lc = pow(b.leading_coeff(), -1, p)
    # ordinary polynomial division of t^-va a by t^-vb b
    va = a.min_exp
    rem = {j - va: c for j, c in a.terms.items()}
    bpoly = {j - vb: c for j, c in b.terms.items()}
    quo: dict[int, int] = {}
    while rem and max(rem) >= db:
        top = max(rem)
        c = rem[top] * inv_lc % p
        shift = top - db
        quo[shift] = c
        for j, bc in bpoly.items():
            key = j + shift
            v = (rem.get(key, 0) - c * bc) % p
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    q = Laurent({j + va - vb: c for j, c in quo.items()}, p)
    r = Laurent({j + va: c for j, c in rem.items()}, p)
    return q, r


def divides(d: Laurent, a: Laurent) -> bool:
    if d.is_zero():
        return a.is_zero()
    return euclid_divide(a, d)[1].is_zero()


def normalizing_unit(a: Laurent) -> Laurent:
    """The unit c t^v with a = (c t^v) * normalized(a)."""
    return Laurent.monomial(a.leading_coeff(), a.min_exp, a.modulus)


def normalize(a: Laurent) -> Laurent:
    if a.is_zero():
        return a
    u = normalizing_unit(a)
    return a * (u ** -1)


@dataclass
class SnfResult:
    """left.evaluate() * A * right.evaluate() == Diag(diag)."""

    left: ElementaryWord
    diag: list
    right: ElementaryWord

    def diagonal_matrix(self, shape: tuple[int, int]) -> Matrix:
        ring = self.left.ring
        m = Matrix.zeros(shape[0], shape[1], ring)
        for i, d in enumerate(self.diag):
            m.rows[i][i] = d
        return m


def _chain_ok(diag: list, step) -> bool:
    return all(step(diag[i], diag[i + 1]) for i in range(len(diag) - 1))


def divisibility_chain_holds(diag: list, either_order: bool = False) -> bool:
    """a_i | a_(i+1) for all i (or the reversed chain when ``either_order``)."""
    fwd = _chain_ok(diag, divides)
    if fwd or not either_order:
        return fwd
    return _chain_ok(diag, lambda a, b: divides(b, a))


def _signed_swap(i: int, j: int, side: str, one: Laurent) -> list[Transvection]:
    # rows: new row_i = row_j, new row_j = -row_i ; cols: new col_i = -col_j, new col_j = col_i
    return [Transvection(i, j, one, side), Transvection(j, i, -one, side), Transvection(i, j, one, side)]


def snf_fp(a: Matrix) -> SnfResult:
    """Smith normal form over F_p[t,t^-1] with transvection/Whitehead witnesses.

    Pivot: nonzero entry of minimal span, ties to the lowest (row, col).
    The diagonal satisfies a_i | a_(i+1); every nonzero entry but the sink is
    normalized, where the sink is the first zero diagonal slot if any, else
    the last one (it carries the unit of det(A)).
    """
    ring = a.ring
    p = ring.modulus
    if not is_prime(p):
        raise ValueError(f"snf_fp needs a prime modulus, got {p}")
    r, c = a.shape
    w = a.copy_rows()
    left = ElementaryWord(r, ring)
    right = ElementaryWord(c, ring)
    one = ring.one()

    def do(op, word):
        op.apply_inplace(w)
        word.append(op)

    def move_to(s, i, j):
        if i != s:
            for op in _signed_swap(s, i, "L", one):
                do(op, left)
        if j != s:
            for op in _signed_swap(s, j, "R", one):
                do(op, right)

    def best_in(cells):
        best = None
        for (i, j) in cells:
            v = w[i][j]
            if v:
                key = (v.span, i, j)
                if best is None or key < best:
                    best = key
        return best

    for s in range(min(r, c)):
        found = best_in((i, j) for i in range(s, r) for j in range(s, c))
        if found is None:
            break
        move_to(s, found[1], found[2])
        while True:
            piv = w[s][s]
            for i in range(s + 1, r):
                if w[i][s]:
                    q, _ = euclid_divide(w[i][s], piv)
                    do(Transvection(i, s, -q, "L"), left)
            for j in range(s + 1, c):
                if w[s][j]:
                    q, _ = euclid_divide(w[s][j], piv)
                    do(Transvection(s, j, -q, "R"), right)
            rest = best_in([(i, s) for i in range(s + 1, r)] + [(s, j) for j in range(s + 1, c)])
            if rest is not None:
                move_to(s, rest[1], rest[2])
                continue
            bad = next(
                (i for i in range(s + 1, r) for j in range(s + 1, c) if not divides(piv, w[i][j])),
                None,
            )
            if bad is None:
                break
            do(Transvection(s, bad, one, "L"), left)

    m = min(r, c)
    diag = [w[i][i] for i in range(m)]
    rank = sum(1 for d in diag if d)
    if rank:
        sink = rank if rank < m else rank - 1
        for i in range(rank):
            if i == sink:
                continue
            u = normalizing_unit(w[i][i])
            if u.is_one():
                continue
            uinv = u ** -1
            # row i *= u^-1, row sink *= u
            do(WhiteheadBlock(i, sink, UnitCert(uinv, u), "L"), left)
    diag = [w[i][i] for i in range(m)]
    return SnfResult(left, diag, right)


def check_snf(a: Matrix, res: SnfResult, either_order: bool = False) -> list[str]:
    """Independent checks of an SnfResult; returns the list of failures."""
    problems = []
    lhs = res.left.evaluate() * a * res.right.evaluate()
    target = res.diagonal_matrix(a.shape)
    if lhs != target:
        problems.append("left*A*right is not the claimed diagonal")
    if not divisibility_chain_holds(res.diag, either_order):
        problems.append("divisibility chain fails")
    if not (res.left.evaluate().det().is_one() and res.right.evaluate().det().is_one()):
        problems.append("transform determinant is not 1")
    return problems
