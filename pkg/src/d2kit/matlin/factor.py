"""Constructive factorization over R_n = Z_n[t, t^-1].

Everything is done one prime power q = p^e at a time and recombined by CRT:

1. reduce mod p and run the Smith form over F_p[t,t^-1];
2. lift those ops to Z_q[t,t^-1] and apply them, so the matrix becomes
   Diag(d, u_1, ..., u_(k-1)) + p*C with u_i monomial units mod p;
3. the diagonal entries 1..k-1 are now units of Z_q[t,t^-1]; clear their
   rows and columns by transvections scaled with their inverses;
4. push the units u_i into slot 0 with Whitehead blocks, leaving
   Diag(det, 1, ..., 1).

An op on component q with entry r becomes an op over R_n whose entry is the
CRT lift of (0, ..., r, ..., 0) (or (1, ..., u, ..., 1) for Whitehead units).
"""

from __future__ import annotations

from ..errors import DetMismatch, DetNotOne, DimensionMismatch, NotInvertible, SnfObstruction
from ..rings import (
    Laurent,
    LaurentRing,
    ModulusDecomp,
    UnitCert,
    crt_embed,
    invert_unit_rn,
    is_unit_rn,
)
from .elementary import ElementaryWord, Transvection, WhiteheadBlock
from .matrix import Matrix, direct_sum_identity
from .smith import _signed_swap, snf_fp


def _lift_to(q: int):
    def f(v: Laurent) -> Laurent:
        return Laurent(v.terms, q)
    return f


def _lift_unit(cert: UnitCert, q: int) -> UnitCert:
    (j, c), = cert.element.terms.items()
    return UnitCert(Laurent.monomial(c, j, q), Laurent.monomial(pow(c, -1, q), -j, q))


def _reduce_prime_power(b: Matrix, p: int, e: int) -> tuple[list, list, Laurent]:
    """Ops (left, right) over Z_(p^e) with left*b*right = Diag(beta, 1, ..., 1).

    Raises SnfObstruction when b mod p does not have k-1 unit invariant factors.
    """
    q = p**e
    k = b.shape[0]
    snf = snf_fp(b.map(lambda v: v.reduce(p), LaurentRing(p)))
    head = snf.diag[: k - 1]
    if any(not d.is_monomial() for d in head):
        raise SnfObstruction(p, snf.diag)

    lift = _lift_to(q)
    left_ops, right_ops = [], []
    for op in snf.left.ops:
        if isinstance(op, WhiteheadBlock):
            left_ops.append(WhiteheadBlock(op.i, op.j, _lift_unit(op.unit, q), op.side))
        else:
            left_ops.append(op.map_entries(lift))
    for op in snf.right.ops:
        right_ops.append(op.map_entries(lift))
    one = Laurent.const(1, q)
    if k > 1:
        # conjugate by a signed swap so the one non-unit factor sits in slot 0
        left_ops.extend(_signed_swap(0, k - 1, "L", one))
        right_ops.extend(_signed_swap(0, k - 1, "R", -one))

    w = b.copy_rows()
    for op in left_ops:
        op.apply_inplace(w)
    for op in right_ops:
        op.apply_inplace(w)

    d = ModulusDecomp.of(q)
    for j in range(1, k):
        inv = invert_unit_rn(w[j][j], d).inverse
        for i in range(k):
            if i != j and w[i][j]:
                op = Transvection(i, j, -(w[i][j] * inv), "L")
                op.apply_inplace(w)
                left_ops.append(op)
        for col in range(k):
            if col != j and w[j][col]:
                op = Transvection(j, col, -(w[j][col] * inv), "R")
                op.apply_inplace(w)
                right_ops.append(op)
    for j in range(1, k):
        u = w[j][j]
        if not u.is_one():
            op = WhiteheadBlock(0, j, invert_unit_rn(u, d), "L")
            op.apply_inplace(w)
            left_ops.append(op)
    return left_ops, right_ops, w[0][0]


def _embed_ops(ops: list, index: int, d: ModulusDecomp) -> list:
    out = []
    for op in ops:
        if isinstance(op, WhiteheadBlock):
            cert = UnitCert(
                crt_embed(op.unit.element, index, d, fill=1),
                crt_embed(op.unit.inverse, index, d, fill=1),
            )
            out.append(WhiteheadBlock(op.i, op.j, cert, op.side))
        else:
            out.append(Transvection(op.i, op.j, crt_embed(op.r, index, d), op.side))
    return out


def _check_square_rn(b: Matrix, d: ModulusDecomp) -> None:
    if not b.is_square:
        raise DimensionMismatch(f"square matrix required, got {b.shape}")
    if not isinstance(b.ring, LaurentRing) or b.ring.modulus != d.n:
        raise DimensionMismatch(f"matrix must be over Z_{d.n}[t,t^-1]")


def reduce_to_alpha_block(b: Matrix, alpha: Laurent, d: ModulusDecomp | None = None):
    """Elementary words (left, right) with left*B*right = alpha (+) I_(k-1).

    Requires det(B) == alpha and, for every p | n, k-1 unit invariant factors
    of B mod p.
    """
    n = b.ring.modulus
    d = d or ModulusDecomp.of(n)
    _check_square_rn(b, d)
    alpha = b.ring.coerce(alpha)
    k = b.shape[0]
    det_b = b.det()
    if det_b != alpha:
        raise DetMismatch(f"det(B) = {det_b}, expected {alpha}")
    left = ElementaryWord(k, b.ring)
    right = ElementaryWord(k, b.ring)
    target = direct_sum_identity(Matrix([[alpha]], b.ring), k - 1)
    if b == target:
        return left, right
    for index, (p, e) in enumerate(d.factors):
        q = p**e
        lops, rops, beta = _reduce_prime_power(b.map(lambda v: v.reduce(q), LaurentRing(q)), p, e)
        if beta != alpha.reduce(q):
            raise DetMismatch(f"component mod {q} ended at {beta}, expected {alpha.reduce(q)}")
        left.extend(_embed_ops(lops, index, d))
        right.extend(_embed_ops(rops, index, d))
    if left.apply(right.apply(b)) != target:
        raise AssertionError("internal error: reduction witness does not check")
    return left, right


def factor_det_one(e: Matrix, d: ModulusDecomp | None = None) -> ElementaryWord:
    """Word of elementary ops (side "R", product in list order) equal to E."""
    n = e.ring.modulus
    d = d or ModulusDecomp.of(n)
    _check_square_rn(e, d)
    det_e = e.det()
    if not is_unit_rn(det_e, d):
        raise NotInvertible(f"det = {det_e} is not a unit of R_{n}")
    if not det_e.is_one():
        raise DetNotOne(f"det = {det_e}")
    left, right = reduce_to_alpha_block(e, e.ring.one(), d)
    # L E R = I  =>  E = L^-1 R^-1
    word = left.inverse_product()
    word.extend(right.inverse_product().ops)
    return word


def normalize_by_determinants(b: Matrix, c: Matrix, dm: Matrix) -> Matrix:
    """(det C (+) I_(k-1)) * B * (det D (+) I_(k-1))."""
    if not (b.is_square and c.is_square and dm.is_square):
        raise DimensionMismatch("B, C, D must be square")
    ring = b.ring
    k = b.shape[0]
    dc = ring.coerce(c.det())
    dd = ring.coerce(dm.det())
    lc = direct_sum_identity(Matrix([[dc]], ring), k - 1)
    rd = direct_sum_identity(Matrix([[dd]], ring), k - 1)
    return lc * b * rd
