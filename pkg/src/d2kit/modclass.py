"""The M(A) module calculus over C_n x C_inf and its finite-cyclic (Swan) analogue.

M(A) is the submodule of Z[Gamma]^2k generated by the columns of

    ( A_lift   N*I_k )
    ( (x-1)I_k   0   )

Isomorphism is exposed through witnesses (C over R, D over S) that are
re-multiplied, never trusted.  The only decision procedure is the scalar
stable-equivalence reduction ``decide_scalar_stable_equiv``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Union

from .errors import DimensionMismatch, SnfObstruction
from .matlin import (
    ElementaryWord,
    Matrix,
    direct_sum_identity,
    normalize_by_determinants,
    reduce_to_alpha_block,
)
from .rings import (
    GroupRing,
    GroupRingElem,
    Laurent,
    LaurentRing,
    ModulusDecomp,
    QuotientRing,
    SElem,
    augment_x,
    eps_hat_S,
    is_unit_rn,
    to_rn,
    units_mod,
)


@dataclass(frozen=True)
class MModule:
    n: int
    k: int
    A_lift: Matrix
    A_class: Matrix
    gen_matrix: Matrix

    def check_invariants(self) -> list[str]:
        """Block layout, class/lift consistency and the N-column relation."""
        n, k = self.n, self.k
        zg = GroupRing(n)
        N = GroupRingElem.norm(n)
        xm1 = GroupRingElem.x(n) - 1
        g = self.gen_matrix.rows
        problems = []
        for i in range(k):
            for j in range(k):
                eye = 1 if i == j else 0
                if g[i][j] != self.A_lift.rows[i][j]:
                    problems.append(f"top-left block differs at ({i},{j})")
                if g[i][k + j] != N * eye:
                    problems.append(f"N*I block differs at ({i},{j})")
                if g[k + i][j] != xm1 * eye:
                    problems.append(f"(x-1)*I block differs at ({i},{j})")
                if g[k + i][k + j]:
                    problems.append(f"zero block differs at ({i},{j})")
        if self.A_lift.map(to_rn, LaurentRing(n)) != self.A_class:
            problems.append("A_class is not the image of A_lift")
        # N * (column j) = sum_i augment_x(A_ij) * (column k+i)
        for j in range(k):
            lhs = [N * g[r][j] for r in range(2 * k)]
            rhs = [zg.zero() for _ in range(2 * k)]
            for i in range(k):
                coeff = GroupRingElem.from_laurent(augment_x(self.A_lift.rows[i][j]), n)
                for r in range(2 * k):
                    rhs[r] = rhs[r] + g[r][k + i] * coeff
            if lhs != rhs:
                problems.append(f"N*column {j} is not in the span of the N-columns")
        return problems


def canonical_lift(a: Laurent, n: int) -> GroupRingElem:
    """Lift of an element of R_n: coefficients in [0, n), x-degree 0."""
    return GroupRingElem.from_laurent(a.reduce(n), n)


def m_generator_matrix(a_lift: Matrix) -> Matrix:
    n = a_lift.ring.n
    k = a_lift.shape[0]
    zg = a_lift.ring
    N = GroupRingElem.norm(n)
    xm1 = GroupRingElem.x(n) - 1
    top = [list(a_lift.rows[i]) + [N if i == j else zg.zero() for j in range(k)] for i in range(k)]
    bottom = [[xm1 if i == j else zg.zero() for j in range(k)] + [zg.zero()] * k for i in range(k)]
    return Matrix._raw(top + bottom, zg)


def build_m_module(a: Matrix, n: Optional[int] = None) -> MModule:
    """M(A) for A over R_n (canonical lift), over R, or over Z[Gamma] (lift as given)."""
    if not a.is_square:
        raise DimensionMismatch("A must be square")
    k = a.shape[0]
    if isinstance(a.ring, GroupRing):
        n = a.ring.n
        lift = a
    elif isinstance(a.ring, LaurentRing):
        n = n or a.ring.modulus
        if not n:
            raise ValueError("n is required for a matrix over Z[t,t^-1]")
        lift = a.map(lambda v: GroupRingElem.from_laurent(v.reduce(n) if v.modulus else v, n), GroupRing(n))
    else:
        raise TypeError(f"unsupported ring {a.ring}")
    a_class = lift.map(to_rn, LaurentRing(n))
    return MModule(n, k, lift, a_class, m_generator_matrix(lift))


def pi2_dual_module(n: int) -> MModule:
    """M(1-t): its generator matrix is exactly the standard d2 = ((1-t, N), (x-1, 0))."""
    zg = GroupRing(n)
    return build_m_module(Matrix([[zg.parse("1-t")]], zg))


def ext1_class(f: Matrix) -> Matrix:
    """Entrywise eps_hat_S: M_k(S) -> M_k(R_n)."""
    if not isinstance(f.ring, QuotientRing):
        raise TypeError("ext1_class expects a matrix over S")
    return f.map(eps_hat_S, LaurentRing(f.ring.n))


def stable_witness_pad(a: Matrix, m: int) -> Matrix:
    if m < 0:
        raise ValueError("m must be >= 0")
    return direct_sum_identity(a, m)


# isomorphism witnesses ------------------------------------------------------

@dataclass
class IsoWitness:
    """C over R = Z[t,t^-1] and D over S with image(C) * A * image(D) = B."""

    C_lift: Matrix
    D_lift: Matrix
    D_inverse: Optional[Matrix] = None


@dataclass
class Report:
    ok: bool
    failed: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_pm_monomial(v: Laurent) -> bool:
    return v.is_monomial() and v.leading_coeff() in (1, -1)


def verify_iso_witness(a: Matrix, b: Matrix, w: IsoWitness) -> Report:
    n = a.ring.modulus
    rn = LaurentRing(n)
    failed = []
    k = a.shape[0]
    if not (a.shape == b.shape == w.C_lift.shape == w.D_lift.shape == (k, k)):
        return Report(False, ["size mismatch"])
    if not is_pm_monomial(w.C_lift.det()):
        failed.append("C_lift not invertible over R (det is not +-t^j)")
    if w.D_inverse is not None:
        if w.D_lift * w.D_inverse != Matrix.identity(k, w.D_lift.ring):
            failed.append("D_lift * D_inverse != I over S")
    elif not is_unit_rn(eps_hat_S(w.D_lift.det()), ModulusDecomp.of(n)):
        failed.append("eps_hat_S(det D_lift) is not a unit of R_n")
    c_img = w.C_lift.map(lambda v: v.reduce(n), rn)
    d_img = w.D_lift.map(eps_hat_S, rn)
    if c_img * a * d_img != b:
        failed.append("CAD != B")
    return Report(not failed, failed)


# units of S_Z = Z[C_n]/(N) ---------------------------------------------------

def _int_det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [row[:] for row in m]
    k = len(a)
    sign, prev = 1, 1
    for i in range(k - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if a[r][i]), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1] if k else 1


def _coords(s: SElem) -> list[int]:
    v = [0] * (s.n - 1)
    for (a, b), c in s.terms.items():
        if b:
            raise ValueError("element is not t-free")
        v[a] = c
    return v


def _mult_matrix(s: SElem) -> list[list[int]]:
    n = s.n
    cols = [_coords(s * SElem(n, {(i, 0): 1})) for i in range(n - 1)]
    return [list(r) for r in zip(*cols)]


def s_unit_inverse(s: SElem) -> Optional[SElem]:
    """Inverse of a t-free element of S_Z = Z[C_n]/(N), or None when not a unit."""
    m = _mult_matrix(s)
    if abs(_int_det(m)) != 1:
        return None
    k = len(m)
    aug = [[Fraction(v) for v in row] + [Fraction(1 if r == 0 else 0)] for r, row in enumerate(m)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    sol = [aug[r][k] for r in range(k)]
    if any(v.denominator != 1 for v in sol):
        return None
    inv = SElem(s.n, {(i, 0): int(v) for i, v in enumerate(sol)})
    return inv if s * inv == SElem.const(s.n, 1) else None


@lru_cache(maxsize=256)
def find_s_unit(n: int, targets: frozenset, span: int = 4, box: int = 4):
    """Bounded search for a unit s of S_Z with eps(s) mod n in ``targets``.

    Candidates are supported on x^0..x^span (span capped at n-2), coefficients
    in [-box, box], visited shell by shell in max-norm.  Returns (s, s^-1) or None.
    """
    width = min(span, n - 2) + 1
    for radius in range(0, box + 1):
        for coeffs in product(range(-radius, radius + 1), repeat=width):
            if max(map(abs, coeffs)) != radius:
                continue
            if sum(coeffs) % n not in targets:
                continue
            s = SElem(n, {(i, 0): c for i, c in enumerate(coeffs)})
            if s.is_zero():
                continue
            inv = s_unit_inverse(s)
            if inv is not None:
                return s, inv
    return None


# scalar stable equivalence ---------------------------------------------------------

@dataclass
class Reduced:
    left: ElementaryWord
    right: ElementaryWord
    B_new: Matrix
    normalizer: Optional[IsoWitness] = None

    verdict = "Reduced"


@dataclass
class Obstructed:
    reason: str
    det: Laurent

    verdict = "Obstructed"


def _unit_normalizer(det_b: Laurent, alpha: Laurent) -> Optional[tuple[int, int]]:
    """(r, j) with det_b == r * t^j * alpha for an integer unit r mod n."""
    n = alpha.modulus
    if det_b.is_zero():
        return None
    for r in units_mod(n):
        cand = alpha * r
        if cand.is_zero():
            continue
        j = det_b.min_exp - cand.min_exp
        if cand.shift(j) == det_b:
            return r, j
    return None


def decide_scalar_stable_equiv(alpha: Laurent, b: Matrix, span: int = 4, box: int = 4) -> Union[Reduced, Obstructed]:
    """Reduce B to alpha (+) I_(k-1), normalizing det(B) by known units first.

    Normalizers are +-t^j (units of R) times augmentations of units of S_Z
    found by bounded search.  Obstructed means "not equivalent through the
    known normalizers", or a genuine mod-p Smith form obstruction.
    """
    n = b.ring.modulus
    rn = LaurentRing(n)
    alpha = rn.coerce(alpha)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    k = b.shape[0]
    det_b = b.det()
    normalizer = None
    b_new = b
    if det_b != alpha:
        found = _unit_normalizer(det_b, alpha)
        if found is None:
            return Obstructed(f"det(B) = {det_b} is not (+-t^j)*(unit)*alpha for any known normalizer", det_b)
        r, j = found
        r_inv = pow(r, -1, n)
        hit = find_s_unit(n, frozenset({r_inv % n, -r_inv % n}), span, box)
        if hit is None:
            return Obstructed(f"no unit of S_Z with augmentation +-{r_inv} mod {n} in the search box", det_b)
        s, s_inv = hit
        sigma = 1 if sum(s.terms.values()) % n == r_inv % n else -1
        zr, qs = LaurentRing(0), QuotientRing(n)
        c_lift = direct_sum_identity(Matrix([[Laurent.monomial(sigma, -j)]], zr), k - 1)
        d_lift = direct_sum_identity(Matrix([[s]], qs), k - 1)
        d_inv = direct_sum_identity(Matrix([[s_inv]], qs), k - 1)
        normalizer = IsoWitness(c_lift, d_lift, d_inv)
        b_new = normalize_by_determinants(
            b,
            Matrix([[Laurent.monomial(sigma, -j, n)]], rn),
            Matrix([[eps_hat_S(s)]], rn),
        )
    try:
        left, right = reduce_to_alpha_block(b_new, alpha)
    except SnfObstruction as exc:
        return Obstructed(str(exc), det_b)
    return Reduced(left, right, b_new, normalizer)


def check_reduced(alpha: Laurent, b: Matrix, verdict: Reduced) -> list[str]:
    problems = []
    k = b.shape[0]
    target = direct_sum_identity(Matrix([[alpha]], b.ring), k - 1)
    if verdict.left.evaluate() * verdict.B_new * verdict.right.evaluate() != target:
        problems.append("left*B_new*right != alpha (+) I")
    if verdict.normalizer is None:
        if verdict.B_new != b:
            problems.append("B_new differs from B without a normalizer")
    else:
        rep = verify_iso_witness(b, verdict.B_new, verdict.normalizer)
        problems.extend(rep.failed)
    return problems


# Swan modules over finite cyclic G ----------------------------------------------

@dataclass(frozen=True)
class SwanMModule:
    n: int
    k: int
    A_class: Matrix  # over Z_n (t-free Laurent constants)
    A_lift: Matrix   # over Z[G] inside Z[Gamma]
    gen_matrix: Matrix

    def check_invariants(self) -> list[str]:
        n, k = self.n, self.k
        g = self.gen_matrix.rows
        N = GroupRingElem.norm(n)
        problems = []
        if self.gen_matrix.shape != (k * (n + 1), 2 * k):
            problems.append("wrong generator matrix shape")
            return problems
        for i in range(k):
            for j in range(k):
                eye = 1 if i == j else 0
                if g[i][j] != self.A_lift.rows[i][j] or g[i][k + j] != N * eye:
                    problems.append(f"top block differs at ({i},{j})")
                for gi in range(n):
                    xg = GroupRingElem.monomial(n, gi, 0) - 1
                    if g[k * (gi + 1) + i][j] != xg * eye or g[k * (gi + 1) + i][k + j]:
                        problems.append(f"(g_{gi + 1}-1) block differs at ({i},{j})")
        if any(b for row in g for v in row for (_, b) in v.terms):
            problems.append("generator matrix is not t-free")
        return problems


def build_swan_module(n: int, k: int, a: Matrix) -> SwanMModule:
    """M(A) over Z[C_n]; for k = 1 and a unit r this is the Swan module (N, r)."""
    if a.shape != (k, k):
        raise DimensionMismatch(f"A must be {k}x{k}")
    zn = LaurentRing(n)
    a_class = a.map(lambda v: v.reduce(n) if isinstance(v, Laurent) and v.modulus else zn.coerce(v), zn)
    if any(b for row in a_class.rows for v in row for b in v.terms):
        raise ValueError("Swan class matrix must be t-free")
    zg = GroupRing(n)
    lift = a_class.map(lambda v: GroupRingElem(n, {(0, 0): v.coeff(0)}), zg)
    N = GroupRingElem.norm(n)
    rows = [list(lift.rows[i]) + [N if i == j else zg.zero() for j in range(k)] for i in range(k)]
    for gi in range(n):
        xg = GroupRingElem.monomial(n, gi, 0) - 1
        for i in range(k):
            rows.append([xg if i == j else zg.zero() for j in range(k)] + [zg.zero()] * k)
    return SwanMModule(n, k, a_class, lift, Matrix._raw(rows, zg))


def verify_swan_freeness_witness(m: SwanMModule, d_lift: Matrix, d_inverse: Optional[Matrix] = None) -> Report:
    """D over S_Z with eps(D) = A mod n and D invertible over S_Z."""
    n, k = m.n, m.k
    qs = QuotientRing(n)
    if isinstance(d_lift.ring, LaurentRing):
        # integer matrices: GL_k(Z) sits inside GL_k(S_Z)
        d_lift = d_lift.map(lambda v: SElem(n, {(0, j): c for j, c in v.terms.items()}), qs)
    failed = []
    if d_lift.shape != (k, k):
        return Report(False, ["size mismatch"])
    if any(not v.is_t_free() for row in d_lift.rows for v in row):
        failed.append("D_lift is not over S_Z (contains t)")
    elif d_lift.map(eps_hat_S, LaurentRing(n)) != m.A_class:
        failed.append("eps(D_lift) != A mod n")
    if d_inverse is not None:
        if d_lift * d_inverse != Matrix.identity(k, qs):
            failed.append("D_lift * D_inverse != I over S_Z")
    elif not failed:
        if s_unit_inverse(d_lift.det()) is None:
            failed.append("det(D_lift) is not a unit of S_Z")
    return Report(not failed, failed)
