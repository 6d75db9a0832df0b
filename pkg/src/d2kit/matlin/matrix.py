"""Dense matrices over the ring tower and division-free determinants."""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Sequence

from ..errors import DimensionMismatch


class Matrix:
    """Dense matrix with entries in ``ring`` (a ring descriptor).

    Treated as immutable; algorithms copy ``rows`` before mutating.
    """

    __slots__ = ("ring", "rows")

    def __init__(self, rows: Sequence[Sequence], ring):
        self.ring = ring
        self.rows = [[ring.coerce(v) for v in row] for row in rows]
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def _raw(cls, rows, ring) -> "Matrix":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.rows = rows
        return obj

    @classmethod
    def identity(cls, k: int, ring) -> "Matrix":
        return cls._raw(
            [[ring.one() if i == j else ring.zero() for j in range(k)] for i in range(k)], ring
        )

    @classmethod
    def zeros(cls, r: int, c: int, ring) -> "Matrix":
        return cls._raw([[ring.zero() for _ in range(c)] for _ in range(r)], ring)

    @classmethod
    def diag(cls, entries: Sequence, ring) -> "Matrix":
        k = len(entries)
        m = cls.zeros(k, k, ring)
        for i, e in enumerate(entries):
            m.rows[i][i] = ring.coerce(e)
        return m

    @classmethod
    def from_strings(cls, data: Sequence[Sequence[str]], ring) -> "Matrix":
        return cls([[ring.parse(s) if isinstance(s, str) else s for s in row] for row in data], ring)

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy_rows(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ring
        )

    def __neg__(self):
        return Matrix._raw([[-a for a in r] for r in self.rows], self.ring)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            v = self.ring.coerce(other)
            return Matrix._raw([[a * v for a in r] for r in self.rows], self.ring)
        r, inner = self.shape
        inner2, c = other.shape
        if inner != inner2:
            raise DimensionMismatch(f"{self.shape} * {other.shape}")
        zero = self.ring.zero()
        out = []
        cols = list(zip(*other.rows)) if other.rows else []
        for row in self.rows:
            new = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return Matrix._raw(out, self.ring)

    def scale(self, v) -> "Matrix":
        v = self.ring.coerce(v)
        return Matrix._raw([[v * a for a in r] for r in self.rows], self.ring)

    def transpose(self) -> "Matrix":
        return Matrix._raw([list(c) for c in zip(*self.rows)], self.ring)

    def map(self, f: Callable, ring) -> "Matrix":
        """Entrywise image under a ring map into ``ring``."""
        return Matrix._raw([[ring.coerce(f(a)) for a in r] for r in self.rows], ring)

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def is_diagonal(self) -> bool:
        return all(not a for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> list:
        r, c = self.shape
        return [self.rows[i][i] for i in range(min(r, c))]

    def det(self):
        return det(self)

    def __repr__(self):
        return f"Matrix({self.to_strings()}, {getattr(self.ring, 'name', self.ring)})"


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    ring = a.ring
    ra, ca = a.shape
    rb, cb = b.shape
    out = Matrix.zeros(ra + rb, ca + cb, ring)
    for i in range(ra):
        out.rows[i][:ca] = a.rows[i]
    for i in range(rb):
        out.rows[ra + i][ca:] = b.rows[i]
    return out


def direct_sum_identity(a: Matrix, m: int) -> Matrix:
    """a (+) I_m."""
    return block_diag(a, Matrix.identity(m, a.ring)) if m else a


def _laplace(rows: list[list], zero):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = zero
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _laplace(minor, zero)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _berkowitz(rows: list[list], ring):
    """Division-free determinant via Berkowitz's characteristic polynomial."""
    k = len(rows)
    zero, one = ring.zero(), ring.one()
    # vect holds char-poly coefficients of the leading principal submatrix
    vect = [one, -rows[0][0]]
    for r in range(1, k):
        col = [rows[i][r] for i in range(r)]
        row = rows[r][:r]
        sub = [rw[:r] for rw in rows[:r]]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, ...
        cs = [one, -rows[r][r]]
        v = col
        for _ in range(r):
            acc = zero
            for a, b in zip(row, v):
                acc = acc + a * b
            cs.append(-acc)
            v = [sum((sub[i][j] * v[j] for j in range(r)), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                if i - j < len(cs):
                    acc = acc + cs[i - j] * vect[j]
            new.append(acc)
        vect = new
    d = vect[k]
    return d if k % 2 == 0 else -d


def det(m: Matrix):
    """Determinant over a commutative ring.

    Cofactor expansion for k <= 4, Berkowitz (division free) above.
    """
    if not m.is_square:
        raise DimensionMismatch(f"det of non-square {m.shape} matrix")
    k = m.shape[0]
    if k == 0:
        return m.ring.one()
    if k <= 4:
        return _laplace(m.rows, m.ring.zero())
    return _berkowitz(m.rows, m.ring)


def det_by_permutations(m: Matrix):
    """Leibniz expansion; a slow cross-check for small k."""
    k = m.shape[0]
    acc = m.ring.zero()
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        for i in range(k):
            for j in range(i + 1, k):
                if seen[i] > seen[j]:
                    sign = -sign
        term = m.ring.one()
        for i, j in enumerate(perm):
            term = term * m.rows[i][j]
        acc = acc + term if sign > 0 else acc - term
    return acc
