"""The group ring Z[C_n x C_inf], its quotient S = Z[Gamma]/(N) and the maps between them.

Elements are sparse maps ``(a, b) -> c`` meaning ``c x^a t^b`` with ``a``
reduced mod n.  ``n == 0`` is allowed for the group ring and means x has
infinite order (Z[C_inf x C_inf]).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ModulusMismatch, NotDivisible, ParseError
from .laurent import Laurent
from .text import format_terms, parse_terms


def _add_into(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class GroupRingElem:
    """Element of Z[C_n x C_inf]."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms=None):
        if n < 0:
            raise ValueError("n must be >= 0")
        clean: dict[tuple[int, int], int] = {}
        if terms:
            for (a, b), c in terms.items():
                if c:
                    key = (a % n if n else a, b)
                    _add_into(clean, key, c)
        self.n = n
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, n: int, c: int) -> "GroupRingElem":
        return cls(n, {(0, 0): c})

    @classmethod
    def monomial(cls, n: int, a: int, b: int, c: int = 1) -> "GroupRingElem":
        return cls(n, {(a, b): c})

    @classmethod
    def x(cls, n: int) -> "GroupRingElem":
        return cls.monomial(n, 1, 0)

    @classmethod
    def t(cls, n: int) -> "GroupRingElem":
        return cls.monomial(n, 0, 1)

    @classmethod
    def norm(cls, n: int) -> "GroupRingElem":
        """N = 1 + x + ... + x^(n-1)."""
        if n < 1:
            raise ValueError("N needs a finite cyclic factor")
        return cls(n, {(a, 0): 1 for a in range(n)})

    @classmethod
    def from_laurent(cls, f: Laurent, n: int) -> "GroupRingElem":
        """Embed R (or the canonical [0, m) lift of R_m) as x-degree 0."""
        return cls(n, {(0, j): c for j, c in f.terms.items()})

    @classmethod
    def parse(cls, text: str, n: int) -> "GroupRingElem":
        return cls(n, parse_terms(text, "xt"))

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, GroupRingElem):
            if other.n != self.n:
                raise ModulusMismatch(f"group orders differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return GroupRingElem.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return GroupRingElem._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(self.n, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.n
        out: dict[tuple[int, int], int] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                a = a1 + a2
                if n:
                    a %= n
                key = (a, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return GroupRingElem._raw(n, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) == 1:
                ((a, b), c), = self.terms.items()
                if c in (1, -1):
                    return GroupRingElem.monomial(self.n, -a, -b, c) ** (-k)
            raise ArithmeticError("negative powers only for +-monomials")
        result = GroupRingElem.const(self.n, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElem.const(self.n, other)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def rows(self) -> list[Laurent]:
        """Coefficient series of x^0, ..., x^(n-1) as integer Laurent polynomials."""
        if not self.n:
            raise ValueError("rows() needs a finite cyclic factor")
        rows: list[dict] = [{} for _ in range(self.n)]
        for (a, b), c in self.terms.items():
            rows[a][b] = c
        return [Laurent(r) for r in rows]

    def __str__(self):
        return format_terms(self.terms)

    def __repr__(self):
        return f"GroupRingElem(n={self.n}, {self})"


class SElem:
    """Element of S = Z[Gamma]/(N), stored with the x^(n-1) row eliminated."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms=None):
        if n < 2:
            raise ValueError("S needs n >= 2")
        out: dict[tuple[int, int], int] = {}
        if terms:
            for (a, b), c in terms.items():
                a %= n
                if a == n - 1:
                    # x^(n-1) t^b = -(1 + ... + x^(n-2)) t^b modulo N
                    for i in range(n - 1):
                        _add_into(out, (i, b), -c)
                else:
                    _add_into(out, (a, b), c)
        self.n = n
        self.terms = out
        self._hash = None

    @classmethod
    def from_group(cls, g: GroupRingElem) -> "SElem":
        return cls(g.n, g.terms)

    @classmethod
    def const(cls, n: int, c: int) -> "SElem":
        return cls(n, {(0, 0): c})

    @classmethod
    def parse(cls, text: str, n: int) -> "SElem":
        return cls(n, parse_terms(text, "xt"))

    def lift(self) -> GroupRingElem:
        return GroupRingElem(self.n, self.terms)

    def _coerce(self, other):
        if isinstance(other, SElem):
            if other.n != self.n:
                raise ModulusMismatch(f"group orders differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return SElem.const(self.n, other)
        if isinstance(other, GroupRingElem):
            return SElem.from_group(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        obj = SElem.__new__(SElem)
        obj.n, obj.terms, obj._hash = self.n, out, None
        return obj

    __radd__ = __add__

    def __neg__(self):
        obj = SElem.__new__(SElem)
        obj.n, obj.terms, obj._hash = self.n, {k: -c for k, c in self.terms.items()}, None
        return obj

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return SElem(self.n, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SElem.from_group(self.lift() * other.lift())

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, GroupRingElem)):
            other = self._coerce(other)
        if not isinstance(other, SElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("S", self.n, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_t_free(self) -> bool:
        return all(b == 0 for _, b in self.terms)

    def __str__(self):
        return format_terms(self.terms)

    def __repr__(self):
        return f"SElem(n={self.n}, {self})"


@dataclass(frozen=True)
class GroupRing:
    """Descriptor for Z[C_n x C_inf] (n = 0: Z[C_inf x C_inf])."""

    n: int

    @property
    def name(self) -> str:
        return f"Z[C_{self.n} x C_inf]" if self.n else "Z[C_inf x C_inf]"

    def zero(self) -> GroupRingElem:
        return GroupRingElem(self.n)

    def one(self) -> GroupRingElem:
        return GroupRingElem.const(self.n, 1)

    def from_int(self, c: int) -> GroupRingElem:
        return GroupRingElem.const(self.n, c)

    def coerce(self, value) -> GroupRingElem:
        if isinstance(value, GroupRingElem) and value.n == self.n:
            return value
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Laurent):
            return GroupRingElem.from_laurent(value, self.n)
        raise ParseError(f"cannot interpret {value!r} in {self.name}")

    def parse(self, text: str) -> GroupRingElem:
        return GroupRingElem.parse(text, self.n)

    def format(self, value) -> str:
        return str(value)


@dataclass(frozen=True)
class QuotientRing:
    """Descriptor for S = Z[C_n x C_inf]/(N)."""

    n: int

    @property
    def name(self) -> str:
        return f"Z[C_{self.n} x C_inf]/(N)"

    def zero(self) -> SElem:
        return SElem(self.n)

    def one(self) -> SElem:
        return SElem.const(self.n, 1)

    def from_int(self, c: int) -> SElem:
        return SElem.const(self.n, c)

    def coerce(self, value) -> SElem:
        if isinstance(value, SElem) and value.n == self.n:
            return value
        if isinstance(value, GroupRingElem):
            return SElem.from_group(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, str):
            return self.parse(value)
        raise ParseError(f"cannot interpret {value!r} in {self.name}")

    def parse(self, text: str) -> SElem:
        return SElem.parse(text, self.n)

    def format(self, value) -> str:
        return str(value)


# augmentations ----------------------------------------------------------

def augment_eps(a: GroupRingElem) -> int:
    """x -> 1, t -> 1."""
    return sum(a.terms.values())


def augment_x(a: GroupRingElem) -> Laurent:
    """x -> 1; the ring map Z[Gamma] -> R = Z[t, t^-1]."""
    out: dict[int, int] = {}
    for (_, b), c in a.terms.items():
        out[b] = out.get(b, 0) + c
    return Laurent(out)


def eps_hat_S(s: SElem) -> Laurent:
    """S -> R_n: x -> 1 then reduce coefficients mod n."""
    out: dict[int, int] = {}
    for (_, b), c in s.terms.items():
        out[b] = out.get(b, 0) + c
    return Laurent(out, s.n)


def to_rn(a: GroupRingElem) -> Laurent:
    """Z[Gamma] -> R_n, the composite of augment_x and reduction mod n."""
    return augment_x(a).reduce(a.n)


def divide_by_x_minus_1(a: GroupRingElem) -> GroupRingElem:
    """Return alpha with alpha*(x-1) == a; alpha is unique modulo (N).

    The representative returned has zero x^(n-1) row.
    """
    if a.n < 1:
        raise ValueError("division by x-1 implemented for finite n only")
    if not augment_x(a).is_zero():
        raise NotDivisible(f"augment_x({a}) = {augment_x(a)} != 0")
    n = a.n
    by_t: dict[int, list[int]] = {}
    for (i, b), c in a.terms.items():
        by_t.setdefault(b, [0] * n)[i] += c
    out: dict[tuple[int, int], int] = {}
    for b, coeffs in by_t.items():
        running = 0
        for i in range(n):
            running += coeffs[i]
            if running:
                out[(i, b)] = -running
    return GroupRingElem(n, out)
