"""Laurent polynomials in one variable t over Z, Z/m and F_p.

Also home of the modulus decomposition n = prod p^e, the CRT split/join of
Z_n[t, t^-1] into prime-power components, and unit inversion in
Z_n[t, t^-1] via nilpotent reduction kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Union

from ..errors import ModulusMismatch, NotAUnit, ParseError
from .text import format_terms, parse_terms


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as sorted (p, e) pairs."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


@dataclass(frozen=True)
class ModulusDecomp:
    """n together with its prime decomposition."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"modulus must be >= 2, got {self.n}")
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)) or prod(p**e for p, e in self.factors) != self.n:
            raise ValueError(f"bad factorization {self.factors} of {self.n}")

    @classmethod
    def of(cls, n: int) -> "ModulusDecomp":
        return cls(n, tuple(factorize(n)))

    @property
    def moduli(self) -> list[int]:
        return [p**e for p, e in self.factors]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @cached_property
    def idempotents(self) -> list[int]:
        # e_i = 1 mod q_i, 0 mod q_j (j != i)
        out = []
        for q in self.moduli:
            rest = self.n // q
            out.append(rest * pow(rest, -1, q) % self.n)
        return out

    def join_ints(self, residues: Iterable[int]) -> int:
        return sum(r * e for r, e in zip(residues, self.idempotents)) % self.n


Coeff = int


class Laurent:
    """Sparse Laurent polynomial ``sum c_j t^j``.

    ``modulus == 0`` means integer coefficients; otherwise coefficients live in
    Z/modulus and are stored reduced into ``[0, modulus)``.  Instances are
    immutable and hashable.
    """

    __slots__ = ("terms", "modulus", "_hash")

    def __init__(self, terms: Union[dict, None] = None, modulus: int = 0):
        if modulus < 0 or modulus == 1:
            raise ValueError(f"invalid modulus {modulus}")
        clean = {}
        if terms:
            for j, c in terms.items():
                if modulus:
                    c %= modulus
                if c:
                    clean[int(j)] = c
        self.terms = clean
        self.modulus = modulus
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, modulus: int) -> "Laurent":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.modulus = modulus
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: int, modulus: int = 0) -> "Laurent":
        return cls({0: c}, modulus)

    @classmethod
    def monomial(cls, c: int, j: int, modulus: int = 0) -> "Laurent":
        return cls({j: c}, modulus)

    @classmethod
    def t(cls, modulus: int = 0) -> "Laurent":
        return cls({1: 1}, modulus)

    @classmethod
    def parse(cls, text: str, modulus: int = 0) -> "Laurent":
        terms = parse_terms(text, variables="t")
        return cls({b: c for (_, b), c in terms.items()}, modulus)

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, j: int) -> int:
        return self.terms.get(j, 0)

    @property
    def min_exp(self) -> int:
        return min(self.terms)

    @property
    def max_exp(self) -> int:
        return max(self.terms)

    @property
    def span(self) -> int:
        """max exponent - min exponent; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return self.max_exp - self.min_exp

    def leading_coeff(self) -> int:
        return self.terms[self.max_exp]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == {0: 1}

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot combine coefficients mod {self.modulus} and mod {other.modulus}"
                )
            return other
        if isinstance(other, int):
            return Laurent.const(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        m = self.modulus
        for j, c in other.terms.items():
            v = out.get(j, 0) + c
            if m:
                v %= m
            if v:
                out[j] = v
            else:
                out.pop(j, None)
        return Laurent._raw(out, m)

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus
        if m:
            return Laurent._raw({j: m - c for j, c in self.terms.items()}, m)
        return Laurent._raw({j: -c for j, c in self.terms.items()}, 0)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({j: c * other for j, c in self.terms.items()}, self.modulus)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        m = self.modulus
        if m:
            return Laurent._raw({j: c % m for j, c in out.items() if c % m}, m)
        return Laurent._raw({j: c for j, c in out.items() if c}, 0)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise NotAUnit("negative powers only for monomials; use invert_unit_rn")
            (j, c), = self.terms.items()
            if self.modulus:
                inv = pow(c, -1, self.modulus)
            elif c in (1, -1):
                inv = c
            else:
                raise NotAUnit(f"{self} is not a unit over Z")
            return Laurent.monomial(inv, -j, self.modulus) ** (-k)
        result = Laurent.const(1, self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other, self.modulus)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus, frozenset(self.terms.items())))
        return self._hash

    # maps ---------------------------------------------------------------
    def shift(self, k: int) -> "Laurent":
        """Multiply by t^k."""
        return Laurent._raw({j + k: c for j, c in self.terms.items()}, self.modulus)

    def reduce(self, m: int) -> "Laurent":
        """Image in Z/m[t, t^-1]; m must divide the current modulus (any m over Z)."""
        if self.modulus and self.modulus % m:
            raise ModulusMismatch(f"{m} does not divide {self.modulus}")
        return Laurent(self.terms, m)

    def lift(self) -> "Laurent":
        """Canonical integer lift, coefficients in [0, modulus)."""
        return Laurent._raw(dict(self.terms), 0)

    def eval_one(self) -> int:
        """Image under t -> 1."""
        s = sum(self.terms.values())
        return s % self.modulus if self.modulus else s

    def symmetric(self) -> "Laurent":
        """Integer lift with coefficients in (-m/2, m/2]."""
        m = self.modulus
        return Laurent._raw(
            {j: (c - m if c > m // 2 else c) for j, c in self.terms.items()}, 0
        )

    def __str__(self):
        return format_terms({(0, j): c for j, c in self.terms.items()})

    def __repr__(self):
        tag = f" mod {self.modulus}" if self.modulus else ""
        return f"Laurent({self}{tag})"


@dataclass(frozen=True)
class LaurentRing:
    """Descriptor for Z[t,t^-1] (modulus 0) or Z/m[t,t^-1]."""

    modulus: int = 0

    @property
    def name(self) -> str:
        if self.modulus == 0:
            return "Z[t,t^-1]"
        tag = "F" if is_prime(self.modulus) else "Z"
        return f"{tag}_{self.modulus}[t,t^-1]"

    @property
    def is_field_coeffs(self) -> bool:
        return is_prime(self.modulus)

    def zero(self) -> Laurent:
        return Laurent._raw({}, self.modulus)

    def one(self) -> Laurent:
        return Laurent.const(1, self.modulus)

    def from_int(self, c: int) -> Laurent:
        return Laurent.const(c, self.modulus)

    def coerce(self, value) -> Laurent:
        if isinstance(value, Laurent):
            if value.modulus == self.modulus:
                return value
            return value.reduce(self.modulus) if self.modulus else value.lift()
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, str):
            return self.parse(value)
        raise ParseError(f"cannot interpret {value!r} in {self.name}")

    def parse(self, text: str) -> Laurent:
        return Laurent.parse(text, self.modulus)

    def format(self, value: Laurent) -> str:
        return str(value)


# CRT decomposition ------------------------------------------------------

def crt_split(f: Laurent, d: ModulusDecomp) -> list[Laurent]:
    """Components of ``f`` in Z_{p^e}[t,t^-1] for each prime power of n."""
    if f.modulus != d.n:
        raise ModulusMismatch(f"polynomial is mod {f.modulus}, decomposition is of {d.n}")
    return [f.reduce(q) for q in d.moduli]


def crt_join(parts: list[Laurent], d: ModulusDecomp) -> Laurent:
    if len(parts) != len(d.factors):
        raise ModulusMismatch("wrong number of CRT components")
    for part, q in zip(parts, d.moduli):
        if part.modulus != q:
            raise ModulusMismatch(f"component mod {part.modulus}, expected {q}")
    out: dict[int, int] = {}
    for part, e in zip(parts, d.idempotents):
        for j, c in part.terms.items():
            out[j] = out.get(j, 0) + c * e
    return Laurent(out, d.n)


def crt_embed(part: Laurent, index: int, d: ModulusDecomp, fill: int = 0) -> Laurent:
    """Lift one component to Z_n with constant ``fill`` in every other component."""
    parts = [Laurent.const(fill, q) for q in d.moduli]
    parts[index] = part
    return crt_join(parts, d)


# units ------------------------------------------------------------------

@dataclass(frozen=True)
class UnitCert:
    """A unit together with its inverse; ``element * inverse == 1``."""

    element: Laurent
    inverse: Laurent

    def __post_init__(self):
        if not (self.element * self.inverse).is_one():
            raise NotAUnit(f"({self.element})*({self.inverse}) != 1")

    def flipped(self) -> "UnitCert":
        return UnitCert(self.inverse, self.element)


def _invert_prime_power(u: Laurent, p: int, e: int) -> Laurent:
    q = p**e
    low = u.reduce(p)
    if not low.is_monomial():
        raise NotAUnit(f"{u} mod {p} is {low}, not a monomial")
    (k, c), = low.terms.items()
    m_inv = Laurent.monomial(pow(c, -1, q), -k, q)
    h = m_inv * u - 1  # every coefficient divisible by p, so h^e = 0
    term = Laurent.const(1, q)
    total = Laurent.const(1, q)
    for _ in range(e - 1):
        term = term * (-h)
        if term.is_zero():
            break
        total = total + term
    return total * m_inv


def invert_unit_rn(u: Laurent, d: ModulusDecomp) -> UnitCert:
    """Invert a unit of Z_n[t,t^-1].

    Per prime power p^e write u = m (1 + p g) with m a monomial; 1 + p g is
    inverted by its terminating geometric series.
    """
    parts = crt_split(u, d)
    inverses = [
        _invert_prime_power(part, p, e) for part, (p, e) in zip(parts, d.factors)
    ]
    return UnitCert(u, crt_join(inverses, d))


def is_unit_rn(u: Laurent, d: ModulusDecomp) -> bool:
    if u.modulus != d.n:
        raise ModulusMismatch(f"polynomial is mod {u.modulus}, decomposition is of {d.n}")
    return all(u.reduce(p).is_monomial() for p in d.primes)


def unit_cert(u: Laurent) -> UnitCert:
    """Inverse certificate for a unit of any supported Laurent ring."""
    if u.modulus == 0:
        if u.is_monomial() and u.leading_coeff() in (1, -1):
            return UnitCert(u, u ** -1)
        raise NotAUnit(f"{u} is not a unit of Z[t,t^-1]")
    return invert_unit_rn(u, ModulusDecomp.of(u.modulus))


def units_mod(n: int) -> list[int]:
    return [r for r in range(1, n) if gcd(r, n) == 1]
