"""Factoring x^n - 1 over F_p and the maximal-ideal candidates (p, omega(x)) of Z[C_n].

Polynomials here are plain tuples of coefficients in F_p, lowest degree
first, with no trailing zeros.  Over F_p with n = m p^s and p not dividing m
we have x^n - 1 = (x^m - 1)^(p^s), and x^m - 1 is squarefree, so only the
squarefree part needs splitting (distinct-degree then equal-degree).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .rings import factorize, format_terms, is_prime

Poly = tuple[int, ...]


def trim(a) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def degree(a: Poly) -> int:
    return len(a) - 1


def add(a: Poly, b: Poly, p: int) -> Poly:
    m = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(m))


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, tuple(-c for c in b), p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(c % p for c in out)


def divmod_poly(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    inv = pow(b[-1], -1, p)
    db = degree(b)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            for j, y in enumerate(b):
                r[k - db + j] = (r[k - db + j] - c * y) % p
    return trim(q), trim(r[:db])


def monic(a: Poly, p: int) -> Poly:
    inv = pow(a[-1], -1, p)
    return tuple(c * inv % p for c in a)


def gcd_poly(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    return monic(a, p) if a else a


def derivative(a: Poly, p: int) -> Poly:
    return trim(i * c % p for i, c in enumerate(a))[1:] if len(a) > 1 else ()


def powmod(a: Poly, e: int, f: Poly, p: int) -> Poly:
    result: Poly = (1,)
    base = divmod_poly(a, f, p)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base, p), f, p)[1]
        base = divmod_poly(mul(base, base, p), f, p)[1]
        e >>= 1
    return result


def xn_minus_1(n: int, p: int) -> Poly:
    return trim([(-1) % p] + [0] * (n - 1) + [1])


def is_squarefree(a: Poly, p: int) -> bool:
    return degree(gcd_poly(a, derivative(a, p), p)) == 0


def monic_polys(deg: int, p: int):
    for low in product(range(p), repeat=deg):
        yield tuple(low) + (1,)


def is_irreducible(a: Poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    d = degree(a)
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for f in monic_polys(k, p):
            if not divmod_poly(a, f, p)[1]:
                return False
    return True


def _distinct_degree(f: Poly, p: int) -> list[tuple[Poly, int]]:
    out = []
    h: Poly = (0, 1)
    i = 0
    while degree(f) >= 2 * (i + 1):
        i += 1
        h = powmod(h, p, f, p)
        g = gcd_poly(f, sub(h, (0, 1), p), p)
        if degree(g) > 0:
            out.append((g, i))
            f = divmod_poly(f, g, p)[0]
            h = divmod_poly(h, f, p)[1]
    if degree(f) > 0:
        out.append((monic(f, p), degree(f)))
    return out


def _equal_degree(f: Poly, d: int, p: int, rng: random.Random) -> list[Poly]:
    if degree(f) == d:
        return [monic(f, p)]
    while True:
        a = trim(rng.randrange(p) for _ in range(degree(f)))
        if degree(a) < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            b, acc = a, a
            for _ in range(d - 1):
                b = divmod_poly(mul(b, b, p), f, p)[1]
                acc = add(acc, b, p)
        else:
            acc = sub(powmod(a, (p**d - 1) // 2, f, p), (1,), p)
        g = gcd_poly(f, acc, p)
        if 0 < degree(g) < degree(f):
            return _equal_degree(g, d, p, rng) + _equal_degree(divmod_poly(f, g, p)[0], d, p, rng)


def factor_squarefree(f: Poly, p: int, seed: int = 0) -> list[Poly]:
    rng = random.Random(seed)
    out = []
    for g, d in _distinct_degree(monic(f, p), p):
        out.extend(_equal_degree(g, d, p, rng))
    return sorted(out, key=lambda g: (degree(g), sym_coeffs(g, p)))


def sym(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def sym_coeffs(a: Poly, p: int) -> tuple[int, ...]:
    return tuple(sym(c, p) for c in a)


def format_poly(a: Poly, p: int) -> str:
    """Text form in x with coefficients in (-p/2, p/2]."""
    return format_terms({(i, 0): sym(c, p) for i, c in enumerate(a) if c % p})


def factor_xn_minus_1(n: int, p: int, seed: int = 0) -> list[tuple[Poly, int]]:
    """Irreducible factors of x^n - 1 over F_p with multiplicities."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    m, s = n, 0
    while m % p == 0:
        m //= p
        s += 1
    return [(g, p**s) for g in factor_squarefree(xn_minus_1(m, p), p, seed)]


def expand_factorization(factors: list[tuple[Poly, int]], p: int) -> Poly:
    acc: Poly = (1,)
    for g, e in factors:
        for _ in range(e):
            acc = mul(acc, g, p)
    return acc


@dataclass(frozen=True)
class MaxIdealCandidate:
    p: int
    omega: Poly

    @property
    def omega_text(self) -> str:
        return format_poly(self.omega, self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "omega": self.omega_text}


def enumerate_candidates(n: int, seed: int = 0) -> list[MaxIdealCandidate]:
    """(p, omega) for p | n and omega a distinct irreducible factor of x^n - 1 mod p."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out = []
    for p, _ in factorize(n):
        for g, _ in factor_xn_minus_1(n, p, seed):
            out.append(MaxIdealCandidate(p, g))
    return out
