"""Text encoding of ring elements.

A term is ``c*x^a*t^b``; a polynomial is a signed sum of terms.  Parsing is
lenient about whitespace, ordering, repeated monomials and ``t^(-1)`` style
exponents.  Formatting is canonical: terms in descending ``(a, b)`` order,
unit coefficients dropped, ``-`` used for negative terms, ``0`` for zero.
"""

from __future__ import annotations

import re

from ..errors import ParseError

_EXP_SIGN = re.compile(r"\^\s*[({]?\s*-")
_FACTOR = re.compile(r"^([A-Za-z])(?:\^[({]?([+-]?\d+)[)}]?)?$")


def parse_terms(text: str, variables: str = "xt") -> dict[tuple[int, int], int]:
    """Parse ``text`` into a map ``(x-exponent, t-exponent) -> integer``.

    ``variables`` lists the letters allowed; anything else is a ParseError.
    """
    if not isinstance(text, str):
        if isinstance(text, int):
            return {(0, 0): text} if text else {}
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}")
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial")
    # protect negative exponents before splitting on signs
    s = _EXP_SIGN.sub("^~", s).replace("^(~", "^~").replace("^{~", "^~")
    s = s.replace("^(", "^").replace("^{", "^")
    pieces = re.split(r"(?=[+-])", s)
    out: dict[tuple[int, int], int] = {}
    for piece in pieces:
        if not piece:
            continue
        sign = 1
        while piece and piece[0] in "+-":
            if piece[0] == "-":
                sign = -sign
            piece = piece[1:]
        if not piece:
            raise ParseError(f"dangling sign in {text!r}")
        coeff, a, b = sign, 0, 0
        for factor in piece.split("*"):
            factor = factor.replace("~", "-").rstrip(")}")
            if not factor:
                raise ParseError(f"empty factor in {text!r}")
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
            var, exp = m.group(1), int(m.group(2)) if m.group(2) is not None else 1
            if var not in variables:
                raise ParseError(f"variable {var!r} not allowed here (allowed: {variables})")
            if var == "x":
                a += exp
            else:
                b += exp
        key = (a, b)
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def _monomial(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("x" if a == 1 else f"x^{a}")
    if b:
        parts.append("t" if b == 1 else f"t^{b}")
    return "*".join(parts)


def format_terms(terms: dict[tuple[int, int], int]) -> str:
    if not terms:
        return "0"
    chunks = []
    for (a, b) in sorted(terms, reverse=True):
        c = terms[(a, b)]
        mono = _monomial(a, b)
        if not mono:
            chunk = str(c)
        elif c == 1:
            chunk = mono
        elif c == -1:
            chunk = "-" + mono
        else:
            chunk = f"{c}*{mono}"
        if chunks and not chunk.startswith("-"):
            chunk = "+" + chunk
        chunks.append(chunk)
    return "".join(chunks)
