"""Elementary operations and words of them.

A ``Transvection(i, j, r)`` is the matrix I + r*e_ij.  A ``WhiteheadBlock``
is Diag(..., u at i, ..., u^-1 at j, ...), kept as one op for speed and
expanded on demand into four transvections:

    Diag(u, u^-1) = T12(-u) T21(u^-1 - 1) T12(1) T21(u - 1)

Every op carries a side.  Applying a word to X walks the ops in order and
does X <- M X for side "L" and X <- X M for side "R"; evaluating a word is
applying it to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from ..errors import DimensionMismatch, ParseError
from ..rings import Laurent, LaurentRing, UnitCert
from .matrix import Matrix


@dataclass(frozen=True)
class Transvection:
    i: int
    j: int
    r: Laurent
    side: str = "L"

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("transvection needs i != j")
        if self.side not in ("L", "R"):
            raise ValueError(f"side must be 'L' or 'R', got {self.side!r}")

    def matrix(self, k: int, ring) -> Matrix:
        m = Matrix.identity(k, ring)
        m.rows[self.i][self.j] = self.r
        return m

    def inverse(self) -> "Transvection":
        return Transvection(self.i, self.j, -self.r, self.side)

    def with_side(self, side: str) -> "Transvection":
        return Transvection(self.i, self.j, self.r, side)

    def apply_inplace(self, rows: list[list]) -> None:
        i, j, r = self.i, self.j, self.r
        if not r:
            return
        if self.side == "L":
            src = rows[j]
            rows[i] = [a + r * b if b else a for a, b in zip(rows[i], src)]
        else:
            for row in rows:
                b = row[i]
                if b:
                    row[j] = row[j] + b * r

    def map_entries(self, f) -> "Transvection":
        return Transvection(self.i, self.j, f(self.r), self.side)


@dataclass(frozen=True)
class WhiteheadBlock:
    i: int
    j: int
    unit: UnitCert
    side: str = "L"

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("Whitehead block needs i != j")
        if self.side not in ("L", "R"):
            raise ValueError(f"side must be 'L' or 'R', got {self.side!r}")

    def matrix(self, k: int, ring) -> Matrix:
        m = Matrix.identity(k, ring)
        m.rows[self.i][self.i] = self.unit.element
        m.rows[self.j][self.j] = self.unit.inverse
        return m

    def inverse(self) -> "WhiteheadBlock":
        return WhiteheadBlock(self.i, self.j, self.unit.flipped(), self.side)

    def with_side(self, side: str) -> "WhiteheadBlock":
        return WhiteheadBlock(self.i, self.j, self.unit, side)

    def expand(self) -> list[Transvection]:
        """Four transvections whose matrix product (in list order) is this block."""
        i, j = self.i, self.j
        u, v = self.unit.element, self.unit.inverse
        one = Laurent.const(1, u.modulus)
        seq = [
            Transvection(i, j, -u, self.side),
            Transvection(j, i, v - one, self.side),
            Transvection(i, j, one, self.side),
            Transvection(j, i, u - one, self.side),
        ]
        # X <- M X walks the product right to left
        return seq[::-1] if self.side == "L" else seq

    def apply_inplace(self, rows: list[list]) -> None:
        u, v = self.unit.element, self.unit.inverse
        if self.side == "L":
            rows[self.i] = [a * u for a in rows[self.i]]
            rows[self.j] = [a * v for a in rows[self.j]]
        else:
            for row in rows:
                row[self.i] = row[self.i] * u
                row[self.j] = row[self.j] * v

    def map_entries(self, f) -> "WhiteheadBlock":
        return WhiteheadBlock(self.i, self.j, UnitCert(f(self.unit.element), f(self.unit.inverse)), self.side)


ElementaryOp = Union[Transvection, WhiteheadBlock]


@dataclass
class ElementaryWord:
    """Ordered list of elementary ops acting on k x k matrices over ``ring``."""

    k: int
    ring: LaurentRing
    ops: list = field(default_factory=list)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def append(self, op: ElementaryOp) -> None:
        self.ops.append(op)

    def extend(self, ops: Iterable[ElementaryOp]) -> None:
        self.ops.extend(ops)

    def apply(self, m: Matrix) -> Matrix:
        rows = m.copy_rows()
        r, c = m.shape
        for op in self.ops:
            size = r if op.side == "L" else c
            if max(op.i, op.j) >= size:
                raise DimensionMismatch(f"op on index {max(op.i, op.j)} for size {size}")
            op.apply_inplace(rows)
        return Matrix._raw(rows, m.ring)

    def evaluate(self) -> Matrix:
        return self.apply(Matrix.identity(self.k, self.ring))

    def expanded(self) -> "ElementaryWord":
        out = []
        for op in self.ops:
            out.extend(op.expand() if isinstance(op, WhiteheadBlock) else [op])
        return ElementaryWord(self.k, self.ring, out)

    def evaluate_by_products(self) -> Matrix:
        """Independent evaluation: expand, build every op matrix, multiply."""
        acc = Matrix.identity(self.k, self.ring)
        for op in self.expanded().ops:
            e = op.matrix(self.k, self.ring)
            acc = e * acc if op.side == "L" else acc * e
        return acc

    def inverse_product(self) -> "ElementaryWord":
        """Side-"R" word whose evaluation is the inverse of this word's evaluation."""
        if any(op.side == "L" for op in self.ops) and any(op.side == "R" for op in self.ops):
            raise ValueError("inverse_product expects a single-sided word")
        if self.ops and self.ops[0].side == "L":
            # evaluation is M_m...M_1, inverse is M_1^-1...M_m^-1
            inv = [op.inverse().with_side("R") for op in self.ops]
        else:
            inv = [op.inverse() for op in reversed(self.ops)]
        return ElementaryWord(self.k, self.ring, inv)

    def to_json(self) -> dict:
        ops = []
        for op in self.ops:
            if isinstance(op, Transvection):
                ops.append({"kind": "T", "side": op.side, "i": op.i, "j": op.j, "r": str(op.r)})
            else:
                ops.append({
                    "kind": "W", "side": op.side, "i": op.i, "j": op.j,
                    "u": str(op.unit.element), "u_inv": str(op.unit.inverse),
                })
        return {"k": self.k, "modulus": self.ring.modulus, "ops": ops}

    @classmethod
    def from_json(cls, data: dict, ring: LaurentRing | None = None, k: int | None = None) -> "ElementaryWord":
        try:
            ring = ring or LaurentRing(int(data["modulus"]))
            k = k if k is not None else int(data["k"])
            ops: list[ElementaryOp] = []
            for raw in data["ops"]:
                kind = raw["kind"]
                i, j, side = int(raw["i"]), int(raw["j"]), raw.get("side", "L")
                if not (0 <= i < k and 0 <= j < k):
                    raise ParseError(f"op index out of range for k={k}: {raw}")
                if kind == "T":
                    ops.append(Transvection(i, j, ring.parse(raw["r"]), side))
                elif kind == "W":
                    ops.append(WhiteheadBlock(i, j, UnitCert(ring.parse(raw["u"]), ring.parse(raw["u_inv"])), side))
                else:
                    raise ParseError(f"unknown op kind {kind!r}")
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed elementary word: {exc}") from exc
        return cls(k, ring, ops)
