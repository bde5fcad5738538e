"""Exact nonnegative rational matrices, support patterns and column-pattern counts.

A matrix is stored as a flat tuple of integer numerators over one shared
positive denominator, kept in lowest terms.  Two matrices are equal exactly
when their shapes, numerators and denominators agree, so equality and hashing
are structural.  Vectors are one-column matrices and row vectors are one-row
matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(text.strip())


def format_rational(x: Scalar) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class ExactMatrix:
    """Dense matrix of exact nonnegative rationals."""

    __slots__ = ("_rows", "_cols", "_num", "_den", "_hash")

    def __init__(self, rows: int, cols: int, num: Sequence[int], den: int = 1, *, _reduced: bool = False):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        if len(num) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(num)}")
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = tuple(num)
        if any(v < 0 for v in num):
            raise ValueError("entries must be nonnegative")
        if not _reduced and den != 1:
            g = reduce(gcd, num, den)
            if g > 1:
                num = tuple(v // g for v in num)
                den //= g
        self._rows = rows
        self._cols = cols
        self._num = num
        self._den = den
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[Scalar | str]]) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        flat = [parse_rational(x) for r in data for x in r]
        return cls._from_fractions(rows, cols, flat)

    @classmethod
    def _from_fractions(cls, rows: int, cols: int, flat: Sequence[Fraction]) -> "ExactMatrix":
        den = reduce(_lcm, (x.denominator for x in flat), 1)
        num = [x.numerator * (den // x.denominator) for x in flat]
        return cls(rows, cols, num, den)

    @classmethod
    def column(cls, values: Iterable[Scalar | str]) -> "ExactMatrix":
        vals = [parse_rational(v) for v in values]
        return cls._from_fractions(len(vals), 1, vals)

    @classmethod
    def row(cls, values: Iterable[Scalar | str]) -> "ExactMatrix":
        vals = [parse_rational(v) for v in values]
        return cls._from_fractions(1, len(vals), vals)

    @classmethod
    def identity(cls, d: int) -> "ExactMatrix":
        return cls(d, d, [1 if i == j else 0 for i in range(d) for j in range(d)], _reduced=True)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [0] * (rows * cols), _reduced=True)

    @classmethod
    def basis(cls, d: int, i: int) -> "ExactMatrix":
        """Canonical column vector U_i, 0-based index."""
        return cls(d, 1, [1 if k == i else 0 for k in range(d)], _reduced=True)

    # access -----------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._cols

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(ij)
        return Fraction(self._num[i * self._cols + j], self._den)

    def is_nonzero(self, i: int, j: int) -> bool:
        return self._num[i * self._cols + j] != 0

    def to_rows(self) -> list[list[Fraction]]:
        c, d = self._cols, self._den
        return [[Fraction(self._num[i * c + j], d) for j in range(c)] for i in range(self._rows)]

    def to_list(self) -> list[Fraction]:
        """Entries of a vector (either orientation) as a flat list."""
        return [Fraction(v, self._den) for v in self._num]

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self.to_rows()]

    def to_numpy(self):
        import numpy as np

        return np.array(self.to_float_rows(), dtype=float).reshape(self._rows, self._cols)

    def col(self, j: int) -> "ExactMatrix":
        c = self._cols
        return ExactMatrix(self._rows, 1, [self._num[i * c + j] for i in range(self._rows)], self._den)

    def row_at(self, i: int) -> "ExactMatrix":
        c = self._cols
        return ExactMatrix(1, c, self._num[i * c:(i + 1) * c], self._den)

    def col_nums(self, j: int) -> list[int]:
        c = self._cols
        return [self._num[i * c + j] for i in range(self._rows)]

    def transpose(self) -> "ExactMatrix":
        r, c = self._rows, self._cols
        return ExactMatrix(c, r, [self._num[i * c + j] for j in range(c) for i in range(r)], self._den, _reduced=True)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_square(self) -> bool:
        return self._rows == self._cols

    # arithmetic -------------------------------------------------------------

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return product(self, other)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = _lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        return ExactMatrix(self._rows, self._cols, [a * fa + b * fb for a, b in zip(self._num, other._num)], den)

    def scale(self, s: Scalar) -> "ExactMatrix":
        s = Fraction(s)
        if s < 0:
            raise ValueError("negative scalar")
        return ExactMatrix(self._rows, self._cols, [v * s.numerator for v in self._num], self._den * s.denominator)

    def __mul__(self, s: Scalar) -> "ExactMatrix":
        if isinstance(s, ExactMatrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __truediv__(self, s: Scalar) -> "ExactMatrix":
        s = Fraction(s)
        if s <= 0:
            raise ZeroDivisionError("division by a nonpositive scalar")
        return self.scale(1 / s)

    def __pow__(self, n: int) -> "ExactMatrix":
        if not self.is_square() or n < 0:
            raise ValueError("power needs a square matrix and n >= 0")
        result = ExactMatrix.identity(self._rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def normalized(self) -> "ExactMatrix":
        """Divide by the entry sum (the result has norm 1)."""
        s = sum(self._num)
        if s == 0:
            raise ZeroDivisionError("cannot normalize a zero matrix")
        return ExactMatrix(self._rows, self._cols, self._num, s)

    def norm1(self) -> Fraction:
        return Fraction(sum(self._num), self._den)

    def col_norms(self) -> list[Fraction]:
        c = self._cols
        return [Fraction(sum(self._num[i * c + j] for i in range(self._rows)), self._den) for j in range(c)]

    def __le__(self, other: "ExactMatrix") -> bool:
        """Entrywise comparison."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return all(a * other._den <= b * self._den for a, b in zip(self._num, other._num))

    def __ge__(self, other: "ExactMatrix") -> bool:
        return other.__le__(self)

    # identity ---------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self._rows, self._cols, self._den, self._num) == (other._rows, other._cols, other._den, other._num)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._rows, self._cols, self._den, self._num))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.to_rows())
        return f"ExactMatrix({self._rows}x{self._cols}: {body})"

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self._rows,
            "cols": self._cols,
            "data": [[format_rational(x) for x in r] for r in self.to_rows()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        m = cls.from_rows(obj["data"])
        if m.shape != (obj["rows"], obj["cols"]):
            raise ValueError("declared shape does not match data")
        return m


def product(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact matrix product."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    r, m, c = a.rows, a.cols, b.cols
    an, bn = a.numerators, b.numerators
    bcols = [bn[j::c] for j in range(c)]
    out = []
    for i in range(r):
        arow = an[i * m:(i + 1) * m]
        nz = [(k, x) for k, x in enumerate(arow) if x]
        for j in range(c):
            bc = bcols[j]
            out.append(sum(x * bc[k] for k, x in nz))
    return ExactMatrix(r, c, out, a.denominator * b.denominator)


def matrix_product(factors: Iterable[ExactMatrix], d: int | None = None) -> ExactMatrix:
    """Left-to-right product; the empty product is the d x d identity."""
    result = None
    for f in factors:
        result = f if result is None else result @ f
    if result is None:
        if d is None:
            raise ValueError("empty product needs a dimension")
        return ExactMatrix.identity(d)
    return result


# supports -------------------------------------------------------------------


class Order(enum.Enum):
    LE = "LE"
    GE = "GE"
    EQ = "EQ"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True, order=False)
class SupportPattern:
    """0/1 mask of the nonzero coordinates of a vector."""

    mask: tuple[int, ...]

    def __post_init__(self):
        if any(m not in (0, 1) for m in self.mask):
            raise ValueError("mask entries must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.mask)

    @property
    def indices(self) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.mask) if m)

    @property
    def bits(self) -> int:
        return sum(1 << i for i, m in enumerate(self.mask) if m)

    def is_zero(self) -> bool:
        return not any(self.mask)

    def __le__(self, other: "SupportPattern") -> bool:
        return compare_patterns(self, other) in (Order.LE, Order.EQ)

    def __lt__(self, other: "SupportPattern") -> bool:
        return compare_patterns(self, other) is Order.LE

    def __ge__(self, other: "SupportPattern") -> bool:
        return other <= self

    def __gt__(self, other: "SupportPattern") -> bool:
        return other < self

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.mask)) + ")"

    @classmethod
    def of(cls, *mask: int) -> "SupportPattern":
        return cls(tuple(mask))


def support_pattern(v: ExactMatrix | Sequence[Scalar]) -> SupportPattern:
    """Support of a vector given as a one-column/one-row matrix or a sequence."""
    if isinstance(v, ExactMatrix):
        if v.cols != 1 and v.rows != 1:
            raise ValueError("support_pattern expects a vector")
        vals = v.numerators
    else:
        vals = v
    return SupportPattern(tuple(1 if x else 0 for x in vals))


def compare_patterns(p: SupportPattern, q: SupportPattern) -> Order:
    if p.dim != q.dim:
        raise ValueError("pattern dimension mismatch")
    le = all(a <= b for a, b in zip(p.mask, q.mask))
    ge = all(a >= b for a, b in zip(p.mask, q.mask))
    if le and ge:
        return Order.EQ
    if le:
        return Order.LE
    if ge:
        return Order.GE
    return Order.INCOMPARABLE


def column_supports(m: ExactMatrix) -> list[SupportPattern]:
    c = m.cols
    num = m.numerators
    return [SupportPattern(tuple(1 if num[i * c + j] else 0 for i in range(m.rows))) for j in range(c)]


def col_pattern_count(m: ExactMatrix) -> int:
    return len({p for p in column_supports(m) if not p.is_zero()})


def norm1(m: ExactMatrix) -> Fraction:
    return m.norm1()
