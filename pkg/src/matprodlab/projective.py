"""Projective distance, the delta coefficient and the contraction coefficient tau.

Distances are kept as exact cross-ratios; ``log`` is only taken on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmat import ExactMatrix, Scalar, format_rational, parse_rational


def log_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerators/denominators."""
    if x <= 0:
        raise ValueError("log of nonpositive value")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class ExtendedLogValue:
    """A value log(ratio) with ratio >= 1, or +infinity when ratio is None."""

    ratio: Fraction | None

    def __post_init__(self):
        if self.ratio is not None and self.ratio < 1:
            raise ValueError("ratio must be >= 1")

    @classmethod
    def infinite(cls) -> "ExtendedLogValue":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.ratio is None

    @property
    def value(self) -> float:
        return math.inf if self.ratio is None else log_fraction(self.ratio)

    def __lt__(self, other: "ExtendedLogValue") -> bool:
        if self.ratio is None:
            return False
        return other.ratio is None or self.ratio < other.ratio

    def __le__(self, other: "ExtendedLogValue") -> bool:
        return self == other or self < other

    def to_json(self) -> dict:
        if self.ratio is None:
            return {"kind": "infinite"}
        return {"kind": "finite", "ratio": format_rational(self.ratio)}

    @classmethod
    def from_json(cls, obj: dict) -> "ExtendedLogValue":
        if obj["kind"] == "infinite":
            return cls(None)
        return cls(parse_rational(obj["ratio"]))


def hypothesis_H(a: ExactMatrix) -> tuple[frozenset[int], frozenset[int]] | None:
    """Return (I, J) when the nonzero entries of ``a`` fill exactly I x J."""
    if a.is_zero():
        raise ValueError("zero matrix")
    rows = frozenset(i for i in range(a.rows) if any(a.is_nonzero(i, j) for j in range(a.cols)))
    cols = frozenset(j for j in range(a.cols) if any(a.is_nonzero(i, j) for i in range(a.rows)))
    for i in rows:
        for j in cols:
            if not a.is_nonzero(i, j):
                return None
    return rows, cols


def delta_coeff(a: ExactMatrix) -> ExtendedLogValue:
    """Maximal cross-ratio A(i,j)A(k,l)/(A(k,j)A(i,l)) over the rectangle, or infinity."""
    rect = hypothesis_H(a)
    if rect is None:
        return ExtendedLogValue.infinite()
    rows, cols = sorted(rect[0]), sorted(rect[1])
    num = a.numerators
    c = a.cols
    best = Fraction(1)
    # max over (j, l) of max_i A(i,j)/A(i,l) * max_k A(k,l)/A(k,j)
    for x, j in enumerate(cols):
        for l in cols[x + 1:]:
            up = max(Fraction(num[i * c + j], num[i * c + l]) for i in rows)
            down = max(Fraction(num[i * c + l], num[i * c + j]) for i in rows)
            best = max(best, up * down)
    return ExtendedLogValue(best)


def delta_coeff_bruteforce(a: ExactMatrix) -> ExtendedLogValue:
    """Literal enumeration of all (i, k, j, l); reference implementation for tests."""
    rect = hypothesis_H(a)
    if rect is None:
        return ExtendedLogValue.infinite()
    best = Fraction(1)
    for i in rect[0]:
        for k in rect[0]:
            for j in rect[1]:
                for l in rect[1]:
                    best = max(best, a[i, j] * a[k, l] / (a[k, j] * a[i, l]))
    return ExtendedLogValue(best)


def tau_of(delta: ExtendedLogValue) -> float:
    if delta.is_infinite:
        return 1.0
    return math.tanh(delta.value / 4)


def tau(a: ExactMatrix) -> float:
    """Generalized contraction coefficient tanh(delta(A)/4), exactly 1 when (H) fails."""
    return tau_of(delta_coeff(a))


def _as_vector(v: ExactMatrix | Sequence[Scalar]) -> list[Fraction]:
    if isinstance(v, ExactMatrix):
        if v.cols != 1 and v.rows != 1:
            raise ValueError("expected a vector")
        return v.to_list()
    return [parse_rational(x) for x in v]


def proj_distance(x: ExactMatrix | Sequence[Scalar], y: ExactMatrix | Sequence[Scalar]) -> ExtendedLogValue:
    """max over the common support of X(i)Y(j)/(Y(i)X(j)); infinite when supports differ."""
    xs, ys = _as_vector(x), _as_vector(y)
    if len(xs) != len(ys):
        raise ValueError("dimension mismatch")
    if not any(xs) or not any(ys):
        raise ValueError("zero vector")
    if any(bool(a) != bool(b) for a, b in zip(xs, ys)):
        return ExtendedLogValue.infinite()
    ratios = [a / b for a, b in zip(xs, ys) if a]
    return ExtendedLogValue(max(ratios) / min(ratios))


def proj_distance_float(x: Sequence[float], y: Sequence[float]) -> float:
    """Float version of ``proj_distance`` for numeric diagnostics."""
    if any((a > 0) != (b > 0) for a, b in zip(x, y)):
        return math.inf
    logs = [math.log(a) - math.log(b) for a, b in zip(x, y) if a > 0]
    return max(logs) - min(logs)
