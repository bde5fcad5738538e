"""Membership and minimal constants for the matrix classes H1, H2(Lambda), H3(lambda).

* H1: the nonzero column supports form a chain.
* H2(Lambda): every nonzero entry is at least 1/Lambda of its column norm.
* H3(lambda): whenever A(i0, j0) != 0 and A(i0, j1) == 0, column j1 has norm
  at most lambda * A(i0, j0).

Zero columns impose nothing and are comparable with every support.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactmat import (
    ExactMatrix,
    Order,
    SupportPattern,
    col_pattern_count,
    column_supports,
    compare_patterns,
    format_rational,
    support_pattern,
)


@dataclass(frozen=True)
class HClassProfile:
    in_H1: bool
    lambda_min: Fraction
    Lambda_min: Fraction
    col_patterns: int

    def in_H2(self, Lambda: Fraction | int) -> bool:
        return self.Lambda_min <= Lambda

    def in_H3(self, lam: Fraction | int) -> bool:
        return self.lambda_min <= lam

    def to_json(self) -> dict:
        return {
            "h1": self.in_H1,
            "lambda": format_rational(self.lambda_min),
            "Lambda": format_rational(self.Lambda_min),
            "ncol": self.col_patterns,
        }


def _is_chain(patterns: list[SupportPattern]) -> bool:
    masks = sorted({p.bits for p in patterns if not p.is_zero()}, key=lambda b: bin(b).count("1"))
    return all((a & b) == a for a, b in zip(masks, masks[1:]))


def in_H1(a: ExactMatrix) -> bool:
    return _is_chain(column_supports(a))


def _col_sums(a: ExactMatrix) -> list[int]:
    c, num = a.cols, a.numerators
    return [sum(num[i * c + j] for i in range(a.rows)) for j in range(c)]


def min_Lambda(a: ExactMatrix) -> Fraction:
    """Smallest Lambda >= 1 with A in H2(Lambda)."""
    if a.is_zero():
        raise ValueError("zero matrix")
    c, num = a.cols, a.numerators
    sums = _col_sums(a)
    best = Fraction(1)
    for j in range(c):
        if sums[j] == 0:
            continue
        smallest = min(num[i * c + j] for i in range(a.rows) if num[i * c + j])
        best = max(best, Fraction(sums[j], smallest))
    return best


def min_lambda(a: ExactMatrix) -> Fraction:
    """Smallest lambda >= 0 with A in H3(lambda); 0 when no qualifying triple exists."""
    if a.is_zero():
        raise ValueError("zero matrix")
    c, num = a.cols, a.numerators
    sums = _col_sums(a)
    best = Fraction(0)
    for i in range(a.rows):
        row = num[i * c:(i + 1) * c]
        nonzero = [x for x in row if x]
        if not nonzero:
            continue
        zero_mass = max((sums[j] for j in range(c) if row[j] == 0), default=0)
        if zero_mass:
            best = max(best, Fraction(zero_mass, min(nonzero)))
    return best


def min_lambda_bruteforce(a: ExactMatrix) -> Fraction:
    """Literal triple enumeration; reference implementation for tests."""
    norms = a.col_norms()
    best = Fraction(0)
    for i0 in range(a.rows):
        for j0 in range(a.cols):
            if a[i0, j0] == 0:
                continue
            for j1 in range(a.cols):
                if a[i0, j1] == 0:
                    best = max(best, norms[j1] / a[i0, j0])
    return best


def profile(a: ExactMatrix) -> HClassProfile:
    return HClassProfile(in_H1(a), min_lambda(a), min_Lambda(a), col_pattern_count(a))


def compose_h_bounds(pa: tuple[Fraction, Fraction], pb: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """Upper bounds (Lambda, lambda) for a product AB from the bounds of A and B."""
    (La, la), (Lb, lb) = pa, pb
    La, la, Lb, lb = map(Fraction, (La, la, Lb, lb))
    if La < 1 or Lb < 1 or la < 0 or lb < 0:
        raise ValueError("need Lambda >= 1 and lambda >= 0")
    return La + la * Lb, la * lb


def fold_h_bounds(bounds: list[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Compose a chain of bounds left to right."""
    acc = bounds[0]
    for b in bounds[1:]:
        acc = compose_h_bounds(acc, b)
    return acc


@dataclass
class ClosureReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def left_multiplication_check(b: ExactMatrix, a: ExactMatrix) -> ClosureReport:
    """Left multiplication by B preserves order, equality and vanishing of column supports of A."""
    report = ClosureReport()
    sa, sba = column_supports(a), column_supports(b @ a)
    for j0 in range(a.cols):
        for j1 in range(a.cols):
            order = compare_patterns(sa[j0], sa[j1])
            if order in (Order.LE, Order.EQ) and not sba[j0] <= sba[j1]:
                report.violations.append(f"order lost for columns {j0},{j1}")
            if order is Order.EQ and sba[j0] != sba[j1]:
                report.violations.append(f"equality lost for columns {j0},{j1}")
            if order in (Order.LE, Order.EQ) and sba[j1].is_zero() and not sba[j0].is_zero():
                report.violations.append(f"vanishing not inherited for columns {j0},{j1}")
    return report


def h1_closure_check(b: ExactMatrix, a: ExactMatrix, c: ExactMatrix) -> ClosureReport:
    """For A in H1 check that BAC keeps its supports among those of BA, is in H1 and has #Col <= #Col(A)."""
    if not in_H1(a):
        raise ValueError("middle factor is not in H1")
    report = ClosureReport()
    ba = b @ a
    bac = ba @ c
    available = set(column_supports(ba))
    for j, p in enumerate(column_supports(bac)):
        if not p.is_zero() and p not in available:
            report.violations.append(f"column {j} support {p} not among supports of BA")
    if col_pattern_count(bac) > col_pattern_count(a):
        report.violations.append("pattern count increased")
    if not in_H1(bac):
        report.violations.append("product left H1")
    return report


def vector_Lambda(x: ExactMatrix) -> Fraction:
    """Lambda_X = ||X|| / min nonzero X(i), the H2 constant of a single column."""
    return min_Lambda(x if x.cols == 1 else x.transpose())


__all__ = [
    "HClassProfile",
    "in_H1",
    "min_Lambda",
    "min_lambda",
    "min_lambda_bruteforce",
    "profile",
    "compose_h_bounds",
    "fold_h_bounds",
    "h1_closure_check",
    "left_multiplication_check",
    "vector_Lambda",
    "support_pattern",
]
