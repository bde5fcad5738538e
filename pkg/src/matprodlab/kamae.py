"""The Kamae measure as a linearly representable measure on {0,1}^N.

Cylinder masses are |A(w)| / 3^(n+1) for two 3x3 integer matrices whose sum
fixes U = (1,1,1) with eigenvalue 3; the literal |A(w)| / 3^n is kept as a
diagnostic because it gives the one-letter cylinder [0] mass 4/3.  The module
also provides the closed forms for the block matrices B_a, the limit map V,
the step-function potential phi and the convergence majorants used to check
uniformity of Pi_n(., U).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .exactmat import ExactMatrix
from .hclass import in_H1, min_Lambda, min_lambda
from .repmeasure import LinearRepresentation, cauchy_uniform_scan, n_step_potential

A0 = ExactMatrix.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
A1 = ExactMatrix.from_rows([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
FAMILY = (A0, A1)
U = (Fraction(1),) * 3
SCALE = 3
HALF_QUARTER = (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))

REPRESENTATION = LinearRepresentation(
    tuple(m / SCALE for m in FAMILY), tuple(Fraction(1, 3) for _ in range(3)), U
)


class NeedMoreDigits(ValueError):
    """The prefix does not determine the case of the potential."""


def kamae_matrix(word: str) -> ExactMatrix:
    m = ExactMatrix.identity(3)
    for c in word:
        m = m @ FAMILY[int(c)]
    return m


def kamae_measure_raw(word: str) -> Fraction:
    """|A(w)| / 3^n, the literal normalization."""
    return kamae_matrix(word).norm1() / SCALE ** len(word)


def kamae_measure(word: str) -> Fraction:
    """|A(w)| / 3^(n+1): the additive normalization with total mass 1."""
    return kamae_matrix(word).norm1() / SCALE ** (len(word) + 1)


@dataclass(frozen=True)
class NormalizationReport:
    norm_A0: Fraction
    raw_zero: Fraction
    renormalized_zero: Fraction
    raw_total: Fraction
    renormalized_additive: bool

    @property
    def raw_is_probability(self) -> bool:
        return self.raw_total == 1 and self.raw_zero <= 1

    def to_json(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in vars(self).items()} | {
            "raw_is_probability": self.raw_is_probability
        }


def normalization_report(depth: int = 10) -> NormalizationReport:
    additive = all(
        kamae_measure(w) == kamae_measure(w + "0") + kamae_measure(w + "1")
        for n in range(depth)
        for w in ("".join(t) for t in iproduct("01", repeat=n))
    )
    return NormalizationReport(
        norm_A0=A0.norm1(),
        raw_zero=kamae_measure_raw("0"),
        renormalized_zero=kamae_measure("0"),
        raw_total=kamae_measure_raw(""),
        renormalized_additive=additive and kamae_measure("") == 1,
    )


# block matrices ---------------------------------------------------------------


def kamae_B(a: int) -> ExactMatrix:
    if a < 0:
        raise ValueError("a must be nonnegative")
    return ExactMatrix.from_rows([[a + 1, a, 0], [a, a + 1, 0], [2 * a + 1, 2 * a + 1, 0]])


def alpha(runs: list[int]) -> int:
    prod = 1
    for a in runs:
        prod *= 2 * a + 1
    return (prod - 1) // 2


def power_A1(n: int) -> ExactMatrix:
    return ExactMatrix.from_rows([[1, 0, n], [0, 1, n], [0, 0, 1]])


def one_runs(word: str) -> list[int]:
    return [len(r) for r in word.split("0") if r]


@dataclass
class DichotomyReport:
    words: int
    block_identity: bool
    block_classes: bool
    max_Lambda: Fraction
    max_lambda: Fraction
    zero_idempotent: bool
    zero_in_H1: bool
    one_powers: bool
    one_Lambda: list[Fraction] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        grows = all(b > a for a, b in zip(self.one_Lambda, self.one_Lambda[1:]))
        return (self.block_identity and self.block_classes and self.max_lambda < 1 and self.zero_idempotent
                and not self.zero_in_H1 and self.one_powers and grows)

    def to_json(self) -> dict:
        return {"words": self.words, "block_identity": self.block_identity, "block_classes": self.block_classes,
                "max_Lambda": str(self.max_Lambda), "max_lambda": str(self.max_lambda),
                "zero_idempotent": self.zero_idempotent, "zero_in_H1": self.zero_in_H1,
                "one_powers": self.one_powers, "one_Lambda": [str(x) for x in self.one_Lambda], "ok": self.ok}


def dichotomy_check(max_len: int = 14, powers: int = 12) -> DichotomyReport:
    """Words 0 1^{a_1} 0^* ... 1^{a_k} 0 collapse to B_alpha in H1 with lambda < 1; 0^n and 1^n do not."""
    count = 0
    ident = classes = True
    worst_L, worst_l = Fraction(0), Fraction(0)
    for n in range(3, max_len + 1):
        for t in iproduct("01", repeat=n - 2):
            w = "0" + "".join(t) + "0"
            runs = one_runs(w)
            if not runs:
                continue
            count += 1
            m = kamae_matrix(w)
            if m != kamae_B(alpha(runs)):
                ident = False
            if not in_H1(m):
                classes = False
            worst_L = max(worst_L, min_Lambda(m))
            worst_l = max(worst_l, min_lambda(m))
    zero_idem = all(kamae_matrix("0" * k) == A0 for k in range(1, powers + 1))
    one_ok = all(kamae_matrix("1" * k) == power_A1(k) for k in range(powers + 1))
    one_L = [min_Lambda(power_A1(k)) for k in range(1, powers + 1)]
    return DichotomyReport(count, ident, classes, worst_L, worst_l, zero_idem, in_H1(A0), one_ok, one_L)


# limit map and potential ----------------------------------------------------------


def theta(a: int) -> Fraction:
    return Fraction(1 + 2 * a, 4 * (1 + a))


def _normalize(v) -> tuple[Fraction, ...]:
    s = sum(v)
    return tuple(Fraction(x) / s for x in v)


def _apply(m: ExactMatrix, v) -> tuple[Fraction, ...]:
    rows = m.to_rows()
    return tuple(sum((r[j] * v[j] for j in range(3)), Fraction(0)) for r in rows)


def kamae_V(prefix: str, tail: str | None = None) -> tuple[Fraction, ...]:
    """V(y) for y in [1^a 0] from its first block, or for y = prefix tail^infty."""
    if tail is not None:
        if tail == "0":
            return _normalize(_apply(kamae_matrix(prefix + "0"), U))
        if tail == "1":
            return _normalize(_apply(kamae_matrix(prefix), (1, 1, 0)))
        raise ValueError("tail must be '0' or '1'")
    a0 = len(prefix) - len(prefix.lstrip("1"))
    if a0 == len(prefix):
        raise NeedMoreDigits("prefix is all ones")
    m = ExactMatrix.from_rows([[1, 0, a0], [0, 1, a0], [0, 0, 1]])
    return tuple(x / (a0 + 1) for x in _apply(m, HALF_QUARTER))


def pi_U(word: str) -> tuple[Fraction, ...]:
    return _normalize(_apply(kamae_matrix(word), U))


def phi_case(prefix: str, tail: str | None = None) -> tuple[str, int | None]:
    """Case label and run length of the potential table for y = prefix (tail^infty)."""
    y = prefix if tail is None else prefix + tail * 3
    if tail == "1" and set(prefix) <= {"1"}:
        return "1bar", None
    if tail == "1" and prefix.startswith("0") and set(prefix[1:]) <= {"1"}:
        return "01bar", None
    if y.startswith("00"):
        return "00", None
    if y.startswith("0"):
        rest = y[1:]
        a = len(rest) - len(rest.lstrip("1"))
        if a < len(rest):
            return "01a0", a
        raise NeedMoreDigits(y)
    a = len(y) - len(y.lstrip("1"))
    if a < len(y):
        return "1a0", a
    raise NeedMoreDigits(y)


def phi_ratio(case: str, a: int | None) -> Fraction:
    """exp(phi) as an exact rational."""
    third = Fraction(1, 3)
    if case in ("00", "1bar"):
        return third
    if case == "01a0":
        return third * Fraction(2 * a + 1, a + 1)
    if case == "1a0":
        return third * Fraction(a + 1, a)
    if case == "01bar":
        return Fraction(2, 3)
    raise ValueError(case)


def kamae_phi(prefix: str, tail: str | None = None) -> float:
    case, a = phi_case(prefix, tail)
    r = phi_ratio(case, a)
    return math.log(r.numerator) - math.log(r.denominator)


def phi_from_V(prefix: str, tail: str | None = None) -> Fraction:
    """(1/3) U.A(y_1) V(sigma y), the defining formula of the potential."""
    first = prefix[0] if prefix else tail
    rest = prefix[1:]
    if tail is None:
        v = kamae_V(rest)
    elif set(rest) <= {tail}:
        v = kamae_V("", tail)
    else:
        v = kamae_V(rest, tail)
    return sum(_apply(FAMILY[int(first)], v)) / 3


# convergence of the generic engine ---------------------------------------------------


@dataclass
class PotentialConvergence:
    n: int
    amax: int
    errors: dict[str, float]
    worst: dict[str, str]

    def ok(self, tol: float = 1e-8) -> bool:
        return all(e < tol for e in self.errors.values())

    def to_json(self) -> dict:
        return {"n": self.n, "amax": self.amax, "errors": self.errors, "worst": self.worst}


def _representatives(case: str, a: int | None, n: int, rng: random.Random, samples: int) -> list[str]:
    head = {"00": "00", "01a0": "0" + "1" * (a or 0) + "0", "1a0": "1" * (a or 0) + "0"}.get(case)
    if head is None:
        prefix = "1" * n if case == "1bar" else "0" + "1" * (n - 1)
        return [prefix]
    out = [head + "0" * (n - len(head)), head + "1" * (n - len(head))]
    for _ in range(samples):
        out.append(head + "".join(rng.choice("01") for _ in range(n - len(head))))
    return out


def potential_convergence(n: int = 40, amax: int = 10, samples: int = 4, seed: int = 0) -> PotentialConvergence:
    """|phi_n - phi| at depth n for each row of the potential table, a = 1..amax."""
    rng = random.Random(seed)
    rows = [("00", None), ("1bar", None), ("01bar", None)]
    rows += [("01a0", a) for a in range(1, amax + 1)] + [("1a0", a) for a in range(1, amax + 1)]
    errors: dict[str, float] = {}
    worst: dict[str, str] = {}
    for case, a in rows:
        target = phi_ratio(case, a)
        target_log = math.log(target.numerator) - math.log(target.denominator)
        for y in _representatives(case, a, n, rng, samples):
            err = abs(n_step_potential(REPRESENTATION, y, n) - target_log)
            key = "00/1bar" if case in ("00", "1bar") else case
            if err >= errors.get(key, -1.0):
                errors[key] = err
                worst[key] = y
    return PotentialConvergence(n, amax, errors, worst)


# uniformity majorants ---------------------------------------------------------------


def _dist(u, v) -> Fraction:
    return sum((abs(Fraction(x) - Fraction(y)) for x, y in zip(u, v)), Fraction(0))


def majorants(n: int) -> tuple[Fraction, Fraction]:
    """The two bounds on |Pi_{n+r} - Pi_n| inside [1^n]: staying in 1s, or leaving through 1^a 0."""
    c = Fraction(2 * n + 2, 2 * n + 3)
    ones = (c / 2, c / 2, c / (2 * n + 2))
    corner = (Fraction(1, 2), Fraction(1, 2), Fraction(0))
    t = theta(n)
    m1 = 2 * _dist(ones, corner)
    m2 = _dist((t, t, 1 - 2 * t), corner) + _dist(ones, corner)
    return m1, m2


@dataclass
class UniformityReport:
    depths: list[int]
    gaps: list[float]
    bounds: list[float]

    @property
    def ok(self) -> bool:
        return all(g <= b + 1e-12 for g, b in zip(self.gaps, self.bounds))

    @property
    def decaying(self) -> bool:
        return all(b <= a + 1e-12 for a, b in zip(self.gaps, self.gaps[1:]))

    def to_json(self) -> dict:
        return {"depths": self.depths, "gaps": self.gaps, "bounds": self.bounds, "ok": self.ok,
                "decaying": self.decaying}


def uniformity_check(depths=(2, 4, 6, 8, 10), extension: int = 4) -> UniformityReport:
    gaps, bounds = [], []
    for n in depths:
        scan = cauchy_uniform_scan(FAMILY, REPRESENTATION.R, n, extension)
        gaps.append(scan.gap)
        bounds.append(float(max(majorants(n))))
    return UniformityReport(list(depths), gaps, bounds)


# tables --------------------------------------------------------------------------


def potential_table(amax: int) -> list[tuple[int | None, str, float]]:
    rows: list[tuple[int | None, str, float]] = [(None, "00", kamae_phi("00")), (None, "1bar", kamae_phi("", "1")),
                                                 (None, "01bar", kamae_phi("0", "1"))]
    for a in range(1, amax + 1):
        rows.append((a, "01a0", kamae_phi("0" + "1" * a + "0")))
        rows.append((a, "1a0", kamae_phi("1" * a + "0")))
    return rows


def figure_samples(count: int = 512, depth: int = 40) -> list[tuple[float, float]]:
    """(y, phi(binary digits of y)) on a regular grid of [0, 1); the extra 0 settles exact dyadics."""
    out = []
    for k in range(count):
        y = Fraction(k, count)
        bits = []
        x = y
        for _ in range(depth):
            x *= 2
            bits.append("1" if x >= 1 else "0")
            x -= int(x >= 1)
        out.append((float(y), kamae_phi("".join(bits) + "0")))
    return out
