"""The word language W over {0, 1, 2}, its decomposition, and exact re-verification
of the combinatorial facts that give condition (C) for the 7x7 digit matrices.

A(w) = A(w_1) ... A(w_n) in reading order.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .condc import ConditionCViolation, ConditionCWitness, CutSequence, check_condition_c
from .exactmat import ExactMatrix, SupportPattern, col_pattern_count, column_supports, support_pattern
from .hclass import compose_h_bounds, fold_h_bounds, in_H1, min_Lambda, min_lambda

D = 7
DIGITS = "012"


def _parse_rows(text: str) -> ExactMatrix:
    return ExactMatrix.from_rows([[int(c) for c in row] for row in text.split("/")])


GENERATORS = (
    _parse_rows("1000000/0010000/0001100/0000000/1000001/0000100/0100000"),
    _parse_rows("0011000/0000010/0001100/1000000/0010000/0000000/0000000"),
    _parse_rows("1000101/0000000/1000001/0001100/0000100/0000000/0000000"),
)


@lru_cache(maxsize=65536)
def word_matrix(word: str) -> ExactMatrix:
    """A(word); cached, built by splitting so shared prefixes are reused."""
    if not word:
        return ExactMatrix.identity(D)
    if len(word) == 1:
        return GENERATORS[int(word)]
    if len(word) > 64:
        # avoid deep caches for long words
        m = ExactMatrix.identity(D)
        for i in range(0, len(word), 32):
            m = m @ word_matrix(word[i:i + 32])
        return m
    return word_matrix(word[:-1]) @ GENERATORS[int(word[-1])]


def words_matrix(words: Iterable[str]) -> ExactMatrix:
    m = ExactMatrix.identity(D)
    for w in words:
        m = m @ word_matrix(w)
    return m


# the language -----------------------------------------------------------------


@dataclass(frozen=True)
class WFamily:
    name: str
    stem: str
    tail: str | None
    Lambda: int

    def render(self, k: int | None = None) -> str:
        if self.tail is None:
            return self.stem
        if k is None or k < 1:
            raise ValueError(f"family {self.name} needs k >= 1")
        return self.stem + self.tail * k


FAMILIES = (
    WFamily("1", "1", None, 2),
    WFamily("010^k", "01", "0", 8),
    WFamily("110^k", "11", "0", 8),
    WFamily("210^k", "21", "0", 6),
    WFamily("20^k", "2", "0", 7),
    WFamily("002^k", "00", "2", 12),
    WFamily("00102^k", "0010", "2", 13),
    WFamily("10102^k", "1010", "2", 7),
    WFamily("20102^k", "2010", "2", 6),
    WFamily("1102^k", "110", "2", 8),
    WFamily("2102^k", "210", "2", 6),
    WFamily("202^k", "20", "2", 5),
    WFamily("12^k", "1", "2", 9),
)
FAMILY_BY_NAME = {f.name: f for f in FAMILIES}
LAMBDA_ALL = 13
LAMBDA3_STATED = 5
# A(002) has lambda = 6, so sound composition bounds use 6
LAMBDA3_ALL = 6


@dataclass(frozen=True)
class WWord:
    family: str
    k: int | None = None

    @property
    def text(self) -> str:
        return FAMILY_BY_NAME[self.family].render(self.k)

    def __str__(self) -> str:
        return self.text


def w_enumerate(kmax: int) -> list[WWord]:
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    out = [WWord("1")]
    for fam in FAMILIES[1:]:
        out.extend(WWord(fam.name, k) for k in range(1, kmax + 1))
    return out


_W_ZERO = re.compile(r"(01|11|21|2)(0+)")
_W_TWO = re.compile(r"(0010|1010|2010|110|210|00|20|1)(2+)")
_STRICT_SUFFIX = re.compile(r"10+|0+|0102+|102+|02+|2+")


def parse_w_word(text: str) -> WWord | None:
    if text == "1":
        return WWord("1")
    for rx, tail in ((_W_ZERO, "0"), (_W_TWO, "2")):
        m = rx.fullmatch(text)
        if m:
            return WWord(f"{m.group(1)}{tail}^k", len(m.group(2)))
    return None


def is_strict_suffix(text: str) -> bool:
    """True for the empty word and the proper suffixes of W-words that are not themselves in W."""
    return text == "" or _STRICT_SUFFIX.fullmatch(text) is not None


@dataclass(frozen=True)
class WDecomposition:
    head: str
    body: tuple[WWord, ...]

    @property
    def suffix_only(self) -> bool:
        return not self.body

    def render(self) -> str:
        return self.head + "".join(w.text for w in self.body)

    @property
    def head_family(self) -> str:
        if not self.head:
            return "empty"
        for pat, name in (("10+", "10^k"), ("0+", "0^k"), ("0102+", "0102^k"), ("102+", "102^k"), ("02+", "02^k"), ("2+", "2^k")):
            if re.fullmatch(pat, self.head):
                return name
        raise AssertionError(self.head)


def _w_suffix(word: str) -> WWord | None:
    """The unique W-word that is a suffix of ``word``, if any."""
    if word.endswith("1"):
        return WWord("1")
    tail = word[-1]
    run = len(word) - len(word.rstrip(tail))
    stem_max = 4 if tail == "2" else 2
    for s in range(1, stem_max + 1):
        cand = word[len(word) - run - s:]
        if len(cand) < run + s:
            break
        w = parse_w_word(cand)
        if w is not None:
            return w
    return None


def w_decompose(word: str) -> WDecomposition:
    """Right-greedy split into a strict-suffix head and W-words."""
    if set(word) - set(DIGITS):
        raise ValueError(f"not a ternary word: {word!r}")
    body: list[WWord] = []
    rest = word
    while rest and not is_strict_suffix(rest):
        w = _w_suffix(rest)
        if w is None:
            raise AssertionError(f"no W suffix for {rest!r}")
        body.append(w)
        rest = rest[: len(rest) - len(w.text)]
    body.reverse()
    return WDecomposition(rest, tuple(body))


def w_prefixes_outside() -> list[str]:
    """Prefixes of W-words (including the empty word) that are not in W."""
    seen = set()
    for w in w_enumerate(3):
        t = w.text
        for i in range(len(t)):
            if parse_w_word(t[:i]) is None:
                seen.add(t[:i])
    return sorted(seen, key=lambda s: (len(s), s))


# per-family H2/H3 table ------------------------------------------------------


@dataclass
class FamilyRow:
    family: str
    bound: int
    max_Lambda: Fraction
    max_lambda: Fraction
    pattern: tuple[int, int] | None
    worst_k: int | None
    lambda_k: int | None

    @property
    def affine_ok(self) -> bool:
        return self.pattern is not None

    @property
    def ok(self) -> bool:
        return self.max_Lambda <= self.bound and self.max_lambda <= LAMBDA3_STATED and self.affine_ok


@dataclass
class FamilyTable:
    kmax: int
    rows: list[FamilyRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_json(self) -> dict:
        return {
            "kmax": self.kmax,
            "ok": self.ok,
            "rows": [
                {
                    "family": r.family,
                    "bound": r.bound,
                    "max_Lambda": str(r.max_Lambda),
                    "max_lambda": str(r.max_lambda),
                    "affine_pattern": r.pattern,
                    "worst_lambda_k": r.lambda_k,
                    "ok": r.ok,
                }
                for r in self.rows
            ],
        }


def family_matrices(fam: WFamily, kmax: int) -> list[tuple[int | None, ExactMatrix]]:
    if fam.tail is None:
        return [(None, word_matrix(fam.stem))]
    out = []
    m = word_matrix(fam.stem)
    step = GENERATORS[int(fam.tail)]
    for k in range(1, kmax + 1):
        m = m @ step
        out.append((k, m))
    return out


def affine_pattern(mats: list[tuple[int | None, ExactMatrix]], max_offset: int = 3, max_period: int = 12) -> tuple[int, int] | None:
    """Smallest (offset, period) such that past ``offset`` every entry is affine in k on each residue class.

    Each class is fitted on its first two members and confirmed on the rest, so the
    sweep's last k is always part of the confirmation.
    """
    nums = [m.numerators for _, m in mats]
    if len(nums) < 3:
        return (0, 1)
    for period in range(1, max_period + 1):
        for offset in range(max_offset + 1):
            ok = True
            for r in range(period):
                sub = nums[offset + r::period]
                if len(sub) < 3:
                    ok = False
                    break
                a, b = sub[0], sub[1]
                if any(x + (y - x) * t != z for t, s in enumerate(sub) for x, y, z in zip(a, b, s)):
                    ok = False
                    break
            if ok:
                return (offset, period)
    return None


def verify_family_table(kmax: int = 64) -> FamilyTable:
    rows = []
    for fam in FAMILIES:
        mats = family_matrices(fam, kmax)
        worst, worst_k, lam, lam_k = Fraction(0), None, Fraction(-1), None
        for k, m in mats:
            L = min_Lambda(m)
            if L > worst:
                worst, worst_k = L, k
            l3 = min_lambda(m)
            if l3 > lam:
                lam, lam_k = l3, k
        rows.append(FamilyRow(fam.name, fam.Lambda, worst, lam, affine_pattern(mats), worst_k, lam_k))
    return FamilyTable(kmax, rows)


# key properties: T2 column, few column patterns, H1 ----------------------------------------

T2 = (
    SupportPattern.of(1, 0, 1, 1, 1, 0, 0),
    SupportPattern.of(1, 1, 1, 0, 1, 1, 0),
    SupportPattern.of(1, 1, 1, 0, 1, 1, 1),
    SupportPattern.of(1, 1, 1, 1, 1, 0, 0),
)
T2_SET = frozenset(T2)
MARKED_COLUMNS = (0, 2, 4)


def t2_set() -> tuple[SupportPattern, ...]:
    return T2


@dataclass(frozen=True)
class KeyProperties:
    t2_column: bool
    few_patterns: bool
    chain: bool

    @property
    def ok(self) -> bool:
        return self.t2_column and self.few_patterns and self.chain


def key_properties(m: ExactMatrix) -> KeyProperties:
    sup = column_supports(m)
    return KeyProperties(
        any(sup[j] in T2_SET for j in MARKED_COLUMNS),
        col_pattern_count(m) <= 2,
        in_H1(m),
    )


def verify_key_lemma(word: str, min_words: int = 13) -> KeyProperties:
    """Properties (i) T2 column, (ii) at most two column patterns, (iii) H1 for a long W-concatenation."""
    dec = w_decompose(word)
    if len(dec.body) < min_words:
        raise ValueError(f"word holds {len(dec.body)} W-words, need {min_words}")
    return key_properties(word_matrix(word))


def boolean_semigroup() -> set[tuple[SupportPattern, ...]]:
    """Column-support tuples of every A(w), w nonempty (a finite closure)."""
    gens = [tuple(column_supports(g)) for g in GENERATORS]

    def mul(a: tuple[SupportPattern, ...], b: tuple[SupportPattern, ...]) -> tuple[SupportPattern, ...]:
        # column j of AB is supported on the union of supports of the columns of A picked by column j of B
        out = []
        for pb in b:
            bits = 0
            for i in pb.indices:
                bits |= a[i].bits
            out.append(SupportPattern(tuple((bits >> t) & 1 for t in range(D))))
        return tuple(out)

    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                for x in (mul(m, g), mul(g, m)):
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
        frontier = nxt
    return seen


def verify_t2_column_propagation() -> tuple[bool, int]:
    """If some marked column of A(w) is T2-supported, the same holds for A(wi) and A(iw); exhaustive."""
    semigroup = boolean_semigroup()
    gens = [tuple(column_supports(g)) for g in GENERATORS]

    def has_t2(t):
        return any(t[j] in T2_SET for j in MARKED_COLUMNS)

    def mul(a, b):
        out = []
        for pb in b:
            bits = 0
            for i in pb.indices:
                bits |= a[i].bits
            out.append(SupportPattern(tuple((bits >> t) & 1 for t in range(D))))
        return tuple(out)

    for t in semigroup:
        if has_t2(t):
            for g in gens:
                if not (has_t2(mul(t, g)) and has_t2(mul(g, t))):
                    return False, len(semigroup)
    return True, len(semigroup)


# appendix tables -----------------------------------------------------------------

APPENDIX_TABLES: dict[str, str] = {
    "000100": "1000001/1000001/2000002/0000000/2100001/2000002/2000001",
    "000101": "1010000/1010000/1020000/0000000/1021000/1020000/1021000",
    "000102": "0001200/0001200/0001300/0000000/1001301/0001300/1001301",
    "000110": "2000001/2000001/2000001/0000000/3001101/2000001/1001101",
    "000111": "1021000/1021000/1021000/0000000/1033100/1021000/2011100",
    "000112": "1001301/1001301/1001301/0000000/3001403/1001301/1002301",
    "00012": "1001101/1001101/1001101/0000000/1002301/1001101/2000102",
    "1001": "0011000/0011000/0011010/0011000/0011000/0000000/0000000",
    "20010": "1002301/0000000/1001101/0001200/0001200/0000000/0000000",
    "20011": "3012200/0000000/2011100/1001100/1001100/0000000/0000000",
    "20012": "2003402/0000000/1002301/1001101/1001101/0000000/0000000",
    "1010": "1001100/0001100/0001100/0001100/1001100/0000000/0000000",
    "10110": "1001101/1000001/2000001/2000001/1001101/0000000/0000000",
    "101110": "3001101/1001100/1002200/1002200/3001101/0000000/0000000",
    "101111": "1033100/0012100/1013200/1013200/1033100/0000000/0000000",
    "101112": "3001403/2000102/3001203/3001203/3001403/0000000/0000000",
    "10112": "1002301/0001200/1001301/1001301/1002301/0000000/0000000",
    "10120": "3200001/1100000/2100001/2100001/3200001/0000000/0000000",
    "10121": "0032000/0011000/1021000/1021000/0032000/0000000/0000000",
    "10122": "2000302/1000101/1001301/1001301/2000302/0000000/0000000",
    "201": "0022010/0000000/0011010/0011000/0011000/0000000/0000000",
    "210": "0002200/0000000/0001100/1001100/0001100/0000000/0000000",
    "2110": "3000002/0000000/2000001/1001101/1000001/0000000/0000000",
    "21110": "2003300/0000000/1002200/3001101/1001100/0000000/0000000",
    "21111": "1025300/0000000/1013200/1033100/0012100/0000000/0000000",
    "21112": "5001305/0000000/3001203/3001403/2000102/0000000/0000000",
    "2112": "1002501/0000000/1001301/1002301/0001200/0000000/0000000",
    "2120": "3200001/0000000/2100001/3200001/1100000/0000000/0000000",
    "2121": "1032000/0000000/1021000/0032000/0011000/0000000/0000000",
    "2122": "2001402/0000000/1001301/2000302/1000101/0000000/0000000",
    "2020": "4200002/0000000/2100001/2100001/2100001/0000000/0000000",
    "20020": "5300002/0000000/3200001/2100001/2100001/0000000/0000000",
    "00020": "2100001/2100001/2100001/0000000/3200001/2100001/2000002",
    "220": "3100002/0000000/2100001/2000002/1000001/0000000/0000000",
}

# words whose printed products carry the key properties (all but the prefix-only tables)
KEY_PROPERTY_WORDS = frozenset(APPENDIX_TABLES)


def appendix_matrix(word: str) -> ExactMatrix:
    return _parse_rows(APPENDIX_TABLES[word])


@dataclass
class AppendixReport:
    mismatches: list[str] = field(default_factory=list)
    property_failures: list[tuple[str, KeyProperties]] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.property_failures

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "ok": self.ok,
            "mismatches": self.mismatches,
            "property_failures": [
                {"word": w, "t2_column": p.t2_column, "few_patterns": p.few_patterns, "chain": p.chain}
                for w, p in self.property_failures
            ],
        }


def verify_appendix(tables: dict[str, str] | None = None) -> AppendixReport:
    tables = APPENDIX_TABLES if tables is None else tables
    report = AppendixReport()
    for word, text in tables.items():
        report.checked += 1
        if word_matrix(word) != _parse_rows(text):
            report.mismatches.append(word)
            continue
        props = key_properties(_parse_rows(text))
        if not props.ok:
            report.property_failures.append((word, props))
    return report


# the two support graphs --------------------------------------------------------

Vector = tuple[int, ...]
STAR = None
SATURATION = 3


def _apply(i: int, v: Vector) -> Vector:
    g = GENERATORS[i].numerators
    return tuple(sum(g[r * D + c] * v[c] for c in range(D)) for r in range(D))


def _support(v: Vector) -> SupportPattern:
    return SupportPattern(tuple(1 if x else 0 for x in v))


@dataclass
class SupportGraph:
    """Vertices keyed by support; values are per-coordinate maxima (None when unbounded)."""

    vertices: dict[SupportPattern, tuple[int | None, ...]]
    edges: set[tuple[SupportPattern, int, SupportPattern]]
    upper: frozenset[SupportPattern]
    members: dict[SupportPattern, list[Vector]] = field(default_factory=dict)

    @property
    def lower(self) -> frozenset[SupportPattern]:
        return frozenset(self.vertices) - self.upper

    def step_violations(self) -> list[tuple[Vector, int, Vector]]:
        """Members of lower classes whose one-step image has an entry above 2."""
        out = []
        for p in self.lower:
            for v in self.members[p]:
                for i in range(3):
                    w = _apply(i, v)
                    if max(w) > 2:
                        out.append((v, i, w))
        return out

    def to_dot(self, name: str = "G1") -> str:
        def label(p):
            return "(" + ",".join("*" if x is None else str(x) for x in self.vertices[p]) + ")"

        lines = [f"digraph {name} {{"]
        for p in sorted(self.vertices, key=lambda q: q.bits):
            style = ', style=filled, fillcolor="lightcoral"' if p in self.upper else ""
            lines.append(f'  "{label(p)}" [shape=box{style}];')
        for a, i, b in sorted(self.edges, key=lambda e: (e[0].bits, e[1], e[2].bits)):
            lines.append(f'  "{label(a)}" -> "{label(b)}" [label="{i}"];')
        lines.append("}")
        return "\n".join(lines)


def build_gamma1(cap: int = 256) -> SupportGraph:
    """Closure of U_1..U_7 under left multiplication, entries saturated at 3."""
    start = [tuple(1 if r == j else 0 for r in range(D)) for j in range(D)]
    seen = set(start)
    frontier = list(start)
    edges = set()
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(3):
                w = tuple(min(x, SATURATION) for x in _apply(i, v))
                if not any(w):
                    continue
                edges.add((_support(v), i, _support(w)))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    classes: dict[SupportPattern, list[int]] = {}
    members: dict[SupportPattern, list[Vector]] = {}
    for v in sorted(seen):
        members.setdefault(_support(v), []).append(v)
        cur = classes.setdefault(_support(v), [0] * D)
        for t in range(D):
            cur[t] = max(cur[t], v[t])
    if len(classes) > cap:
        raise RuntimeError(f"support closure exceeded {cap} classes")
    vertices = {p: tuple(STAR if x >= SATURATION else x for x in vals) for p, vals in classes.items()}
    upper = frozenset(p for p, vals in vertices.items() if any(x is STAR for x in vals))
    return SupportGraph(vertices, edges, upper, members)


@dataclass
class SynchronizationReport:
    upper_is_t2: bool
    lower_bounded: bool
    lower_step_bounded: bool
    lower_step_bounded_into_lower: bool
    upper_closed: bool
    reachable_below_t2: bool
    positive_lands_in_t2: bool
    short_words_sync: dict[str, bool]
    short_words_order: str
    length3_sync: bool
    upper_classes: list[SupportPattern]

    @property
    def ok(self) -> bool:
        return (
            self.upper_is_t2
            and self.lower_bounded
            and self.lower_step_bounded_into_lower
            and self.upper_closed
            and self.reachable_below_t2
            and self.positive_lands_in_t2
            and all(self.short_words_sync.values())
            and self.length3_sync
        )


def _image_support(word: str, p: SupportPattern) -> SupportPattern:
    m = word_matrix(word)
    return support_pattern(m @ ExactMatrix.column(p.mask))


def synchronizes(word: str) -> bool:
    """All T2 supports have the same image support under A(word)."""
    return len({_image_support(word, p) for p in T2}) == 1


def synchronization_check(graph: SupportGraph | None = None) -> SynchronizationReport:
    g = build_gamma1() if graph is None else graph
    lower_bounded = all(all(x is not STAR and x <= 2 for x in g.vertices[p]) for p in g.lower)
    step_bounded = all(
        all(x <= 2 for x in _apply(i, v)) for p in g.lower for v in g.members[p] for i in range(3)
    )
    step_into_lower = all(
        all(x <= 2 for x in w)
        for p in g.lower
        for v in g.members[p]
        for w in (_apply(i, v) for i in range(3))
        if _support(w) not in g.upper
    )
    upper_closed = all(b in g.upper for a, _, b in g.edges if a in g.upper)
    below = all(any(p <= t for t in T2) for p in g.vertices)
    ones = tuple([1] * D)
    positive = all(_support(_apply(i, ones)) in T2_SET for i in range(3))
    shorts = ("00", "01", "11", "2")
    reading = {w: synchronizes(w) for w in shorts}
    mirrored = {w: synchronizes(w[::-1]) for w in shorts}
    if all(reading.values()) or not all(mirrored.values()):
        short, order = reading, "reading"
    else:
        short, order = mirrored, "path"
    length3 = all(synchronizes("".join(t)) for t in iproduct(DIGITS, repeat=3))
    return SynchronizationReport(
        g.upper == T2_SET,
        lower_bounded,
        step_bounded,
        step_into_lower,
        upper_closed,
        below,
        positive,
        short,
        order,
        length3,
        sorted(g.upper, key=lambda q: q.bits),
    )


@dataclass
class DoublingGraph:
    vertices: set[Vector]
    edges: dict[tuple[Vector, int], Vector]

    def doubled(self, v: Vector) -> bool:
        return _support(v) in T2_SET and all(x in (0, 2) for x in v)

    def trace(self, label: str, start: Vector) -> Vector:
        v = start
        for c in label:
            v = self.edges[(v, int(c))]
        return v

    def to_dot(self, name: str = "G2") -> str:
        def lab(v):
            return "(" + ",".join(map(str, v)) + ")"

        lines = [f"digraph {name} {{"]
        for v in sorted(self.vertices):
            style = ', style=filled, fillcolor="lightcoral"' if self.doubled(v) else ""
            lines.append(f'  "{lab(v)}" [shape=box{style}];')
        for (v, i), w in sorted(self.edges.items()):
            lines.append(f'  "{lab(v)}" -> "{lab(w)}" [label="{i}"];')
        lines.append("}")
        return "\n".join(lines)


def build_gamma2(cap: int = 512) -> DoublingGraph:
    """Closure of the T2 indicator vectors under V -> min(A(i)V, 2 * support(A(i)V))."""
    start = [tuple(p.mask) for p in T2]
    seen = set(start)
    frontier = list(start)
    edges = {}
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(3):
                img = _apply(i, v)
                w = tuple(min(x, 2) for x in img)
                edges[(v, i)] = w
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if len(seen) > cap:
            raise RuntimeError(f"doubling graph exceeded {cap} vertices")
    return DoublingGraph(seen, edges)


FORBIDDEN_MIRROR = "100100"
FORBIDDEN_WORD = "001001"


def extremal_label(k: int) -> str:
    return "00010010212" + "2" * (k - 1) + "010"


def block_count(label: str) -> int:
    """Number of blocks when the label is cut into maximal runs 0^k, 2^k and single 1s."""
    count, prev = 0, ""
    for c in label:
        if c == "1" or c != prev:
            count += 1
        prev = c
    return count


def _kmp_table(pattern: str) -> list[dict[str, int]]:
    """Automaton states 0..len-1 tracking the longest matched prefix."""
    table = []
    for state in range(len(pattern)):
        row = {}
        for c in DIGITS:
            s = pattern[:state] + c
            while s and not pattern.startswith(s):
                s = s[1:]
            row[c] = len(s)
        table.append(row)
    return table


@dataclass(frozen=True)
class OffenderPath:
    start: Vector
    label: str
    end: Vector
    blocks: int
    exact_end: Vector

    @property
    def exact_offender(self) -> bool:
        """True when the literal product also fails to double (a = 1)."""
        return any(x == 1 for x in self.exact_end)


@dataclass
class ExtremalCheck:
    k: int
    label: str
    blocks: int
    avoids_forbidden: bool
    graph_doubled: bool
    exact_doubled: bool


@dataclass
class DoublingExhaustion:
    longest_offender: int | None
    witness: OffenderPath | None
    unbounded: bool
    absorbing: bool
    extremal: list[ExtremalCheck]

    def long_paths_double(self, min_blocks: int) -> bool:
        """Every path from T2 with at least ``min_blocks`` blocks avoiding 100100 ends in 2T2."""
        return not self.unbounded and (self.longest_offender is None or self.longest_offender < min_blocks)

    @property
    def extremal_are_longest(self) -> bool:
        return (
            self.witness is not None
            and all(e.blocks == self.longest_offender and not e.graph_doubled for e in self.extremal)
        )

    def to_json(self) -> dict:
        w = self.witness
        return {
            "longest_offender_blocks": self.longest_offender,
            "unbounded": self.unbounded,
            "absorbing": self.absorbing,
            "witness": None if w is None else {
                "start": w.start,
                "label": w.label,
                "end": w.end,
                "exact_end": w.exact_end,
                "exact_offender": w.exact_offender,
            },
            "paths_of_12_blocks_double": self.long_paths_double(12),
            "paths_of_11_blocks_double": self.long_paths_double(11),
            "extremal": [
                {"k": e.k, "blocks": e.blocks, "graph_doubled": e.graph_doubled, "exact_doubled": e.exact_doubled}
                for e in self.extremal
            ],
        }


def doubling_exhaustion(
    kmax: int = 16, graph: DoublingGraph | None = None, forbidden: str = FORBIDDEN_MIRROR
) -> DoublingExhaustion:
    """Longest block count of a path from T2 that avoids 100100 and does not end in 2T2.

    Doubled vertices are absorbing, so they are never expanded. Values only grow,
    and a pass budget of one per state detects an unbounded (cycling) offender.
    """
    g = build_gamma2() if graph is None else graph
    kmp = _kmp_table(forbidden)
    best: dict[tuple, tuple[int, Vector, str]] = {}
    for p in T2:
        v = tuple(p.mask)
        best[(v, 0, "")] = (0, v, "")
    budget = len(g.vertices) * len(forbidden) * 4 + 1
    unbounded = True
    for _ in range(budget):
        changed = False
        for (v, a, last), (val, start, lab) in list(best.items()):
            if g.doubled(v):
                continue
            for c in DIGITS:
                na = kmp[a][c]
                if na == len(forbidden):
                    continue
                key = (g.edges[(v, int(c))], na, c)
                gain = 1 if (c == "1" or c != last) else 0
                if key not in best or best[key][0] < val + gain:
                    best[key] = (val + gain, start, lab + c)
                    changed = True
        if not changed:
            unbounded = False
            break
    witness = None
    longest = None
    if not unbounded:
        offenders = [(val, start, lab, key[0]) for key, (val, start, lab) in best.items() if not g.doubled(key[0])]
        if offenders:
            val, start, lab, end = max(offenders, key=lambda t: (t[0], -len(t[2]), t[2]))
            exact = word_matrix(lab[::-1]) @ ExactMatrix.column(start)
            witness = OffenderPath(start, lab, end, val, tuple(int(x) for x in exact.numerators))
            longest = val
    absorbing = all(g.doubled(g.edges[(v, i)]) for v in g.vertices if g.doubled(v) for i in range(3))
    extremal = []
    for k in range(1, kmax + 1):
        lab = extremal_label(k)
        graph_doubled = all(g.doubled(g.trace(lab, tuple(p.mask))) for p in T2)
        m = word_matrix(lab[::-1])
        exact_doubled = all(
            all(x >= 2 for x in (m @ ExactMatrix.column(p.mask)).numerators if x) for p in T2
        )
        extremal.append(
            ExtremalCheck(k, lab, block_count(lab), forbidden not in lab, graph_doubled, exact_doubled)
        )
    return DoublingExhaustion(longest, witness, unbounded, absorbing, extremal)


def doubling_check(word: str, min_words: int = 13) -> bool:
    """Exact check of the doubling step on the literal matrix for every T2 start with a = 1."""
    if FORBIDDEN_WORD in word:
        raise ValueError("word contains 001001")
    if len(w_decompose(word).body) < min_words:
        raise ValueError(f"word holds fewer than {min_words} W-words")
    m = word_matrix(word)
    g = build_gamma2()
    label = word[::-1]
    for p in T2:
        img = m @ ExactMatrix.column(p.mask)
        sup = support_pattern(img)
        if sup not in T2_SET:
            return False
        if any(x < 2 for x in img.numerators if x):
            return False
        if not g.doubled(g.trace(label, tuple(p.mask))):
            return False
    return True


def is_rank_one(m: ExactMatrix) -> bool:
    rows = [r for r in m.to_rows() if any(r)]
    if not rows:
        return False
    base = rows[0]
    j = next(i for i, x in enumerate(base) if x)
    return all(all(r[t] * base[j] == base[t] * r[j] for t in range(len(base))) for r in rows)


def verify_key_lemma_random(samples: int = 10_000, kmax: int = 4, seed: int = 0, words: int = 13) -> list[str]:
    """Random concatenations of ``words`` W-words; returns the failing words."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        ws = [random_w_word(rng, kmax).text for _ in range(words)]
        if not key_properties(words_matrix(ws)).ok:
            bad.append("".join(ws))
    return bad


def forbidden_factor_rank_one(word: str = FORBIDDEN_WORD) -> bool:
    return is_rank_one(word_matrix(word))


# row support automaton -----------------------------------------------------------


def row_nonvanishing_check(row: int = 0) -> tuple[bool, int]:
    """U_row* A(w) != 0 for every word w, by closing the row supports under right multiplication."""
    gens = GENERATORS
    start = tuple(1 if t == row else 0 for t in range(D))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                img = tuple(1 if any(r[i] and g.is_nonzero(i, j) for i in range(D)) else 0 for j in range(D))
                if not any(img):
                    return False, len(seen)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return True, len(seen)


# contraction sampling -----------------------------------------------------------

LAMBDA3_TARGET = Fraction(3, 4)
PROOF_CONSTANT = Fraction(7 * 3 ** 3 * 2, 2 ** 9)


def random_w_word(rng: random.Random, kmax: int) -> WWord:
    fam = rng.choice(FAMILIES)
    return WWord(fam.name, None if fam.tail is None else rng.randint(1, kmax))


def structured_words(kmax: int = 4, count: int = 130) -> list[str]:
    """Concatenations of W-words embedding the extremal doubling segments."""
    out = []
    for k in range(1, kmax + 1):
        seg = extremal_label(k)
        for piece in (seg, seg[::-1]):
            text = ""
            while len(w_decompose(text).body) < count + 2:
                text += "1" + piece
            text += "1"
            out.append(text)
    out.append("1" * count)
    return out


@dataclass
class ContractionSample:
    word: str
    chain: bool
    lam: Fraction

    @property
    def ok(self) -> bool:
        return self.chain and self.lam <= LAMBDA3_TARGET


@dataclass
class ContractionReport:
    samples: list[ContractionSample]
    seed: int
    proof_constant_ok: bool

    @property
    def ok(self) -> bool:
        return self.proof_constant_ok and all(s.ok for s in self.samples)

    @property
    def worst(self) -> Fraction:
        return max(s.lam for s in self.samples)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": len(self.samples),
            "worst_lambda": str(self.worst),
            "proof_constant": str(PROOF_CONSTANT),
            "ok": self.ok,
            "failures": [s.word for s in self.samples if not s.ok][:5],
        }


def verify_contraction(samples: int = 1000, kmax: int = 4, seed: int = 0, words: int = 130) -> ContractionReport:
    """130-word concatenations are in H1 and in H3(3/4)."""
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        ws = [random_w_word(rng, kmax).text for _ in range(words)]
        m = words_matrix(ws)
        out.append(ContractionSample("".join(ws), in_H1(m), min_lambda(m)))
    for text in structured_words(kmax=min(kmax, 4), count=words):
        m = word_matrix(text)
        out.append(ContractionSample(text, in_H1(m), min_lambda(m)))
    return ContractionReport(out, seed, PROOF_CONSTANT < LAMBDA3_TARGET)


# condition (C) certificate ------------------------------------------------------------

BLOCK_WORDS = 130
HEAD_WORDS = ("", "10", "100", "0", "00", "2", "0102")


def head_constants() -> tuple[Fraction, Fraction]:
    """(Lambda_0, lambda_0) over the admissible head words; the empty word is the identity."""
    Ls, ls = [], []
    for w in HEAD_WORDS:
        m = word_matrix(w)
        Ls.append(min_Lambda(m))
        ls.append(min_lambda(m))
    return max(Ls), max(ls)


def prefix_Lambda() -> Fraction:
    """Largest H2 constant over prefixes of W-words (W-words themselves contribute at most 13)."""
    return max([Fraction(LAMBDA_ALL)] + [min_Lambda(word_matrix(w)) for w in w_prefixes_outside()])


def block_Lambda_bound(lam3: int = LAMBDA3_STATED) -> Fraction:
    """Sum_{k<130} 13 * lam3^k: the H2 constant of at most 130 consecutive W-words."""
    return LAMBDA_ALL * sum(Fraction(lam3) ** k for k in range(BLOCK_WORDS))


def tail_Lambda(b: int, lam3: int = LAMBDA3_STATED) -> Fraction:
    """Lambda_0 + lambda_0 L' + lambda_0 lam3^b L' / (1 - 3/4) for the uniform-bound argument."""
    L0, l0 = head_constants()
    Lp = block_Lambda_bound(lam3)
    return L0 + l0 * Lp + l0 * Fraction(lam3) ** b * Lp / (1 - LAMBDA3_TARGET)


@dataclass
class Certificate:
    decomposition: WDecomposition
    cuts: CutSequence
    Lam: Fraction
    result: ConditionCWitness | ConditionCViolation

    @property
    def ok(self) -> bool:
        return isinstance(self.result, ConditionCWitness)


def certificate_Lambda(head: str) -> Fraction:
    """Fold of the composition bound over head, 2*130 - 1 W-words and one W-prefix."""
    hm = word_matrix(head)
    chain = [(min_Lambda(hm), min_lambda(hm))]
    chain += [(Fraction(LAMBDA_ALL), Fraction(LAMBDA3_ALL))] * (2 * BLOCK_WORDS - 1)
    chain += [(prefix_Lambda(), Fraction(0))]
    return fold_h_bounds(chain)[0]


def block_cuts(dec: WDecomposition, block: int = BLOCK_WORDS) -> CutSequence:
    lengths = [len(w.text) for w in dec.body]
    cuts = [0, 0]
    k = 1
    while block * k <= len(lengths):
        cuts.append(len(dec.head) + sum(lengths[: block * k]))
        k += 1
    return CutSequence(tuple(cuts))


def condition_c_certificate(prefix: str, horizon: int | None = None, *, block: int = BLOCK_WORDS, suffix_products: bool = False) -> Certificate:
    dec = w_decompose(prefix)
    if len(dec.body) < 2 * block:
        raise ValueError(f"prefix holds {len(dec.body)} W-words; need at least {2 * block}")
    cuts = block_cuts(dec, block)
    Lam = certificate_Lambda(dec.head)
    last = cuts.last - 1
    horizon = last if horizon is None else min(horizon, last)
    seq = [GENERATORS[int(c)] for c in prefix]
    result = check_condition_c(seq, cuts, LAMBDA3_TARGET, Lam, horizon, suffix_products=suffix_products)
    return Certificate(dec, cuts, Lam, result)


def random_regular_word(rng: random.Random, words: int, kmax: int = 3) -> str:
    return "".join(random_w_word(rng, kmax).text for _ in range(words))


def compose_bound_chain(n: int) -> tuple[Fraction, Fraction]:
    """Composition bound for n factors each in H2(13) ∩ H3(5)."""
    acc = (Fraction(LAMBDA_ALL), Fraction(LAMBDA3_ALL))
    for _ in range(n - 1):
        acc = compose_h_bounds(acc, (Fraction(LAMBDA_ALL), Fraction(LAMBDA3_ALL)))
    return acc


# uniform convergence scan -------------------------------------------------------------

LIMIT_ZERO = (Fraction(0), Fraction(1, 5), Fraction(1, 5), Fraction(0), Fraction(1, 5), Fraction(1, 5), Fraction(1, 5))
LIMIT_TWO = (Fraction(1, 3), Fraction(0), Fraction(1, 3), Fraction(1, 3), Fraction(0), Fraction(0), Fraction(0))
REQUIRED_SUPPORT = (0, 2, 4)


def power_direction(letter: str, n: int, R: Sequence[int]) -> tuple[Fraction, ...]:
    """A(letter^n) R / ||A(letter^n) R||, exact."""
    v = word_matrix(letter * n) @ ExactMatrix.column(list(R))
    total = sum(v.numerators)
    return tuple(Fraction(x, total) for x in v.numerators)


def _level_vectors(depth: int, R: np.ndarray) -> np.ndarray:
    """A(w) R for all words of length ``depth`` in lexicographic order (exact int64 while it fits)."""
    gens = np.array([g.to_float_rows() for g in GENERATORS], dtype=np.int64)
    level = R.reshape(1, D).astype(np.int64)
    for _ in range(depth):
        # prepend a letter: A(i w) R = A(i) (A(w) R)
        level = np.concatenate([level @ gens[i].T for i in range(3)], axis=0)
    return level


def _all_words(depth: int) -> list[str]:
    return ["".join(t) for t in iproduct(DIGITS, repeat=depth)]


@dataclass
class ConvergenceScan:
    depth: int
    extensions: int
    gaps: dict[int, float]
    support_ok: bool
    support_failures: list[str]
    zero_error: float
    two_error: float
    limit_n: int

    def limits_within(self, tol: float) -> bool:
        return self.zero_error <= tol and self.two_error <= tol

    @property
    def gaps_shrink(self) -> bool:
        depths = sorted(self.gaps)
        return all(self.gaps[b] <= self.gaps[a] for a, b in zip(depths, depths[1:]))

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "extensions": self.extensions,
            "gaps": {str(k): v for k, v in self.gaps.items()},
            "gaps_shrink": self.gaps_shrink,
            "support_ok": self.support_ok,
            "support_failures": self.support_failures[:10],
            "limit_n": self.limit_n,
            "zero_error": self.zero_error,
            "two_error": self.two_error,
        }


def support_scan(depth: int, R: Sequence[int]) -> list[str]:
    """Words of length ``depth`` whose image A(w)R misses one of the coordinates 1, 3, 5."""
    vecs = _level_vectors(depth, np.asarray(R))
    bad = np.nonzero((vecs[:, REQUIRED_SUPPORT] == 0).any(axis=1))[0]
    words = _all_words(depth)
    # _level_vectors prepends letters, so row index digits read the word left to right
    return [words[i] for i in bad]


def cauchy_gap(depth: int, extensions: int, R: Sequence[int], chunk: int = 8192) -> float:
    """max over |w| = depth and |u| <= extensions of ||Pi(wu) - Pi(w)||_1."""
    Rv = np.asarray(R, dtype=float)
    tails = [Rv]
    for length in range(1, extensions + 1):
        tails.extend(np.array(word_matrix(u).to_float_rows()) @ Rv for u in _all_words(length))
    Y = np.stack(tails, axis=1)  # D x m
    Y /= Y.sum(axis=0, keepdims=True)
    gens = [np.array(g.to_float_rows()) for g in GENERATORS]
    worst = 0.0
    words = _all_words(depth)
    for start in range(0, len(words), chunk):
        block = words[start:start + chunk]
        mats = np.stack([_float_word(w, gens) for w in block])
        imgs = mats @ Y  # batch x D x m
        imgs /= imgs.sum(axis=1, keepdims=True)
        gap = np.abs(imgs - imgs[:, :, :1]).sum(axis=1).max()
        worst = max(worst, float(gap))
    return worst


_FLOAT_CACHE: dict[str, np.ndarray] = {}


def _float_word(word: str, gens: list[np.ndarray]) -> np.ndarray:
    m = _FLOAT_CACHE.get(word)
    if m is None:
        m = np.eye(D) if not word else _float_word(word[:-1], gens) @ gens[int(word[-1])]
        m = m / m.max()
        if len(word) <= 8:
            _FLOAT_CACHE[word] = m
    return m


def limit_support_scan(
    R: Sequence[int] = (1,) * D,
    depth: int = 10,
    extensions: int = 4,
    gap_depths: Sequence[int] = (6, 8, 10),
    limit_n: int = 40,
) -> ConvergenceScan:
    if any(x <= 0 for x in R):
        raise ValueError("R must be positive")
    bad = support_scan(depth, R)
    gaps = {d: cauchy_gap(d, extensions, R) for d in gap_depths}
    zero = power_direction("0", limit_n, R)
    two = power_direction("2", limit_n, R)
    z_err = max(abs(float(a - b)) for a, b in zip(zero, LIMIT_ZERO))
    t_err = max(abs(float(a - b)) for a, b in zip(two, LIMIT_TWO))
    return ConvergenceScan(depth, extensions, gaps, not bad, bad, z_err, t_err, limit_n)


__all__ = [
    "GENERATORS",
    "FAMILIES",
    "WWord",
    "WDecomposition",
    "word_matrix",
    "w_enumerate",
    "w_decompose",
    "parse_w_word",
    "verify_family_table",
    "t2_set",
    "key_properties",
    "verify_key_lemma",
    "verify_t2_column_propagation",
    "verify_appendix",
    "APPENDIX_TABLES",
    "build_gamma1",
    "build_gamma2",
    "synchronization_check",
    "doubling_exhaustion",
    "doubling_check",
    "row_nonvanishing_check",
    "verify_contraction",
    "condition_c_certificate",
    "head_constants",
    "tail_Lambda",
    "limit_support_scan",
]

verify_lemma_9_2 = verify_family_table
verify_appendix_11 = verify_appendix
verify_lemma_9_5 = verify_key_lemma
verify_lemma_9_4 = verify_contraction
theorem_8_7_scan = limit_support_scan
