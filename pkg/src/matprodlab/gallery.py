"""Worked examples: closed forms checked against direct exact products."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from . import condc
from .exactmat import ExactMatrix, format_rational, matrix_product
from .hclass import min_Lambda, min_lambda
from .projective import proj_distance, tau

Number = Fraction | int


@dataclass(frozen=True)
class ExampleConfig:
    """Parameters for one gallery run; ``example`` is one of 1..6 or "5.2"."""

    example: str
    n: int = 40
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if str(self.example) not in {"1", "2", "3", "4", "5", "6", "5.2"}:
            raise ValueError(f"unknown example {self.example!r}")
        if self.n < 1:
            raise ValueError("n must be positive")


def _unit(values: Sequence[Number]) -> list[Fraction]:
    s = sum(values)
    if s == 0:
        raise ValueError("zero vector")
    return [Fraction(v) / s for v in values]


def _l1(x: Sequence, y: Sequence) -> float:
    return float(sum(abs(Fraction(a) - Fraction(b)) for a, b in zip(x, y)))


# block-triangular products ---------------------------------------------------


@dataclass
class BlockTriReport:
    sizes: tuple[int, ...]
    Lambda: Fraction
    eps: list[Fraction]  # eps[0] = 1, eps[n] for n = 1..N
    partial_sums: list[Fraction]
    S: Fraction
    observed: list[tuple[Fraction, Fraction]]  # (min Lambda, min lambda) of P_n
    predicted: list[tuple[Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return all(oL <= pL and ol <= pl for (oL, ol), (pL, pl) in zip(self.observed, self.predicted))

    def to_json(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "Lambda": format_rational(self.Lambda),
            "S": format_rational(self.S),
            "eps": [format_rational(e) for e in self.eps],
            "partial_sums": [format_rational(s) for s in self.partial_sums],
            "observed": [[format_rational(a), format_rational(b)] for a, b in self.observed],
            "predicted": [[format_rational(a), format_rational(b)] for a, b in self.predicted],
            "ok": self.ok,
        }


def _flip(m: ExactMatrix) -> ExactMatrix:
    r, c = m.rows, m.cols
    num = m.numerators
    return ExactMatrix(r, c, [num[(r - 1 - i) * c + (c - 1 - j)] for i in range(r) for j in range(c)], m.denominator)


def _block(m: ExactMatrix, offs: list[int], sizes: Sequence[int], i: int, j: int) -> ExactMatrix:
    rows = [[m[offs[i] + a, offs[j] + b] for b in range(sizes[j])] for a in range(sizes[i])]
    return ExactMatrix.from_rows(rows)


def _max_col_sum(m: ExactMatrix) -> Fraction:
    return max(m.col_norms())


def blocktri_check(seq: Sequence[ExactMatrix], sizes: Sequence[int], N: int | None = None, *, upper: bool = False) -> BlockTriReport:
    """Summability of the diagonal-block ratios and the H2/H3 profile they force on P_n.

    With ``upper`` the matrices are upper block-triangular and are conjugated by
    the anti-diagonal flip first.
    """
    N = len(seq) if N is None else N
    if N < 1 or N > len(seq):
        raise ValueError("need 1 <= N <= len(seq)")
    sizes = tuple(sizes)
    d = sum(sizes)
    if upper:
        seq = [_flip(a) for a in seq[:N]]
        sizes = sizes[::-1]
    offs = [sum(sizes[:i]) for i in range(len(sizes))]
    delta = len(sizes)
    for a in seq[:N]:
        if a.shape != (d, d):
            raise ValueError(f"matrix shape {a.shape} does not match block sizes {sizes}")
        for i in range(delta):
            for j in range(delta):
                blk = _block(a, offs, sizes, i, j)
                if j > i and not blk.is_zero():
                    raise ValueError("matrix is not lower block-triangular")
                if j <= i and any(v <= 0 for v in blk.numerators):
                    raise ValueError("blocks on and below the diagonal must be positive")
    Lam = max(min_Lambda(a) for a in seq[:N])
    diag = [ExactMatrix.identity(s) for s in sizes]
    P = ExactMatrix.identity(d)
    eps = [Fraction(1)]
    partial = [Fraction(1)]
    observed = []
    for a in seq[:N]:
        diag = [D @ _block(a, offs, sizes, i, i) for i, D in enumerate(diag)]
        P = P @ a
        e = Fraction(0)
        for i in range(delta - 1):
            top = _max_col_sum(diag[i + 1])
            e = max(e, top / min(diag[i].col_norms()))
        eps.append(e)
        partial.append(partial[-1] + e)
        observed.append((min_Lambda(P), min_lambda(P)))
    S = 1 + Lam * partial[-1]
    predicted = [(S ** (delta - 1) * Lam, e * S ** (delta - 2) * Lam) for e in eps[1:]]
    return BlockTriReport(sizes, Lam, eps, partial, S, observed, predicted)


# 2 x 2 triangular products ---------------------------------------------------


@dataclass
class Tri2x2Report:
    n: int
    s_partial: Fraction
    s_limit: float
    predicted: tuple[float, float]
    direct: tuple[Fraction, Fraction]
    column1: tuple[Fraction, Fraction]
    exact_match: bool
    error: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s_partial": format_rational(self.s_partial),
            "s_limit": self.s_limit,
            "predicted": list(self.predicted),
            "direct": [format_rational(x) for x in self.direct],
            "column1": [format_rational(x) for x in self.column1],
            "exact_match": self.exact_match,
            "error": self.error,
        }


def tri2x2_limit(a: Sequence[Number], b: Sequence[Number], d: Sequence[Number], n: int, s: float | Fraction | None = None) -> Tri2x2Report:
    """Column directions of products of upper-triangular [[a, b], [0, d]].

    ``s`` is the known value of the full series (``math.inf`` when it
    diverges); by default the partial sum is used.
    """
    if n < 1 or min(len(a), len(b), len(d)) < n:
        raise ValueError("sequences shorter than n")
    a, b, d = ([Fraction(x) for x in v[:n]] for v in (a, b, d))
    if any(x * y <= 0 for x, y in zip(a, d)) or any(x < 0 for x in b):
        raise ValueError("need a_n d_n > 0 and b_n >= 0")
    s_n = Fraction(0)
    pa, pd = Fraction(1), Fraction(1)
    for ak, bk, dk in zip(a, b, d):
        pd *= dk
        s_n += pa * bk / pd
        pa *= ak
    P = matrix_product([ExactMatrix.from_rows([[x, y], [0, z]]) for x, y, z in zip(a, b, d)], 2)
    col2 = _unit(P.col(1).to_list())
    col1 = _unit(P.col(0).to_list())
    s_lim = float(s_n) if s is None else float(s)
    if math.isinf(s_lim):
        pred = (1.0, 0.0)
    else:
        pred = (s_lim / (s_lim + 1), 1 / (s_lim + 1))
    exact = col2 == [s_n / (s_n + 1), 1 / (s_n + 1)]
    err = max(abs(float(x) - y) for x, y in zip(col2, pred))
    return Tri2x2Report(n, s_n, s_lim, pred, tuple(col2), tuple(col1), exact, err)


# triangular products with two limits -------------------------------------------

EX3_CUT = ExactMatrix.from_rows([[1, 1, 1], [0, 0, 0], [0, 0, 2]])
EX3_BODY = ExactMatrix.from_rows([[1, 3, 1], [0, 4, 0], [0, 0, 1]])
EX3_LIMITS = ((Fraction(3, 4), Fraction(0), Fraction(1, 4)), (Fraction(1), Fraction(0), Fraction(0)))


def triangular(k: int) -> int:
    return k * (k + 1) // 2


def example3_sequence(length: int) -> list[ExactMatrix]:
    cuts = set()
    k = 1
    while triangular(k) <= length:
        cuts.add(triangular(k))
        k += 1
    return [EX3_CUT if n in cuts else EX3_BODY for n in range(1, length + 1)]


def example3_closed_forms(k: int) -> tuple[ExactMatrix, ExactMatrix]:
    p, q = 2 ** k, 4 ** k
    first = ExactMatrix.from_rows([[1, 1, 3 * p - 2 * k - 3], [0, 0, 0], [0, 0, p]])
    second = ExactMatrix.from_rows([[1, 2 * q - 1, 3 * p - k - 3], [0, 0, 0], [0, 0, p]])
    return first, second


@dataclass
class Example3Report:
    k: int
    at_cut: ExactMatrix
    after_run: ExactMatrix
    match: bool
    directions: tuple[list[Fraction], list[Fraction]]
    distances: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "P_nk": self.at_cut.to_json(),
            "P_nk_plus_k": self.after_run.to_json(),
            "match": self.match,
            "directions": [[format_rational(x) for x in v] for v in self.directions],
            "distances": list(self.distances),
        }


def example3_products(k: int, V: Sequence[Number] = (0, 1, 1)) -> Example3Report:
    """P_{n_k} and P_{n_k + k} by direct product and closed form, and the directions of P V."""
    if k < 1:
        raise ValueError("k must be positive")
    nk = triangular(k)
    seq = example3_sequence(nk + k)
    direct_a = matrix_product(seq[:nk], 3)
    direct_b = direct_a @ matrix_product(seq[nk:nk + k], 3)
    closed_a, closed_b = example3_closed_forms(k)
    v = ExactMatrix.column(V)
    dirs = (_unit((direct_a @ v).to_list()), _unit((direct_b @ v).to_list()))
    dists = (_l1(dirs[0], EX3_LIMITS[0]), _l1(dirs[1], EX3_LIMITS[1]))
    return Example3Report(k, direct_a, direct_b, direct_a == closed_a and direct_b == closed_b, dirs, dists)


# positive families ------------------------------------------------------------

EX4_ODD = ExactMatrix.from_rows([[Fraction(1, 2)] * 2] * 2)
EX4_EVEN = ExactMatrix.from_rows([[Fraction(1, 3), Fraction(2, 3)]] * 2)


@dataclass
class PositiveLimitReport:
    gamma: float
    limit: list[float]
    distances: list[float]
    C_fit: float
    tail_ok: bool
    alpha: list[list[float]]

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "limit": self.limit,
            "distances": self.distances,
            "C_fit": self.C_fit,
            "tail_ok": self.tail_ok,
            "alpha": self.alpha,
        }


def positive_family_limit(family: Sequence[ExactMatrix], X: Sequence[Number], n: int, choice: Sequence[int] | None = None) -> PositiveLimitReport:
    """Normalized P_n X for positive matrices and its geometric rate against gamma = max tau.

    ``choice`` picks the family member at each step; the default cycles
    through the family. C is fitted on the first half of the run and
    ``tail_ok`` reports whether the second half stays under C gamma^n.
    """
    if any(v <= 0 for a in family for v in a.numerators):
        raise ValueError("all matrices must be positive")
    idx = list(choice[:n]) if choice is not None else [i % len(family) for i in range(n)]
    if len(idx) < n:
        raise ValueError("choice shorter than n")
    gamma = max(tau(family[i]) for i in set(idx))
    mats = [family[i].to_numpy().astype(float) for i in idx]
    x = np.asarray([float(v) for v in X])
    P = np.eye(mats[0].shape[0])
    vecs, alpha = [], []
    for m in mats:
        P = P @ m
        P /= P.sum()
        y = P @ x
        vecs.append(y / y.sum())
        cols = P.sum(axis=0)
        alpha.append((cols / cols.sum()).tolist())
    limit = vecs[-1]
    dist = [float(np.abs(v - limit).sum()) for v in vecs]
    half = max(n // 2, 1)
    if gamma == 0:
        C_fit, tail_ok = max(dist[:1]), all(v == 0 for v in dist[1:])
    else:
        C_fit = max(dist[i] / gamma ** (i + 1) for i in range(half))
        tail_ok = all(dist[i] <= C_fit * gamma ** (i + 1) * (1 + 1e-9) + 1e-15 for i in range(half, n))
    return PositiveLimitReport(gamma, limit.tolist(), dist, C_fit, tail_ok, alpha)


# top Lyapunov directions ---------------------------------------------------


def rademacher_matrices(beta: float) -> tuple[np.ndarray, np.ndarray]:
    ib = 1 / beta
    return np.array([[ib, 0.0], [1 - ib, 1.0]]), np.array([[1.0, 1 - ib], [0.0, ib]])


@dataclass
class DirectionReport:
    series: float
    matrix: float
    error: float

    def to_json(self) -> dict:
        return {"series": self.series, "matrix": self.matrix, "error": self.error}


def lyap_direction_rademacher(omega: str, beta: float) -> DirectionReport:
    """First coordinate of the top direction, as a digit series and from the normalized product."""
    if not 1 < beta <= 2:
        raise ValueError("need 1 < beta <= 2")
    if not omega or set(omega) - {"0", "1"}:
        raise ValueError("omega must be a nonempty binary word")
    series = (beta - 1) * math.fsum(int(c) / beta ** (i + 1) for i, c in enumerate(omega))
    m = rademacher_matrices(beta)
    P = np.eye(2)
    for c in omega:
        P = P @ m[int(c)]
        P /= P.sum()
    v = P @ np.ones(2)
    p = float(v[0] / v.sum())
    return DirectionReport(series, p, abs(series - p))


CF_A0 = ExactMatrix.from_rows([[1, 0], [1, 1]])
CF_A1 = ExactMatrix.from_rows([[1, 1], [0, 1]])


def runs_word(runs: Sequence[int]) -> str:
    """The word 1^{a_0} 0^{a_1} 1^{a_2} ..."""
    return "".join(("1" if i % 2 == 0 else "0") * a for i, a in enumerate(runs))


def convergents(runs: Sequence[int]) -> list[tuple[int, int]]:
    """(q_n, p_n) from q_n = a_n q_{n-1} + q_{n-2}, p_n = a_n p_{n-1} + p_{n-2}."""
    (q2, p2), (q1, p1) = (0, 1), (1, 0)
    out = []
    for a in runs:
        q, p = a * q1 + q2, a * p1 + p2
        out.append((q, p))
        (q2, p2), (q1, p1) = (q1, p1), (q, p)
    return out


def cf_value(terms: Sequence[int]) -> Fraction:
    """[[t_0, t_1, ...]] = 1/(t_0 + 1/(t_1 + ...)) as the last convergent p_n / q_n."""
    q, p = convergents(terms)[-1]
    if q == 0:
        raise ZeroDivisionError("continued fraction is infinite")
    return Fraction(p, q)


@dataclass
class CFReport:
    runs: tuple[int, ...]
    tail: str | None
    p_cf: Fraction
    p_matrix: Fraction
    entries_match: bool
    boundary: bool
    error: float

    def to_json(self) -> dict:
        return {
            "runs": list(self.runs),
            "tail": self.tail,
            "p_cf": format_rational(self.p_cf),
            "p_matrix": format_rational(self.p_matrix),
            "entries_match": self.entries_match,
            "boundary": self.boundary,
            "error": self.error,
        }


def lyap_direction_cf(runs: Sequence[int], tail: str | None = None) -> CFReport:
    """Top direction for the word 1^{a_0} 0^{a_1} ... against the truncated continued fraction.

    ``tail`` ("0" or "1") appends an infinite constant run; the direction is
    then the one-sided limit, reported as a boundary case.
    """
    runs = tuple(int(a) for a in runs)
    if not runs or runs[0] < 0 or any(a <= 0 for a in runs[1:]):
        raise ValueError("need a_0 >= 0 and a_i > 0 for i >= 1")
    if tail not in (None, "0", "1"):
        raise ValueError("tail must be None, '0' or '1'")
    word = runs_word(runs)
    P = matrix_product([CF_A1 if c == "1" else CF_A0 for c in word], 2)
    # entries against the convergents, undoing the final swap when the last run is of 1s
    qn, pn = convergents(runs)[-1]
    qm, pm = convergents(runs)[-2] if len(runs) > 1 else (1, 0)
    swap = ExactMatrix.from_rows([[0, 1], [1, 0]])
    core = ExactMatrix.from_rows([[qn, qm], [pn, pm]])
    ends_in_one = len(runs) % 2 == 1
    entries_match = P == (core @ swap if ends_in_one else core)
    if tail is None:
        v = (P @ ExactMatrix.column([1, 1])).to_list()
        boundary = False
    else:
        v = P.col(1 if tail == "0" else 0).to_list()
        boundary = True
    p_matrix = Fraction(v[0]) / sum(v)
    if tail is None:
        p_cf = cf_value((1,) + runs)
    else:
        # an infinite term truncates the continued fraction just before it
        extends = (tail == "1") == ends_in_one
        p_cf = cf_value((1,) + (runs[:-1] if extends else runs))
    return CFReport(runs, tail, p_cf, p_matrix, entries_match, boundary, abs(float(p_cf - p_matrix)))


# example 6 --------------------------------------------------------------------

EX6_R = ExactMatrix.from_rows([[2, 1, 1, 1], [1, 2, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
EX6_S = ExactMatrix.from_rows([[11, 0, 0, 0], [7, 4, 0, 0], [7, 4, 0, 0], [7, 2, 1, 1]])
EX6_T = ExactMatrix.from_rows([[11, 0, 0, 0], [7, 4, 0, 0], [7, 2, 2, 0], [7, 2, 1, 1]])
EX6_V = (
    (Fraction(1, 2), Fraction(1, 2), Fraction(0), Fraction(0)),
    (Fraction(3, 7), Fraction(4, 7), Fraction(0), Fraction(0)),
    (Fraction(1, 2), Fraction(1, 2), Fraction(0), Fraction(0)),
)
EX6_GROUPS = (frozenset({0}), frozenset({1}), frozenset({2, 3}))


def example6_sequence(length: int) -> list[ExactMatrix]:
    """R S TS TTS TTTS ..."""
    seq = [EX6_R]
    k = 1
    while len(seq) < length:
        seq += [EX6_T] * (k - 1) + [EX6_S]
        k += 1
    return seq[:length]


def example6_split(n: int) -> tuple[int, int]:
    """(k, r) with n = n_k + r, n_k = 1 + k(k+1)/2 and 0 <= r <= k."""
    if n < 1:
        raise ValueError("n must be positive")
    k = 0
    while 1 + triangular(k + 1) <= n:
        k += 1
    return k, n - 1 - triangular(k)


def phi(n: int) -> int:
    """n - (1 + floor(s/2 - 1/2) floor(s/2 + 1/2) / 2) with s = sqrt(8n - 7), in integers."""
    if n < 1:
        raise ValueError("n must be positive")
    m = 8 * n - 7
    s = isqrt(m)
    # floor(sqrt(m)/2 -+ 1/2) = floor((sqrt(m) -+ 1)/2) = (floor(sqrt(m)) -+ 1) // 2
    lo, hi = (s - 1) // 2, (s + 1) // 2
    return n - (1 + lo * hi // 2)


def example6_closed_form(n: int) -> ExactMatrix:
    _, r = example6_split(n)
    a, f, t = 11 ** (n - 1), 4 ** (n - 1), 2 ** (r + 1)
    return ExactMatrix.from_rows(
        [
            [5 * a - 3 * f, 3 * f - t, t - 1, 1],
            [5 * a - 4 * f, 4 * f - t, t - 1, 1],
            [0, 0, 0, 0],
            [0, 0, 0, 0],
        ]
    )


@dataclass
class Example6Row:
    n: int
    k: int
    r: int
    phi: int
    log2_norm3: float
    log11_norm1_over_n: float
    norm3_identity: bool
    norm4: int


@dataclass
class Example6Report:
    n: int
    closed_form_match: bool
    mismatch_at: int | None
    rows: list[Example6Row]
    partition_ok: bool
    partition_failures: list[int]
    limits: list[list[float]]
    enclosure_ok: bool
    enclosure_worst: float  # max over steps of distance / (C r^k)
    dominance: condc.DominanceReport

    @property
    def phi_ok(self) -> bool:
        return all(row.phi == row.r and row.norm3_identity for row in self.rows)

    @property
    def ok(self) -> bool:
        return self.closed_form_match and self.partition_ok and self.phi_ok and self.enclosure_ok

    def csv_rows(self):
        yield ("n", "k", "r", "phi", "log2_norm3", "log11_norm1_over_n", "norm4")
        for row in self.rows:
            yield (row.n, row.k, row.r, row.phi, row.log2_norm3, row.log11_norm1_over_n, row.norm4)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "closed_form_match": self.closed_form_match,
            "mismatch_at": self.mismatch_at,
            "phi_ok": self.phi_ok,
            "partition_ok": self.partition_ok,
            "partition_failures": self.partition_failures,
            "limits": self.limits,
            "enclosure_ok": self.enclosure_ok,
            "enclosure_worst": self.enclosure_worst,
            "H": self.dominance.H,
            "r": self.dominance.r,
            "C": self.dominance.C,
            "ok": self.ok,
        }


def _log_int(x: int, base: float) -> float:
    shift = max(x.bit_length() - 1000, 0)
    return (math.log(x >> shift) + shift * math.log(2)) / math.log(base)


def example6_run(n: int) -> Example6Report:
    """Direct products against the closed form, growth of the columns and the dominance partition.

    The partition is taken from the condition (C) diagnostics with a cut after
    every factor; each column of P_n must lie within C r^{k(n)} of its limit.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    seq = example6_sequence(n + 1)
    rows = []
    P = ExactMatrix.identity(4)
    mismatch = None
    for m in range(1, n + 1):
        P = P @ seq[m - 1]
        if mismatch is None and P != example6_closed_form(m):
            mismatch = m
        k, r = example6_split(m)
        norms = [sum(P.col_nums(j)) // P.denominator for j in range(4)]
        f = phi(m)
        rows.append(
            Example6Row(m, k, r, f, _log_int(norms[2], 2), _log_int(norms[0], 11) / m, norms[2] == 2 ** (f + 2) - 2, norms[3])
        )

    cuts = condc.CutSequence(tuple([0, 0] + list(range(1, n + 3))))
    lam, Lam, h1 = condc.observed_witness(seq, cuts, n)
    if not h1:
        raise RuntimeError("a block left H1")
    witness = condc.check_condition_c(seq, cuts, lam, Lam, n)
    if isinstance(witness, condc.ConditionCViolation):
        raise RuntimeError(f"condition (C) failed at n = {witness.n}: {witness.detail}")
    dom = condc.dominance_diagnostics(seq, witness, n, reinforce=False, start=2)
    failures = [st.n for st in dom.steps if tuple(st.groups) != EX6_GROUPS]

    worst = 0.0
    P = ExactMatrix.identity(4)
    steps = {st.n: st for st in dom.steps}
    for m in range(1, n + 1):
        P = P @ seq[m - 1]
        if m not in steps:
            continue
        radius = dom.C * dom.r ** steps[m].k
        for h, grp in enumerate(EX6_GROUPS):
            for j in grp:
                dist = proj_distance(P.col(j), EX6_V[h]).value
                worst = max(worst, dist / radius)
    return Example6Report(
        n,
        mismatch is None,
        mismatch,
        rows,
        not failures,
        failures,
        dom.limits,
        worst <= 1.0,
        worst,
        dom,
    )


# rotating rank-one approximants -------------------------------------------------

ROTATION = {
    "A": ExactMatrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    "B": ExactMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
    "C": ExactMatrix.from_rows([[1, 0, 0], [1, 1, 0], [0, 0, 1]]),
    "D": ExactMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
}
ROTATION_LIMIT_N = np.array([[0, 1 / 3, 0], [0, 0, 0], [0, 2 / 3, 0]])
ROTATION_LIMIT_M = np.array([[2 / 3, 0, 0], [0, 0, 0], [1 / 3, 0, 0]])


def rotation_word(blocks: int) -> str:
    """A^{2^0} B C^{2^1} D A^{2^2} B ... with ``blocks`` power-and-rotation blocks."""
    out = []
    for i in range(blocks):
        out.append(("A" if i % 2 == 0 else "C") * 2 ** i + ("B" if i % 2 == 0 else "D"))
    return "".join(out)


def rotation_checkpoints(k: int) -> tuple[int, int]:
    """(n_k, m_k)."""
    n_k = sum(2 ** i for i in range(2 * k)) + 2 * k
    m_k = sum(2 ** i for i in range(2 * k + 1)) + 2 * k + 1
    return n_k, m_k


@dataclass
class Checkpoint:
    kind: str
    k: int
    n: int
    B: list[list[float]]
    distance: float
    sigma_ratio: float


@dataclass
class RotationReport:
    checkpoints: list[Checkpoint]
    sigma_ratios: list[tuple[int, float]]

    def to_json(self) -> dict:
        return {
            "checkpoints": [
                {"kind": c.kind, "k": c.k, "n": c.n, "B": c.B, "distance": c.distance, "sigma_ratio": c.sigma_ratio}
                for c in self.checkpoints
            ],
            "sigma_ratios": [list(x) for x in self.sigma_ratios],
        }


def _rank_one(P: ExactMatrix) -> tuple[np.ndarray, float]:
    """Best rank-one approximant of P / sum(P), rescaled to entry sum 1, and sigma_2 / sigma_1."""
    a = np.array(P.to_float_rows())
    a /= a.sum()
    u, s, vt = np.linalg.svd(a)
    b = s[0] * np.outer(u[:, 0], vt[0])
    b /= b.sum()
    return b, float(s[1] / s[0])


def rotating_rank_one(kmax: int, stride: int = 0) -> RotationReport:
    """Rank-one approximants at the n_k and m_k checkpoints for k = 1..kmax.

    ``stride`` > 0 also samples sigma_2 / sigma_1 every ``stride`` steps.
    """
    if kmax < 1:
        raise ValueError("kmax must be positive")
    word = rotation_word(2 * kmax + 1)
    marks = {}
    for k in range(1, kmax + 1):
        n_k, m_k = rotation_checkpoints(k)
        marks[n_k] = ("n", k)
        marks[m_k] = ("m", k)
    last = max(marks)
    P = ExactMatrix.identity(3)
    cps, ratios = [], []
    for n, c in enumerate(word[:last], start=1):
        P = P @ ROTATION[c]
        if n in marks or (stride and n % stride == 0):
            b, ratio = _rank_one(P)
            ratios.append((n, ratio))
            if n in marks:
                kind, k = marks[n]
                target = ROTATION_LIMIT_N if kind == "n" else ROTATION_LIMIT_M
                cps.append(Checkpoint(kind, k, n, b.tolist(), float(np.abs(b - target).sum()), ratio))
    return RotationReport(cps, ratios)


def run_example(config: ExampleConfig) -> dict:
    """JSON summary of one example at its default parameters."""
    ex, n, p = str(config.example), config.n, config.params
    if ex == "1":
        blk = ExactMatrix.from_rows([[2, 1, 0, 0], [1, 2, 0, 0], [1, 1, 1, 1], [1, 1, 1, 1]])
        return blocktri_check([blk] * n, (2, 2)).to_json()
    if ex == "2":
        b = [Fraction(1, 2 ** (i + 1)) for i in range(n)]
        return tri2x2_limit([1] * n, b, [1] * n, n, s=1).to_json()
    if ex == "3":
        return example3_products(p.get("k", min(n, 12))).to_json()
    if ex == "4":
        return positive_family_limit([EX4_ODD, EX4_EVEN], (1, 0), n).to_json()
    if ex == "5":
        omega = p.get("omega", "10" * (n // 2))
        beta = p.get("beta", (1 + math.sqrt(5)) / 2)
        return {
            "rademacher": lyap_direction_rademacher(omega, beta).to_json(),
            "continued_fraction": lyap_direction_cf(p.get("runs", [1] * 25)).to_json(),
        }
    if ex == "6":
        return example6_run(n).to_json()
    return rotating_rank_one(p.get("kmax", 5)).to_json()

remark52_rotating = rotating_rank_one
