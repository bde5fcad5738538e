"""Cut sequences, bridged blocks Q_n, dominant-column groups and limit diagnostics.

A matrix sequence ``seq`` is indexed from 1 in the mathematical sense:
``seq[n - 1]`` is A_n, P_n = A_1 ... A_n and P_0 is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .exactmat import ExactMatrix, column_supports, format_rational, matrix_product, support_pattern
from .hclass import HClassProfile, in_H1, min_Lambda, profile, vector_Lambda
from .projective import proj_distance, proj_distance_float
from .svd import singular_values

# cut sequences ----------------------------------------------------------------


@dataclass(frozen=True)
class CutSequence:
    """Finite prefix s_0 = s_1 = 0 < s_2 < ... of a cut sequence."""

    cuts: tuple[int, ...]

    def __post_init__(self):
        s = self.cuts
        if len(s) < 3 or s[0] != 0 or s[1] != 0:
            raise ValueError("cuts must start 0, 0 and have a third term")
        if any(b <= a for a, b in zip(s[1:], s[2:])):
            raise ValueError("cuts must increase strictly from s_1 on")

    def __getitem__(self, k: int) -> int:
        return self.cuts[k]

    def __len__(self) -> int:
        return len(self.cuts)

    @property
    def last(self) -> int:
        return self.cuts[-1]

    def k_of(self, n: int) -> int:
        """The k with s_{k+1} <= n < s_{k+2}."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        s = self.cuts
        for k in range(len(s) - 2):
            if s[k + 1] <= n < s[k + 2]:
                return k
        raise ValueError(f"n = {n} is beyond the stored cuts (last {s[-1]})")

    def to_json(self) -> list[int]:
        return list(self.cuts)


def reinforce_cuts(cuts: CutSequence) -> CutSequence:
    """S_k = s_{gamma(k)} with gamma(0) = 1 and gamma(k+1) = gamma(k) + k."""
    out = []
    g, k = 1, 0
    while g < len(cuts):
        out.append(cuts[g])
        g, k = g + k, k + 1
    if len(out) < 3:
        raise ValueError("not enough cuts to reinforce")
    return CutSequence(tuple(out))


# products ---------------------------------------------------------------------


def _dim(seq: Sequence[ExactMatrix]) -> int:
    return seq[0].rows


def p_product(seq: Sequence[ExactMatrix], n: int) -> ExactMatrix:
    if n > len(seq):
        raise IndexError(f"n = {n} exceeds the available sequence ({len(seq)})")
    return matrix_product(seq[:n], _dim(seq))


def q_block(seq: Sequence[ExactMatrix], cuts: CutSequence, n: int) -> ExactMatrix:
    """Q_n = A_{s_k + 1} ... A_n with k = k(n); Q_0 is the identity."""
    if n > len(seq):
        raise IndexError(f"n = {n} exceeds the available sequence ({len(seq)})")
    k = cuts.k_of(n)
    return matrix_product(seq[cuts[k]:n], _dim(seq))


@dataclass
class BlockState:
    n: int
    k: int
    P: ExactMatrix
    Q: ExactMatrix


def iterate_blocks(seq: Sequence[ExactMatrix], cuts: CutSequence, horizon: int) -> Iterator[BlockState]:
    """Yield (n, k(n), P_n, Q_n) for n = 0..horizon with incremental products."""
    d = _dim(seq)
    ident = ExactMatrix.identity(d)
    P, Q, T = ident, ident, ident  # T = A_{s_{k+1}+1} ... A_n
    k = 0
    yield BlockState(0, 0, P, Q)
    for n in range(1, horizon + 1):
        A = seq[n - 1]
        P = P @ A
        if n == cuts[k + 2]:
            Q = T @ A
            T = ident
            k += 1
        else:
            Q = Q @ A
            T = T @ A
        if k + 2 >= len(cuts) and n >= cuts[-1]:
            raise ValueError(f"n = {n} is beyond the stored cuts")
        yield BlockState(n, k, P, Q)


# condition (C) ----------------------------------------------------------------


@dataclass
class ConditionCWitness:
    cuts: CutSequence
    lam: Fraction
    Lam: Fraction
    horizon: int
    per_n: list[tuple[int, HClassProfile]]

    def to_json(self) -> dict:
        return {
            "cuts": self.cuts.to_json(),
            "lambda": format_rational(self.lam),
            "Lambda": format_rational(self.Lam),
            "horizon": self.horizon,
            "per_n": [{"n": n, **p.to_json()} for n, p in self.per_n],
        }


@dataclass
class ConditionCViolation:
    n: int
    failed: str
    detail: str

    def to_json(self) -> dict:
        return {"n": self.n, "failed": self.failed, "detail": self.detail}


def check_condition_c(
    seq: Sequence[ExactMatrix],
    cuts: CutSequence,
    lam: Fraction,
    Lam: Fraction,
    horizon: int,
    *,
    suffix_products: bool = True,
) -> ConditionCWitness | ConditionCViolation:
    """Check Q_n in H1 ∩ H2(Lam) ∩ H3(lam) for s_2 <= n <= horizon.

    With ``suffix_products`` also check Q_{s_p} ... Q_{s_k} Q_n in H2(Lam / (1 - lam)).
    """
    lam, Lam = Fraction(lam), Fraction(Lam)
    if not (0 <= lam < 1 <= Lam):
        raise ValueError("need 0 <= lambda < 1 <= Lambda")
    Lam_prime = Lam / (1 - lam)
    blocks: list[ExactMatrix] = []  # Q_{s_1}, Q_{s_2}, ... as they complete
    per_n = []
    cut_set = set(cuts.cuts[1:])
    for st in iterate_blocks(seq, cuts, horizon):
        if st.n in cut_set:
            # n = s_p closes the block Q_{s_p}
            blocks.append(st.Q)
        if st.n < cuts[2]:
            continue
        prof = profile(st.Q)
        if not prof.in_H1:
            return ConditionCViolation(st.n, "H1", "column supports of Q_n are not a chain")
        if prof.Lambda_min > Lam:
            return ConditionCViolation(st.n, "H2", f"min Lambda {format_rational(prof.Lambda_min)} > {format_rational(Lam)}")
        if prof.lambda_min > lam:
            return ConditionCViolation(st.n, "H3", f"min lambda {format_rational(prof.lambda_min)} > {format_rational(lam)}")
        if suffix_products and st.k >= 1:
            M = st.Q
            # blocks[p] = Q_{s_{p+1}}; walk p = k, k-1, ..., 1 (Q_{s_1} is the identity)
            for p in range(st.k, 1, -1):
                M = blocks[p - 1] @ M
                if min_Lambda(M) > Lam_prime:
                    return ConditionCViolation(st.n, "H2'", f"suffix product from block {p} exceeds Lambda/(1-lambda)")
        per_n.append((st.n, prof))
    return ConditionCWitness(cuts, lam, Lam, horizon, per_n)


def observed_witness(seq: Sequence[ExactMatrix], cuts: CutSequence, horizon: int) -> tuple[Fraction, Fraction, bool]:
    """Smallest (lambda, Lambda) and the H1 flag over s_2 <= n <= horizon."""
    lam, Lam, h1 = Fraction(0), Fraction(1), True
    for st in iterate_blocks(seq, cuts, horizon):
        if st.n < cuts[2]:
            continue
        prof = profile(st.Q)
        lam, Lam, h1 = max(lam, prof.lambda_min), max(Lam, prof.Lambda_min), h1 and prof.in_H1
    return lam, Lam, h1


# block structure --------------------------------------------------------------

Block = tuple[frozenset[int], frozenset[int]]


def column_blocks(m: ExactMatrix) -> list[Block]:
    """Rectangles I_1 x J_1, I_2 x J_2, ... of an H1 matrix with I_1 ⊋ I_2 ⊋ ..."""
    if m.is_zero():
        raise ValueError("zero matrix")
    if not in_H1(m):
        raise ValueError("matrix is not in H1")
    groups: dict = {}
    for j, p in enumerate(column_supports(m)):
        if not p.is_zero():
            groups.setdefault(p, []).append(j)
    ordered = sorted(groups, key=lambda p: -len(p.indices))
    return [(p.indices, frozenset(groups[p])) for p in ordered]


def diamond_blocks(P: ExactMatrix, Q: ExactMatrix) -> list[Block]:
    """Blocks (I'_h, J'_h): J'_h are the column blocks of Q, I'_h the common support of P U_j."""
    out = []
    for _, cols in column_blocks(Q):
        j = min(cols)
        rows = support_pattern(P.col(j)).indices
        if not rows:
            break
        out.append((rows, cols))
    return out


def h_diamond(P: ExactMatrix, blocks: Sequence[Block], h: int) -> ExactMatrix:
    """Restriction of P to the h-th rectangle (h counts from 1)."""
    if not 1 <= h <= len(blocks):
        raise IndexError(f"invalid block index {h}")
    rows, cols = blocks[h - 1]
    c = P.cols
    num = [v if (i in rows and j in cols) else 0 for i in range(P.rows) for j in range(c) for v in (P.numerators[i * c + j],)]
    return ExactMatrix(P.rows, c, num, P.denominator)


def h_index(x: ExactMatrix | Sequence, blocks: Sequence[Block]) -> int:
    """Smallest h (from 1) whose column set meets the support of X."""
    support = support_pattern(x).indices
    for h, (_, cols) in enumerate(blocks, start=1):
        if support & cols:
            return h
    raise ValueError("P X = 0 for this X")


def xi_compress(labels: Sequence) -> tuple:
    """Collapse runs of equal consecutive labels."""
    out = []
    for x in labels:
        if not out or out[-1] != x:
            out.append(x)
    return tuple(out)


# dominance diagnostics ---------------------------------------------------------


def _normalized_float(v: ExactMatrix) -> list[float]:
    s = sum(v.numerators)
    return [x / s for x in v.numerators] if s else [0.0] * len(v.numerators)


def _exact_unit(v: ExactMatrix) -> list[Fraction]:
    s = sum(v.numerators)
    return [Fraction(x, s) for x in v.numerators]


def rate_constants(lam: Fraction, Lam: Fraction) -> tuple[float, float]:
    """(r, C) = (max(lambda, Lambda/(Lambda+1)), 4 Lambda^3)."""
    r = max(float(lam), float(Lam / (Lam + 1)))
    try:
        C = 4.0 * float(Lam) ** 3
    except OverflowError:
        C = math.inf
    return r, C


@dataclass
class StepReport:
    n: int
    k: int
    blocks: list[Block]
    labels: tuple[int, ...]
    groups: list[frozenset[int]]
    gaps: list[float]
    norm_ratios: list[float]
    radius: float
    sigma_ratio: float


@dataclass
class BoundCheck:
    n: int
    h: int
    lhs: float
    rhs: float
    column_distance: float
    column_radius: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-9) + 1e-9


@dataclass
class DominanceReport:
    H: int
    stable_since: int
    limits: list[list[float]]
    r: float
    C: float
    Lam: Fraction
    lam: Fraction
    horizon: int = 0
    steps: list[StepReport] = field(default_factory=list)
    bounds: dict[int, list[BoundCheck]] = field(default_factory=dict)

    def csv_rows(self) -> Iterator[tuple]:
        for st in self.steps:
            for h, grp in enumerate(st.groups, start=1):
                ratio = st.norm_ratios[h - 2] if h >= 2 else 0.0
                for j in sorted(grp):
                    yield (st.n, st.k, h, j + 1, st.gaps[h - 1], ratio, st.sigma_ratio)

    def to_json(self) -> dict:
        return {
            "H": self.H,
            "horizon": self.horizon,
            "stable_since": self.stable_since,
            "limits": self.limits,
            "r": self.r,
            "C": self.C,
            "lambda": format_rational(self.lam),
            "Lambda": format_rational(self.Lam),
            "steps": [
                {
                    "n": s.n,
                    "k": s.k,
                    "groups": [sorted(j + 1 for j in g) for g in s.groups],
                    "gaps": s.gaps,
                    "norm_ratios": s.norm_ratios,
                    "radius": s.radius,
                }
                for s in self.steps
            ],
        }


def _assign_labels(reps: list[list[float]], limits: list[list[float]]) -> tuple[int, ...]:
    """Nondecreasing labelling of block representatives minimizing total distance to the limits."""
    m, g = len(reps), len(limits)
    cost = [[min(proj_distance_float(rep, lim), 1e300) for lim in limits] for rep in reps]
    inf = float("inf")
    best = [[inf] * g for _ in range(m)]
    back = [[0] * g for _ in range(m)]
    for c in range(g):
        best[0][c] = cost[0][c]
    for i in range(1, m):
        run, arg = inf, 0
        for c in range(g):
            if best[i - 1][c] < run:
                run, arg = best[i - 1][c], c
            best[i][c] = run + cost[i][c]
            back[i][c] = arg
    c = min(range(g), key=lambda x: best[m - 1][x])
    labels = [c]
    for i in range(m - 1, 0, -1):
        c = back[i][c]
        labels.append(c)
    return tuple(reversed(labels))


def dominance_diagnostics(
    seq: Sequence[ExactMatrix],
    witness: ConditionCWitness,
    horizon: int | None = None,
    xs: Sequence[ExactMatrix] = (),
    *,
    reinforce: bool = True,
    merge_tol: float = 1e-6,
    start: int | None = None,
) -> DominanceReport:
    """Dominant-column groups, limit estimates and the limit-vector bound for each X.

    With ``reinforce`` the cut sequence is subsampled so that Q_n is in
    H3(lambda^k) and Lambda is replaced by Lambda / (1 - lambda); the rate
    constants r, C are computed from those values.
    """
    horizon = witness.horizon if horizon is None else horizon
    if horizon > witness.horizon:
        raise ValueError("diagnostics horizon exceeds the verified horizon")
    cuts = witness.cuts
    lam, Lam = witness.lam, witness.Lam
    if reinforce:
        try:
            cuts = reinforce_cuts(cuts)
            Lam = Lam / (1 - lam)
        except ValueError:
            pass
    r, C = rate_constants(lam, Lam)
    horizon = min(horizon, cuts.last - 1)
    d = _dim(seq)
    first = cuts[2] if start is None else max(start, cuts[2])

    states = [st for st in iterate_blocks(seq, cuts, horizon) if st.n >= first]
    final = states[-1]
    fblocks = diamond_blocks(final.P, final.Q)
    freps = [_normalized_float(final.P.col(min(cols))) for _, cols in fblocks]
    # merge consecutive horizon blocks that share a limit
    limits: list[list[float]] = []
    for rep in freps:
        if limits and proj_distance_float(rep, limits[-1]) <= merge_tol:
            continue
        limits.append(rep)

    report = DominanceReport(H=len(limits), stable_since=first, limits=limits, r=r, C=C, Lam=Lam, lam=lam, horizon=horizon)
    last_count = None
    for st in states:
        blocks = diamond_blocks(st.P, st.Q)
        reps = [_normalized_float(st.P.col(min(cols))) for _, cols in blocks]
        labels = _assign_labels(reps, limits)
        compressed = xi_compress(labels)
        groups: list[frozenset[int]] = []
        gaps: list[float] = []
        for lab in compressed:
            cols = frozenset().union(*(blocks[i][1] for i in range(len(blocks)) if labels[i] == lab))
            groups.append(cols)
            gaps.append(max(proj_distance_float(_normalized_float(st.P.col(j)), limits[lab]) for j in cols))
        norms = [sum(st.P.col(j).numerators) for j in range(d)]
        ratios = []
        for a, b in zip(groups, groups[1:]):
            ratios.append(max(norms[j] for j in b) / min(norms[j] for j in a))
        k = st.k
        radius = C * r ** k
        sv = singular_values(_scaled_rows(st.P))
        sigma = sv[1] / sv[0] if len(sv) > 1 and sv[0] > 0 else 0.0
        report.steps.append(StepReport(st.n, k, blocks, labels, groups, gaps, [float(x) for x in ratios], radius, sigma))
        if len(compressed) != last_count:
            report.stable_since = st.n
            last_count = len(compressed)

        for xi, x in enumerate(xs):
            px = st.P @ x
            if px.is_zero():
                continue
            h = h_index(x, blocks)
            lab = labels[h - 1]
            lim = limits[lab]
            unit = _normalized_float(px)
            lhs = sum(abs(a - b) for a, b in zip(unit, lim))
            eps_hat = max(
                proj_distance_float(_normalized_float(st.P.col(j)), lim) for j in blocks[h - 1][1]
            )
            lam_x = float(vector_Lambda(x))
            rhs = d * (eps_hat + radius) * lam_x
            jcol = min(blocks[h - 1][1])
            col_dist = proj_distance(px, st.P.col(jcol))
            report.bounds.setdefault(xi, []).append(
                BoundCheck(st.n, h, lhs, rhs, col_dist.value, C * lam_x * r ** k)
            )
    return report


def _scaled_rows(P: ExactMatrix) -> list[list[float]]:
    """Float rows of P up to one common positive factor, safe for huge entries."""
    shift = max(max(P.numerators).bit_length() - 900, 0)
    return [[float(v >> shift) for v in P.numerators[i * P.cols:(i + 1) * P.cols]] for i in range(P.rows)]


# spectral diagnostics ----------------------------------------------------------


def singular_gap(p: Sequence[Sequence[float]] | ExactMatrix) -> tuple[float, float, float]:
    """(sigma_1, sigma_2, sigma_2 / sigma_1) with ratio 0 for the zero matrix."""
    rows = p.to_float_rows() if isinstance(p, ExactMatrix) else p
    sv = singular_values(rows)
    s1 = sv[0] if sv else 0.0
    s2 = sv[1] if len(sv) > 1 else 0.0
    return s1, s2, (s2 / s1 if s1 > 0 else 0.0)


def common_left_eigvec_check(family: Sequence, tol: float = 1e-9) -> bool:
    """True when some nonzero row vector is a left eigenvector of every family member."""
    import numpy as np

    mats = [np.asarray(m.to_float_rows() if isinstance(m, ExactMatrix) else m, dtype=float) for m in family]
    d = mats[0].shape[0]
    # candidate subspaces: left eigenspaces of the first matrix, refined against the rest
    spaces = _left_eigenspaces(mats[0], tol)
    for m in mats[1:]:
        refined = []
        for basis in spaces:
            for other in _left_eigenspaces(m, tol):
                inter = _intersect(basis, other, tol)
                if inter is not None:
                    refined.append(inter)
        spaces = refined
        if not spaces:
            return False
    return bool(spaces) and d > 0


def _left_eigenspaces(m, tol):
    import numpy as np

    vals = np.linalg.eigvals(m.T)
    spaces = []
    seen: list[complex] = []
    for v in vals:
        if any(abs(v - s) <= max(tol, 1e-7) * max(1.0, abs(v)) for s in seen):
            continue
        seen.append(v)
        shifted = m.T - v * np.eye(m.shape[0])
        _, s, vh = np.linalg.svd(shifted)
        null = vh[s <= max(tol, 1e-7) * max(1.0, s[0] if len(s) else 1.0)].conj().T
        if null.shape[1]:
            spaces.append(null)
    return spaces


def _intersect(a, b, tol):
    import numpy as np

    stacked = np.hstack([a, -b])
    _, s, vh = np.linalg.svd(stacked)
    rank_def = vh[s <= max(tol, 1e-7) * max(1.0, s[0])] if len(s) == stacked.shape[1] else vh[len(s):]
    extra = vh[len(s):] if stacked.shape[1] > len(s) else np.zeros((0, stacked.shape[1]))
    null = np.vstack([rank_def, extra]) if rank_def.size or extra.size else np.zeros((0, stacked.shape[1]))
    if null.shape[0] == 0:
        return None
    coeff = null[:, : a.shape[1]].T
    vecs = a @ coeff
    norms = np.linalg.norm(vecs, axis=0)
    keep = vecs[:, norms > 1e-9]
    if keep.shape[1] == 0:
        return None
    q, _ = np.linalg.qr(keep)
    return q


__all__ = [
    "CutSequence",
    "reinforce_cuts",
    "p_product",
    "q_block",
    "iterate_blocks",
    "ConditionCWitness",
    "ConditionCViolation",
    "check_condition_c",
    "observed_witness",
    "column_blocks",
    "diamond_blocks",
    "h_diamond",
    "h_index",
    "xi_compress",
    "dominance_diagnostics",
    "DominanceReport",
    "singular_gap",
    "common_left_eigvec_check",
]

theorem_a_diagnostics = dominance_diagnostics
