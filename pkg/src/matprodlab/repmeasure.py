"""Linearly representable measures and the dynamics of normalized vectors.

A representation is a finite family of nonnegative matrices A(0..a) with a
probability vector R fixed by their sum and a row vector L with L.R = 1; the
cylinder [w] then carries mass L A(w) R.  The helpers here compute those
masses exactly, the normalized vectors Pi_n(w, R) = A(w)R / |A(w)R|, n-step
potentials, weak-Gibbs constants, finite-horizon uniform Cauchy gaps and
rank-one limits of normalized matrix powers.  Conditions that are only
semi-decidable at a finite horizon report "inconclusive" rather than raising.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactmat import ExactMatrix, format_rational, parse_rational
from .hclass import vector_Lambda
from .projective import log_fraction
from .svd import singular_values

Family = Sequence[ExactMatrix]
Vec = tuple[Fraction, ...]


class ZeroProduct(ValueError):
    """A(w)R vanishes, so the word leaves the support set of R."""


class ZeroMeasure(ValueError):
    """A cylinder needed as a denominator has zero mass."""


def _vec(values: Iterable) -> Vec:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def mat_vec(m: ExactMatrix, v: Sequence[Fraction]) -> Vec:
    rows = m.to_rows()
    return tuple(sum((a * b for a, b in zip(r, v) if a), Fraction(0)) for r in rows)


def row_mat(v: Sequence[Fraction], m: ExactMatrix) -> Vec:
    rows = m.to_rows()
    d = m.cols
    return tuple(sum((v[i] * rows[i][j] for i in range(len(v)) if v[i]), Fraction(0)) for j in range(d))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def apply_word(family: Family, word: Sequence[int] | str, v: Sequence[Fraction]) -> Vec:
    """A(word) v, multiplying from the right end of the word."""
    out = tuple(v)
    for letter in reversed(list(word)):
        out = mat_vec(family[int(letter)], out)
    return out


def word_product(family: Family, word: Sequence[int] | str) -> ExactMatrix:
    m = ExactMatrix.identity(family[0].rows)
    for letter in word:
        m = m @ family[int(letter)]
    return m


def _check_word(word: Sequence[int] | str, letters: int) -> tuple[int, ...]:
    digits = tuple(int(c) for c in word)
    if any(not 0 <= c < letters for c in digits):
        raise ValueError(f"letter out of range in {word!r}")
    return digits


@dataclass(frozen=True)
class LinearRepresentation:
    matrices: tuple[ExactMatrix, ...]
    R: Vec
    L: Vec
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        object.__setattr__(self, "R", _vec(self.R))
        object.__setattr__(self, "L", _vec(self.L))
        d = len(self.R)
        if not self.matrices:
            raise ValueError("empty family")
        if any(m.shape != (d, d) for m in self.matrices):
            raise ValueError(f"all matrices must be {d}x{d}")
        if any(x < 0 for x in self.R) or sum(self.R) != 1:
            raise ValueError("R must be a probability vector")
        if len(self.L) != d or any(x < 0 for x in self.L):
            raise ValueError("L must be a nonnegative row of matching size")
        fixed = mat_vec(self.total, self.R)
        if fixed != self.R:
            raise ValueError(f"A_* R != R: got {[format_rational(x) for x in fixed]}")
        if dot(self.L, self.R) != 1:
            raise ValueError(f"L.R = {format_rational(dot(self.L, self.R))}, expected 1")

    @property
    def total(self) -> ExactMatrix:
        t = self.matrices[0]
        for m in self.matrices[1:]:
            t = t + m
        return t

    @property
    def letters(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return len(self.R)

    def vector(self, word: Sequence[int] | str) -> Vec:
        """A(word) R, cached and built by prepending letters."""
        key = tuple(int(c) for c in word)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.R if not key else mat_vec(self.matrices[key[0]], self.vector(key[1:]))
            if len(self._cache) < 1 << 18:
                self._cache[key] = hit
        return hit

    def to_json(self) -> dict:
        return {
            "matrices": [m.to_json() for m in self.matrices],
            "R": [format_rational(x) for x in self.R],
            "L": [format_rational(x) for x in self.L],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "LinearRepresentation":
        if isinstance(obj, str):
            obj = json.loads(obj)
        mats = [ExactMatrix.from_json(m) if isinstance(m, dict) else ExactMatrix.from_rows(m) for m in obj["matrices"]]
        return cls(tuple(mats), obj["R"], obj["L"])


def measure_cylinder(rep: LinearRepresentation, word: Sequence[int] | str) -> Fraction:
    _check_word(word, rep.letters)
    return dot(rep.L, rep.vector(word))


def pi_n(family: Family, word: Sequence[int] | str, R: Sequence[Fraction]) -> Vec:
    v = apply_word(family, word, _vec(R))
    s = sum(v)
    if s == 0:
        raise ZeroProduct(f"A({''.join(map(str, word))})R = 0")
    return tuple(x / s for x in v)


def omega_R_member(family: Family, R: Sequence[Fraction], word: Sequence[int] | str) -> bool:
    """Every prefix of ``word`` keeps A(prefix)R nonzero."""
    R = _vec(R)
    m = ExactMatrix.identity(len(R))
    col = ExactMatrix.column(R)
    for letter in word:
        m = m @ family[int(letter)]
        if (m @ col).is_zero():
            return False
    return True


def potential_ratio(rep: LinearRepresentation, word: Sequence[int] | str, n: int | None = None) -> Fraction:
    n = len(word) if n is None else n
    if n < 1 or n > len(word):
        raise ValueError("need 1 <= n <= len(word)")
    num = measure_cylinder(rep, word[:n])
    den = measure_cylinder(rep, word[1:n])
    if num == 0 or den == 0:
        raise ZeroMeasure(f"zero mass on {word[:n]!r}")
    return num / den


def n_step_potential(rep: LinearRepresentation, word: Sequence[int] | str, n: int | None = None) -> float:
    return log_fraction(potential_ratio(rep, word, n))


def cocycle_check(rep: LinearRepresentation, word: Sequence[int] | str) -> bool:
    """mu[w] equals the product of the potential ratios along the shifts of w."""
    n = len(word)
    prod = Fraction(1)
    for k in range(1, n + 1):
        prod *= potential_ratio(rep, word[n - k:], k)
    return prod == measure_cylinder(rep, word)


# float engine ---------------------------------------------------------------------


def _float_family(family: Family) -> np.ndarray:
    return np.array([m.to_numpy() for m in family], dtype=float)


def level_vectors(family: Family, R: Sequence, n: int) -> np.ndarray:
    """Rows A(v)R for all words v of length n, v read as a base-(a+1) index."""
    mats = _float_family(family)
    x = np.array([float(r) for r in R])[None, :]
    k = len(family)
    for _ in range(n):
        size = x.shape[0]
        out = np.empty((k * size, x.shape[1]))
        for a in range(k):
            out[a * size:(a + 1) * size] = x @ mats[a].T
        x = out
    return x


def _normalize_rows(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = v.sum(axis=1)
    ok = s > 0
    p = np.zeros_like(v)
    p[ok] = v[ok] / s[ok, None]
    return p, ok


def _word_index(word: Sequence[int] | str, base: int) -> int:
    idx = 0
    for c in word:
        idx = idx * base + int(c)
    return idx


@dataclass
class CauchyScan:
    depth: int
    extension: int
    gap: float
    witness: str | None
    words: int

    def to_json(self) -> dict:
        return dict(vars(self))


def cauchy_uniform_scan(family: Family, R: Sequence, depth: int, extension: int,
                        prefix: Sequence[int] | str = "") -> CauchyScan:
    """max |Pi_{n+k}(xi) - Pi_n(xi)| over admissible xi of length n + k, k <= r.

    When ``prefix`` is given only xi in that cylinder are scanned.
    """
    base = len(family)
    p = len(prefix)
    if p > depth:
        raise ValueError("prefix longer than depth")
    head = word_product(family, prefix).to_numpy() if p else None

    def restricted(vecs):
        return vecs if head is None else vecs @ head.T

    pn, ok_n = _normalize_rows(restricted(level_vectors(family, R, depth - p)))
    best, witness, count = 0.0, None, int(ok_n.sum())
    for k in range(1, extension + 1):
        # tail words of length depth - p + k; the first depth - p letters index Pi_n
        pk, ok_k = _normalize_rows(restricted(level_vectors(family, R, depth - p + k)))
        rep = np.repeat(pn, base**k, axis=0)
        mask = ok_k & np.repeat(ok_n, base**k)
        if not mask.any():
            continue
        gaps = np.where(mask, np.abs(pk - rep).sum(axis=1), 0.0)
        i = int(gaps.argmax())
        count += int(mask.sum())
        if gaps[i] > best:
            best = float(gaps[i])
            digits = np.base_repr(i, base).rjust(depth - p + k, "0") if i else "0" * (depth - p + k)
            witness = "".join(str(int(c)) for c in prefix) + digits
    return CauchyScan(depth, extension, best, witness, count)


# Gibbs constants ------------------------------------------------------------------


@dataclass
class GibbsConstants:
    depth: int
    sup_errors: list[float]
    K: list[float]
    rates: list[float]
    label: str = "depth-D lower estimate of the sup"

    @property
    def monotone(self) -> bool:
        return all(b >= a for a, b in zip(self.K, self.K[1:]))

    @property
    def rates_decreasing(self) -> bool:
        return all(b <= a + 1e-12 for a, b in zip(self.rates, self.rates[1:]))

    def to_json(self) -> dict:
        return {"depth": self.depth, "sup_errors": self.sup_errors, "K": [float(k) for k in self.K], "rates": [float(r) for r in self.rates],
                "label": self.label, "monotone": self.monotone}


def _potentials_float(rep: LinearRepresentation, words: np.ndarray, N: int) -> np.ndarray:
    """phi_k(word) for k = 1..N on each row of ``words``; shape (rows, N)."""
    mats = _float_family(rep.matrices)
    L = np.array([float(x) for x in rep.L])
    R = np.array([float(x) for x in rep.R])
    rows = words.shape[0]
    full = np.tile(L, (rows, 1))
    shifted = np.tile(L, (rows, 1))
    log_full = np.zeros(rows)
    log_shift = np.zeros(rows)
    out = np.empty((rows, N))
    for k in range(1, N + 1):
        full = np.einsum("ni,nij->nj", full, mats[words[:, k - 1]])
        if k >= 2:
            shifted = np.einsum("ni,nij->nj", shifted, mats[words[:, k - 1]])
        s = full.sum(axis=1)
        t = shifted.sum(axis=1)
        log_full += np.log(s)
        log_shift += np.log(t)
        full /= s[:, None]
        shifted /= t[:, None]
        out[:, k - 1] = (log_full + np.log(full @ R)) - (log_shift + np.log(shifted @ R))
    return out


def gibbs_constants(rep: LinearRepresentation, potential: Callable[[str], float], N: int, depth: int,
                    pad: str = "0") -> GibbsConstants:
    """K_n = exp(sum_{k<=n} sup|phi - phi_k|) with the sup over depth-D cylinder representatives.

    Each depth-D word is padded with ``pad`` to length max(N, D) before evaluation.
    """
    length = max(N, depth)
    alphabet = "".join(str(i) for i in range(rep.letters))
    reps = ["".join(t) + pad[0] * (length - depth) for t in iproduct(alphabet, repeat=depth)]
    words = np.array([[int(c) for c in w] for w in reps], dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        phik = _potentials_float(rep, words, N)
    target = np.array([potential(w) for w in reps])
    errs = np.abs(phik - target[:, None])
    errs[~np.isfinite(errs)] = math.inf
    sup = errs.max(axis=0).tolist()
    cum = np.cumsum(sup)
    K = [math.exp(c) if c < 700 else math.inf for c in cum]
    rates = [c / n for n, c in enumerate(cum, 1)]
    return GibbsConstants(depth, sup, K, rates)


# power limits -----------------------------------------------------------------


@dataclass
class PowerLimit:
    status: str  # "exact", "numeric", "divergent", "oscillating", "not-rank-one"
    C: tuple | None = None
    D: tuple | None = None
    limit: ExactMatrix | None = None
    iterations: int = 0
    detection: int | None = None

    @property
    def converged(self) -> bool:
        return self.status in ("exact", "numeric")

    def to_json(self) -> dict:
        fmt = lambda v: None if v is None else [format_rational(x) if isinstance(x, Fraction) else x for x in v]  # noqa: E731
        return {"status": self.status, "C": fmt(self.C), "D": fmt(self.D), "iterations": self.iterations,
                "detection": self.detection}


def _rank_one_split(m: ExactMatrix) -> tuple[Vec, Vec] | None:
    rows = m.to_rows()
    d = m.cols
    col_sums = [sum(rows[i][j] for i in range(m.rows)) for j in range(d)]
    j0 = next((j for j in range(d) if col_sums[j]), None)
    if j0 is None:
        return None
    total = sum(col_sums)
    C = tuple(rows[i][j0] / col_sums[j0] for i in range(m.rows))
    D = tuple(s / total for s in col_sums)
    # m / |m| must equal C D with |C| = 1
    for i in range(m.rows):
        for j in range(d):
            if rows[i][j] / total != C[i] * D[j]:
                return None
    return C, D


def _exact_shortcut(a: ExactMatrix, max_power: int, max_period: int = 6) -> tuple[ExactMatrix | str, int] | None:
    """Limit of A^n/|A^n| when the powers are eventually geometric or affine along a period q.

    For n >= p either A^{n+q} = c A^n, or A^{n+2q} - 2A^{n+q} + A^n = 0 so that
    A^{p+j+kq} grows linearly in k; the limit exists when all residues j agree.
    """
    powers = [ExactMatrix.identity(a.rows)]
    for _ in range(max_power + 2 * max_period + 1):
        powers.append(powers[-1] @ a)
    for p in range(max_power):
        if powers[p].is_zero():
            return None
        for q in range(1, max_period + 1):
            x, y, z = powers[p], powers[p + q], powers[p + 2 * q]
            c = y.norm1() / x.norm1()
            if c and y == x * c:
                lims = {powers[p + j].normalized() for j in range(q)}
                return (lims.pop(), p) if len(lims) == 1 else ("oscillating", p)
            if z + x == y * 2 and y != x:
                lims = set()
                for j in range(q):
                    lo, hi = powers[p + j].to_rows(), powers[p + q + j].to_rows()
                    diff = [[u - v for u, v in zip(rh, rl)] for rh, rl in zip(hi, lo)]
                    if any(v < 0 for r in diff for v in r) or not any(v for r in diff for v in r):
                        return None
                    lims.add(ExactMatrix.from_rows(diff).normalized())
                return (lims.pop(), p) if len(lims) == 1 else ("oscillating", p)
    return None


def power_limit(a: ExactMatrix, tol: float = 1e-10, max_iter: int = 10_000, max_power: int = 12) -> PowerLimit:
    """Rank-one limit C D of A^n / |A^n|, exact when the powers are eventually affine or geometric."""
    if a.is_zero():
        raise ValueError("zero matrix")
    hit = _exact_shortcut(a, max_power)
    if hit is not None:
        lim, p = hit
        if isinstance(lim, str):
            return PowerLimit(lim, detection=p)
        split = _rank_one_split(lim)
        if split is None:
            return PowerLimit("not-rank-one", limit=lim, detection=p)
        return PowerLimit("exact", split[0], split[1], lim, detection=p)
    x = a.to_numpy()
    x = x / x.sum()
    af = a.to_numpy()
    prev = x
    for it in range(1, max_iter + 1):
        y = x @ x
        s = y.sum()
        if s == 0:
            return PowerLimit("divergent", iterations=it)
        y /= s
        sv = singular_values(y.tolist())
        if np.abs(y - prev).sum() < tol and (len(sv) < 2 or sv[1] <= tol * sv[0]):
            # a limit of the squares is a limit of all powers only if A fixes its direction
            z = af @ y
            if z.sum() == 0 or np.abs(z / z.sum() - y).sum() > 1e3 * tol:
                return PowerLimit("oscillating", iterations=it)
            col = y.sum(axis=0)
            j0 = int(col.argmax())
            C = tuple((y[:, j0] / col[j0]).tolist())
            D = tuple((col / col.sum()).tolist())
            return PowerLimit("numeric", C, D, iterations=it, detection=it)
        prev, x = x, y
        if it > 64:
            break
    return PowerLimit("divergent", iterations=max_iter)


def power_residuals(a: ExactMatrix, lim: PowerLimit, n_max: int) -> list[float]:
    """|A^n/|A^n| - C D| for n = 1..n_max."""
    cd = np.outer(np.array([float(c) for c in lim.C]), np.array([float(d) for d in lim.D]))
    af = a.to_numpy()
    x = np.eye(a.rows)
    out = []
    for _ in range(n_max):
        x = x @ af
        x = x / x.sum()
        out.append(float(np.abs(x - cd).sum()))
    return out


# convergence conditions -----------------------------------------------------------


def support(v: Sequence[Fraction]) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(v) if x)


@dataclass
class PointwiseReport:
    route: str  # "S1", "S2" or "inconclusive"
    s1_ok: bool | None
    s2_ok: bool | None
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.route != "inconclusive"

    def to_json(self) -> dict:
        return {"route": self.route, "s1": self.s1_ok, "s2": self.s2_ok, "details": self.details}


def check_pointwise_conditions(family: Family, R: Sequence, prefix: str, psi: Callable[[int], int] | None = None,
                               N: int | None = None, tail: str | None = None, n_min: int = 1) -> PointwiseReport:
    """Support stabilization along ``prefix`` or, with ``tail`` = s, the constant-tail route for prefix s^infty."""
    R = _vec(R)
    details: dict = {}
    s2_ok = None
    if tail is not None:
        lim = power_limit(family[int(tail)])
        details["power_limit"] = lim.status
        if lim.converged and lim.limit is not None:
            B = lim.limit
            v = mat_vec(word_product(family, prefix) @ B, R)
            s2_ok = any(v)
        else:
            s2_ok = False
        if s2_ok:
            return PointwiseReport("S2", None, True, details)
    psi = psi or (lambda n: n - 1)
    N = len(prefix) if N is None else min(N, len(prefix))
    s1_ok = True
    for n in range(max(n_min, 1), N + 1):
        m = psi(n)
        base = support(apply_word(family, prefix[m:n], R))
        for r in range(0, N - n + 1):
            if support(apply_word(family, prefix[m:n + r], R)) != base:
                s1_ok = False
                details["s1_failure"] = (n, r)
                break
        if not s1_ok:
            break
    route = "S1" if s1_ok and N >= 1 else "inconclusive"
    return PointwiseReport(route, s1_ok, s2_ok, details)


@dataclass
class UniformParams:
    Lambda: Fraction
    psi: Callable[[int], int] | None = None
    tail: str | None = None
    phi: Callable[[int], int] | None = None


@dataclass
class UniformReport:
    u1_ok: bool | None
    u2_ok: bool | None
    u3_ok: bool | None
    max_Lambda: Fraction | None
    checked: int
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return bool(self.u1_ok) or bool(self.u2_ok and self.u3_ok)

    @property
    def status(self) -> str:
        return "certified" if self.certified else "inconclusive"

    def to_json(self) -> dict:
        return {"u1": self.u1_ok, "u2": self.u2_ok, "u3": self.u3_ok, "status": self.status,
                "max_Lambda": None if self.max_Lambda is None else format_rational(self.max_Lambda),
                "checked": self.checked, "details": self.details}


def _extensions(letters: int, length: int) -> Iterable[str]:
    alphabet = "".join(str(i) for i in range(letters))
    return ("".join(t) for t in iproduct(alphabet, repeat=length))


def check_uniform_conditions(family: Family, R: Sequence, prefix: str, params: UniformParams, N: int,
                             n_min: int = 1) -> UniformReport:
    """Exhaustive finite-horizon check over xi in [prefix_1..prefix_n] of length at most N."""
    R = _vec(R)
    letters = len(family)
    worst = Fraction(0)
    checked = 0
    details: dict = {}

    def lam_of(v: Vec) -> Fraction:
        return vector_Lambda(ExactMatrix.column(v))

    u1 = None
    if params.tail is None:
        psi = params.psi or (lambda n: n - 1)
        u1 = True
        for n in range(max(n_min, 1), min(len(prefix), N) + 1):
            m = psi(n)
            base_vec = apply_word(family, prefix[m:n], R)
            base = support(base_vec)
            for r in range(0, N - n + 1):
                for t in _extensions(letters, r):
                    v = apply_word(family, prefix[m:n] + t, R)
                    if not any(v):
                        continue
                    checked += 1
                    lam = lam_of(v)
                    worst = max(worst, lam)
                    if lam > params.Lambda:
                        u1 = False
                        details.setdefault("u1.1_failure", (n, t))
                    if support(v) != base:
                        u1 = False
                        details.setdefault("u1.2_failure", (n, t))
        return UniformReport(u1, None, None, worst, checked, details)

    s = params.tail
    lim = power_limit(family[int(s)])
    details["power_limit"] = lim.status
    u2 = lim.converged and lim.C is not None and any(mat_vec(word_product(family, prefix), lim.C))
    if not u2:
        return UniformReport(None, False, None, None, 0, details)
    Ds = lim.D
    omega = lambda k: prefix[k] if k < len(prefix) else s  # noqa: E731
    u3 = True
    for n in range(max(n_min, 1), N + 1):
        head = "".join(omega(k) for k in range(n))
        for r in range(0, N - n + 1):
            for t in _extensions(letters, r):
                xi = head + t
                if not any(apply_word(family, xi, R)):
                    continue
                m = n
                while m < len(xi) and xi[m] == omega(m):
                    m += 1
                v = apply_word(family, xi[m:], R)
                checked += 1
                if not any(v):
                    u3 = False
                    details.setdefault("u3.2_zero", xi)
                    continue
                lam = lam_of(v)
                worst = max(worst, lam)
                if lam > params.Lambda:
                    u3 = False
                    details.setdefault("u3.2_failure", xi)
                if dot(Ds, v) == 0:
                    u3 = False
                    details.setdefault("u3.3_failure", xi)
    return UniformReport(None, True, u3, worst, checked, details)


def decomposition_psi(word: str, lag: int = 3) -> Callable[[int], int]:
    """psi(n): end of the W-block lying ``lag`` blocks before the last block boundary at or before n."""
    from .langw import w_decompose

    dec = w_decompose(word)
    bounds = [len(dec.head)]
    for w in dec.body:
        bounds.append(bounds[-1] + len(w.text))

    def psi(n: int) -> int:
        idx = max((i for i, b in enumerate(bounds) if b <= n), default=0)
        return bounds[max(idx - lag, 0)] if idx - lag >= 0 else 0

    return psi


# the non-uniform family --------------------------------------------------------------

NONUNIFORM_FAMILY = (
    ExactMatrix.from_rows([[1, 0, 1], [0, 1, 0], [0, 0, 0]]),
    ExactMatrix.from_rows([[1, 0, 1], ["1/2", 0, 0], [0, 0, 0]]),
)
NONUNIFORM_R = (Fraction(1, 3),) * 3
NONUNIFORM_LIMIT = (Fraction(2, 3), Fraction(1, 3), Fraction(0))
NONUNIFORM_JUMP = (Fraction(4, 5), Fraction(1, 5), Fraction(0))


def nonuniform_ratio(word: str, L: Sequence[Fraction] = (1, 1, 1)) -> Fraction:
    """L A(w_1) Pi_{n-1}(sigma w) / L Pi_{n-1}(sigma w) for the non-uniform family."""
    L = _vec(L)
    p = pi_n(NONUNIFORM_FAMILY, word[1:], NONUNIFORM_R)
    return dot(L, mat_vec(NONUNIFORM_FAMILY[int(word[0])], p)) / dot(L, p)


def iid_representation(probs: Sequence[Fraction]) -> LinearRepresentation:
    mats = tuple(ExactMatrix.from_rows([[Fraction(p)]]) for p in probs)
    return LinearRepresentation(mats, (Fraction(1),), (Fraction(1),))
