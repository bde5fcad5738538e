"""The Bernoulli convolution for the Pisot root of x^3 - 2x^2 + x - 1.

Exact arithmetic in Q(beta), Parry digits and the finite-type admissibility
rule, the {0,1,2} block recoding, the vertex closure whose incidence matrices
are the three 7x7 generators of the language module, and exact cylinder
masses for the convolution mu and the auxiliary measure nu.  Weak-Gibbs
diagnostics are vectorized with numpy over all cylinders of a given depth.
"""

from __future__ import annotations

import math
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .exactmat import ExactMatrix
from .langw import GENERATORS

D = 7
START_BITS = 64
MAX_BITS = 1 << 14
VERTEX_CAP = 64

Coeff = Fraction | int


# cubic field ------------------------------------------------------------------


@contextmanager
def _iv_prec(bits: int):
    saved = mpmath.iv.prec
    mpmath.iv.prec = bits
    try:
        yield
    finally:
        mpmath.iv.prec = saved


@lru_cache(maxsize=None)
def _beta_interval(bits: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Rigorous enclosure of the real root at ``bits`` of working precision."""
    with mpmath.workprec(bits + 32):
        guess = mpmath.findroot(lambda x: x**3 - 2 * x**2 + x - 1, mpmath.mpf("1.7549"))
        eps = mpmath.ldexp(1, -bits)
        lo, hi = guess - eps, guess + eps
    with _iv_prec(bits + 32):
        f = lambda x: x**3 - 2 * x**2 + x - 1  # noqa: E731
        if not (f(mpmath.iv.mpf(lo)).b < 0 and f(mpmath.iv.mpf(hi)).a > 0):
            raise ArithmeticError("root enclosure failed")
    return lo, hi


@dataclass(frozen=True)
class CubicFieldElement:
    """a + b*beta + c*beta^2 with exact rational coefficients."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def coerce(cls, x: "CubicFieldElement | Coeff") -> "CubicFieldElement":
        return x if isinstance(x, CubicFieldElement) else cls(Fraction(x))

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    def __add__(self, other):
        o = self.coerce(other)
        return CubicFieldElement(self.a + o.a, self.b + o.b, self.c + o.c)

    __radd__ = __add__

    def __neg__(self):
        return CubicFieldElement(-self.a, -self.b, -self.c)

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        o = self.coerce(other)
        p = [Fraction(0)] * 5
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    p[i + j] += x * y
        # beta^4 = 3 beta^2 - beta + 2, beta^3 = 2 beta^2 - beta + 1
        a = p[0] + p[3] + 2 * p[4]
        b = p[1] - p[3] - p[4]
        c = p[2] + 2 * p[3] + 3 * p[4]
        return CubicFieldElement(a, b, c)

    __rmul__ = __mul__

    def _mul_matrix(self) -> list[list[Fraction]]:
        cols = [self, self * BETA, self * BETA * BETA]
        return [[cols[j].coeffs[i] for j in range(3)] for i in range(3)]

    def inverse(self) -> "CubicFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self._mul_matrix()
        # solve m x = e_0 by Gauss-Jordan over Q
        aug = [row[:] + [Fraction(int(i == 0))] for i, row in enumerate(m)]
        for col in range(3):
            piv = next(r for r in range(col, 3) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(3):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return CubicFieldElement(aug[0][3], aug[1][3], aug[2][3])

    def __truediv__(self, other):
        return self * self.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c)

    def sign(self) -> int:
        """Exact sign; the cubic is irreducible so only the zero element vanishes."""
        if self.is_zero():
            return 0
        bits = START_BITS
        while bits <= MAX_BITS:
            lo, hi = _beta_interval(bits)
            with _iv_prec(bits + 32):
                x = mpmath.iv.mpf([lo, hi])
                val = (mpmath.iv.mpf(self.a.numerator) / self.a.denominator
                       + mpmath.iv.mpf(self.b.numerator) / self.b.denominator * x
                       + mpmath.iv.mpf(self.c.numerator) / self.c.denominator * x * x)
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
            bits *= 2
        raise ArithmeticError("sign undecided")

    def _cmp(self, other) -> int:
        return (self - self.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def to_mpf(self, digits: int = 30) -> mpmath.mpf:
        with mpmath.workdps(digits + 10):
            x = mpmath.findroot(lambda t: t**3 - 2 * t**2 + t - 1, mpmath.mpf("1.7549"))
            a, b, c = (mpmath.mpf(q.numerator) / q.denominator for q in self.coeffs)
            return a + b * x + c * x * x

    def __float__(self) -> float:
        return float(self.to_mpf(20))

    def decimal(self, digits: int = 30) -> str:
        return mpmath.nstr(self.to_mpf(digits), digits)

    def to_json(self) -> dict:
        return {"coeffs": [str(x) for x in self.coeffs], "decimal": self.decimal(30)}

    def __repr__(self) -> str:
        return f"CubicFieldElement({self.a}, {self.b}, {self.c})"


ZERO = CubicFieldElement()
ONE = CubicFieldElement(1)
BETA = CubicFieldElement(0, 1)
BETA_INV = CubicFieldElement(1, -2, 1)  # (beta - 1)^2


def beta_power(n: int) -> CubicFieldElement:
    return BETA**n if n >= 0 else BETA_INV ** (-n)


def beta_value(precision: float = 1e-12) -> tuple[float, float]:
    """Float bisection enclosure of the real root."""
    f = lambda x: ((x - 2.0) * x + 1.0) * x - 1.0  # noqa: E731
    lo, hi = 1.5, 2.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def identity_residual() -> CubicFieldElement:
    """1/beta + 1/beta^2 + 1/beta^4 - 1, exactly zero."""
    return beta_power(-1) + beta_power(-2) + beta_power(-4) - 1


# digits ---------------------------------------------------------------------


BLOCKS = ("0", "10", "1100")


class IncompleteBlock(ValueError):
    """A binary word that stops inside a recoding block."""


def parry_digits(x: CubicFieldElement | Coeff, n: int) -> str:
    x = CubicFieldElement.coerce(x)
    if x < 0 or x >= 1:
        raise ValueError("x must lie in [0, 1)")
    digits = []
    s = ZERO
    for k in range(1, n + 1):
        t = beta_power(k) * (x - s)
        d = 1 if t >= 1 else 0
        digits.append(str(d))
        if d:
            s = s + beta_power(-k)
    return "".join(digits)


def partial_sum(word: str) -> CubicFieldElement:
    s = ZERO
    for k, ch in enumerate(word, 1):
        if ch == "1":
            s = s + beta_power(-k)
    return s


def is_admissible(word: str) -> bool:
    for k in range(len(word) - 1):
        if word[k] == "1" and word[k + 1] == "1" and "1" in word[k + 2:k + 4]:
            return False
    return True


def expand(xi: str) -> str:
    return "".join(BLOCKS[int(c)] for c in xi)


def recode(word: str) -> str:
    out = []
    i = 0
    n = len(word)
    while i < n:
        if word[i] == "0":
            out.append("0")
            i += 1
        elif word.startswith("10", i):
            out.append("1")
            i += 2
        elif word.startswith("1100", i):
            out.append("2")
            i += 4
        elif word[i:] in ("1", "11", "110"):
            raise IncompleteBlock(f"dangling block {word[i:]!r}")
        else:
            raise ValueError(f"not admissible at position {i}: {word!r}")
    return "".join(out)


@dataclass(frozen=True)
class BetaIntervalWord:
    xi: str

    @property
    def binary(self) -> str:
        return expand(self.xi)

    @property
    def left(self) -> CubicFieldElement:
        return partial_sum(self.binary)

    @property
    def length(self) -> CubicFieldElement:
        return beta_power(-len(self.binary))

    @property
    def right(self) -> CubicFieldElement:
        return self.left + self.length


# vertex closure ---------------------------------------------------------------

BM1 = BETA - 1
VERTICES = (
    ZERO,
    ONE,
    1 - BM1 * BM1,
    -(BM1 * BM1),
    BM1,
    BETA - BM1 * BM1,
    BETA * BM1,
)


def successors(gamma: CubicFieldElement, e: int) -> list[CubicFieldElement]:
    """Candidates gamma' for gamma ->e gamma', before interval pruning."""
    step = BETA * BM1
    if e == 0:
        base, weights = gamma * BETA, [ONE]
    elif e == 1:
        base, weights = gamma * beta_power(2) + BETA, [BETA, ONE]
    elif e == 2:
        base = gamma * beta_power(4) + beta_power(3) + beta_power(2)
        weights = [beta_power(3), beta_power(2), BETA, ONE]
    else:
        raise ValueError(e)
    out = []
    for bits in iproduct((0, 1), repeat=len(weights)):
        shift = sum((w for w, b in zip(weights, bits) if b), ZERO)
        out.append(base - shift * step)
    return out


def in_window(g: CubicFieldElement) -> bool:
    return g > -1 and g < BETA


@dataclass
class VertexClosure:
    vertices: list[CubicFieldElement]
    edges: list[tuple[int, int, int]]  # (i, e, j)
    parents: dict[int, tuple[int, int]] = field(default_factory=dict)

    def path_to(self, j: int) -> str:
        labels = []
        while j in self.parents:
            i, e = self.parents[j]
            labels.append(str(e))
            j = i
        return "".join(reversed(labels))


def vertex_closure(cap: int = VERTEX_CAP) -> VertexClosure:
    verts = [ZERO]
    index = {ZERO: 0}
    edges: set[tuple[int, int, int]] = set()
    parents: dict[int, tuple[int, int]] = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for e in range(3):
            for g in successors(verts[i], e):
                if not in_window(g):
                    continue
                if g not in index:
                    if len(verts) >= cap:
                        raise RuntimeError(f"vertex closure exceeds {cap} elements")
                    index[g] = len(verts)
                    verts.append(g)
                    parents[index[g]] = (i, e)
                    queue.append(index[g])
                edges.add((i, e, index[g]))
    return VertexClosure(verts, sorted(edges), parents)


def incidence_matrices(closure: VertexClosure | None = None) -> tuple[ExactMatrix, ...]:
    """Incidence matrices indexed by the fixed vertex order v_1..v_7."""
    closure = closure or vertex_closure()
    order = {v: k for k, v in enumerate(VERTICES)}
    if set(closure.vertices) != set(VERTICES):
        raise RuntimeError("vertex closure differs from the expected seven values")
    mats = []
    for e in range(3):
        rows = [[0] * D for _ in range(D)]
        for i, f, j in closure.edges:
            if f == e:
                rows[order[closure.vertices[i]]][order[closure.vertices[j]]] = 1
        mats.append(ExactMatrix.from_rows(rows))
    return tuple(mats)


def check_incidence() -> bool:
    mats = incidence_matrices()
    if mats != tuple(GENERATORS):
        raise RuntimeError("incidence matrices differ from the generators")
    return True


# measures -------------------------------------------------------------------

SCALES = (2, 4, 16)
M = tuple(GENERATORS[e] / SCALES[e] for e in range(3))
R = tuple(Fraction(x) for x in ("3/5", "2/5", "13/20", "1/5", "3/5", "3/10", "1/5"))
R_COL = ExactMatrix.column(R)
U_MASS = sum(R)


def unit_row(i: int) -> list[Fraction]:
    return [Fraction(int(k == i)) for k in range(D)]


def _row_times(row: Sequence[Fraction], m: ExactMatrix) -> list[Fraction]:
    rows = m.to_rows()
    return [sum((row[i] * rows[i][j] for i in range(D)), Fraction(0)) for j in range(D)]


def _mat_vec(m: ExactMatrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    rows = m.to_rows()
    return tuple(sum((r[j] * v[j] for j in range(D) if r[j]), Fraction(0)) for r in rows)


@lru_cache(maxsize=1 << 16)
def word_vector(xi: str) -> tuple[Fraction, ...]:
    """M(xi) R, built by prepending letters."""
    if not xi:
        return R
    return _mat_vec(M[int(xi[0])], word_vector(xi[1:]))


def fixed_vector_residual() -> tuple[Fraction, ...]:
    total = M[0] + M[1] + M[2]
    return tuple(x - r for x, r in zip(_mat_vec(total, R), R))


# mu(J_{xi}) = row(xi_1) . M(xi_2..xi_n) R
LEAD_ROWS = (
    tuple(unit_row(0)),
    tuple(_row_times(unit_row(1), M[0])),
    tuple(_row_times(_row_times(unit_row(1), M[1]), M[0])),
)


def mu_cylinder(xi: str) -> Fraction:
    if not xi:
        raise ValueError("empty word")
    row = LEAD_ROWS[int(xi[0])]
    return sum((a * b for a, b in zip(row, word_vector(xi[1:]))), Fraction(0))


def mu_via_vertices(xi: str) -> Fraction:
    """The same mass read off the vertex form mu((v_i + J)/beta) = (M(.)R)_i."""
    if not xi:
        raise ValueError("empty word")
    first, rest = xi[0], xi[1:]
    if first == "0":
        return word_vector(rest)[0]
    if first == "1":
        return word_vector("0" + rest)[1]
    return word_vector("10" + rest)[1]


def nu_cylinder(xi: str) -> Fraction:
    return sum(word_vector(xi), Fraction(0))


def all_words(n: int, alphabet: str = "012") -> Iterable[str]:
    return ("".join(t) for t in iproduct(alphabet, repeat=n))


def partition_check(depth: int = 8) -> bool:
    for n in range(1, depth):
        for w in all_words(n):
            if mu_cylinder(w) != sum(mu_cylinder(w + e) for e in "012"):
                return False
    return sum(mu_cylinder(e) for e in "012") == 1


def row_inequalities() -> bool:
    u = [Fraction(1)] * D
    checks = [
        (_row_times(u, M[0]), list(LEAD_ROWS[0])),
        (_row_times(u, M[1]), list(LEAD_ROWS[1])),
        (_row_times(u, M[2]), list(LEAD_ROWS[2])),
    ]
    return all(all(x >= y for x, y in zip(big, small)) for big, small in checks)


def scaling_identities(mmax: int = 20) -> bool:
    u1, u2, u3, u5 = unit_row(0), unit_row(1), unit_row(2), unit_row(4)
    if _row_times(u2, M[0]) != [x / 2 for x in u3]:
        return False
    row = list(u1)
    for m in range(1, mmax + 1):
        if row != [x / 2 ** (m - 1) for x in u1]:
            return False
        row = _row_times(row, M[0])
    row = list(LEAD_ROWS[2])
    for m in range(1, mmax + 1):
        if row != [x / 2 ** (4 * m - 1) for x in u5]:
            return False
        row = _row_times(row, M[2])
    return True


# float engine for sweeps -------------------------------------------------------

M_F = np.array([m.to_numpy() for m in M], dtype=float)
R_F = np.array([float(x) for x in R])
LEAD_F = np.array([[float(x) for x in row] for row in LEAD_ROWS])


def level_vectors(n: int) -> np.ndarray:
    """Rows M(v) R for all ternary v of length n, v read as a base-3 index."""
    x = R_F[None, :]
    for m in range(n):
        size = x.shape[0]
        out = np.empty((3 * size, D))
        for a in range(3):
            out[a * size:(a + 1) * size] = x @ M_F[a].T
        x = out
    return x


def mu_level(n: int, vecs: np.ndarray | None = None) -> np.ndarray:
    vecs = level_vectors(n - 1) if vecs is None else vecs
    return np.concatenate([vecs @ LEAD_F[a] for a in range(3)])


def nu_level(n: int) -> np.ndarray:
    return level_vectors(n).sum(axis=1)


# ratio bounds --------------------------------------------------------------------


@dataclass
class RatioReport:
    word: str
    ratio: Fraction
    case: str
    run: int
    bound: float
    ok: bool

    def to_json(self) -> dict:
        return {"word": self.word, "ratio": float(self.ratio), "case": self.case, "run": self.run,
                "bound": self.bound, "ok": self.ok}


@lru_cache(maxsize=None)
def functional_minima(depth: int = 10) -> dict[str, float]:
    """Depth-D minima of U_3.Pi, U_1.Pi and U_5.Pi over all normalized vectors."""
    out = {"F": math.inf, "G": math.inf, "H": math.inf}
    for n in range(0, depth + 1):
        v = level_vectors(n)
        p = v / v.sum(axis=1, keepdims=True)
        out["F"] = min(out["F"], float(p[:, 2].min()))
        out["G"] = min(out["G"], float(p[:, 0].min()))
        out["H"] = min(out["H"], float(p[:, 4].min()))
    return out


def ratio_diagnostics(xi: str, depth: int = 10) -> RatioReport:
    if not xi:
        raise ValueError("empty word")
    n = len(xi)
    ratio = nu_cylinder(xi) / mu_cylinder(xi)
    lead = xi[0]
    run = len(xi) - len(xi.lstrip(lead))
    mins = functional_minima(depth)
    if lead == "1":
        bound = 2 * float(M[1].norm1()) / mins["F"]
    elif lead == "0":
        bound = n * float(U_MASS / R[0]) if run == n else n / mins["G"]
    else:
        bound = 1.5 * n * float(U_MASS / R[4]) if run == n else 1.5 * n / mins["H"]
    return RatioReport(xi, ratio, lead, run, bound, float(ratio) <= bound * (1 + 1e-12))


# weak Gibbs diagnostics -----------------------------------------------------------


def psi_table(depth: int) -> np.ndarray:
    """Psi on depth-D windows: log U.M(w_1) Pi_{D-1}(w_2..w_D, R)."""
    v = level_vectors(depth - 1)
    p = v / v.sum(axis=1, keepdims=True)
    return np.concatenate([np.log(p @ M_F[a].sum(axis=0)) for a in range(3)])


@dataclass
class GibbsReport:
    depth: int
    tail: str
    levels: list[int]
    max_log_ratio: list[float]
    per_n: list[float]
    root_ratio: list[float]

    @property
    def decreasing(self) -> bool:
        vals = [v for n, v in zip(self.levels, self.per_n) if n >= 4]
        return all(b < a for a, b in zip(vals, vals[1:]))

    @property
    def final(self) -> float:
        return self.per_n[-1]

    def ok(self, tol: float = 0.2) -> bool:
        return self.decreasing and self.final < tol

    def to_json(self) -> dict:
        return {"depth": self.depth, "tail": self.tail, "levels": self.levels,
                "max_log_ratio": self.max_log_ratio, "per_n": self.per_n,
                "nu_mu_root": self.root_ratio, "decreasing": self.decreasing, "final": self.final}


def psi_and_weak_gibbs(N: int = 14, depth: int = 10, tail: str | None = None) -> GibbsReport:
    """Max over depth-n cylinders of |log mu / exp(sum Psi)| for n = 1..N.

    Psi at positions near the end of the word reads the fixed ``tail`` beyond it.
    """
    tail = tail if tail is not None else "1" * depth
    table = psi_table(depth)
    p3 = [3**k for k in range(max(N, depth) + 2)]
    tail_val = [int(tail[:k], 3) if k else 0 for k in range(depth + 1)]
    levels, mx, per, root = [], [], [], []
    vecs = R_F[None, :]
    for n in range(1, N + 1):
        mu = np.concatenate([vecs @ LEAD_F[a] for a in range(3)])
        nu = np.concatenate([(vecs @ M_F[a].T).sum(axis=1) for a in range(3)])
        idx = np.arange(p3[n], dtype=np.int64)
        s = np.zeros(p3[n])
        for k in range(n):
            left = n - k
            if left >= depth:
                win = (idx // p3[left - depth]) % p3[depth]
            else:
                win = (idx % p3[left]) * p3[depth - left] + tail_val[depth - left]
            s += table[win]
        lr = np.abs(np.log(mu) - s)
        levels.append(n)
        mx.append(float(lr.max()))
        per.append(float(lr.max()) / n)
        root.append(float(np.max(nu / mu) ** (1.0 / n)))
        # extend vectors to length n for the next level
        size = vecs.shape[0]
        nxt = np.empty((3 * size, D))
        for a in range(3):
            nxt[a * size:(a + 1) * size] = vecs @ M_F[a].T
        vecs = nxt
    return GibbsReport(depth, tail, levels, mx, per, root)


# summary ----------------------------------------------------------------------


@dataclass
class BetaVerification:
    vertices_ok: bool
    incidence_ok: bool
    fixed_vector_ok: bool
    partition_ok: bool
    identity_ok: bool
    inequalities_ok: bool
    scaling_ok: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())

    def to_json(self) -> dict:
        return dict(vars(self), ok=self.ok)


def verify_beta(depth: int = 8) -> BetaVerification:
    closure = vertex_closure()
    vertices_ok = len(closure.vertices) == 7 and set(closure.vertices) == set(VERTICES)
    try:
        incidence_ok = check_incidence()
    except RuntimeError:
        incidence_ok = False
    return BetaVerification(
        vertices_ok=vertices_ok,
        incidence_ok=incidence_ok,
        fixed_vector_ok=not any(fixed_vector_residual()),
        partition_ok=partition_check(depth),
        identity_ok=identity_residual().is_zero(),
        inequalities_ok=row_inequalities(),
        scaling_ok=scaling_identities(),
    )
