"""Acceptance criteria as runnable checks with quick and full parameter profiles."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import betaconv, condc, gallery, kamae, langw
from .exactmat import ExactMatrix
from .hclass import compose_h_bounds, h1_closure_check, in_H1, left_multiplication_check, min_Lambda, min_lambda
from .projective import delta_coeff, hypothesis_H, proj_distance, tau


@dataclass(frozen=True)
class Profile:
    name: str
    kmax: int
    depth: int
    samples: int
    metric_samples: int
    words: int
    gibbs_n: int
    example6_n: int


PROFILES = {
    "quick": Profile("quick", kmax=8, depth=8, samples=100, metric_samples=1000, words=3, gibbs_n=12, example6_n=30),
    "full": Profile("full", kmax=64, depth=10, samples=1000, metric_samples=10_000, words=20, gibbs_n=14, example6_n=60),
}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float
    witness: dict = field(default_factory=dict)

    @property
    def in_budget(self) -> bool:
        return self.seconds <= self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name} ({self.seconds:.2f} s, budget {self.budget:g} s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": self.seconds,
            "budget": self.budget,
            "witness": self.witness,
        }


def _appendix(p: Profile) -> tuple[bool, dict]:
    rep = langw.verify_appendix()
    return rep.ok, rep.to_json()


def _family_table(p: Profile) -> tuple[bool, dict]:
    table = langw.verify_family_table(p.kmax)
    bad = [
        {"family": r.family, "max_Lambda": str(r.max_Lambda), "bound": r.bound, "max_lambda": str(r.max_lambda), "k": r.lambda_k}
        for r in table.rows
        if r.max_Lambda > r.bound or r.max_lambda > 5
    ]
    return not bad, {"kmax": p.kmax, "violations": bad}


def _doubling(p: Profile) -> tuple[bool, dict]:
    ex = langw.doubling_exhaustion(16)
    passed = ex.long_paths_double(11) and ex.extremal_are_longest
    return passed, ex.to_json()


def _contraction(p: Profile) -> tuple[bool, dict]:
    rep = langw.verify_contraction(samples=p.samples, seed=0)
    return rep.ok, rep.to_json()


def _beta_machinery(p: Profile) -> tuple[bool, dict]:
    rep = betaconv.verify_beta(8)
    return rep.ok, rep.to_json()


def _limits(p: Profile) -> tuple[bool, dict]:
    scan = langw.limit_support_scan(depth=10, gap_depths=(), limit_n=40)
    passed = scan.limits_within(1e-6) and scan.support_ok
    return passed, scan.to_json()


def _weak_gibbs(p: Profile) -> tuple[bool, dict]:
    gibbs = betaconv.psi_and_weak_gibbs(p.gibbs_n, p.depth)
    pot = kamae.potential_convergence(n=40, amax=10)
    beta_ok = gibbs.decreasing and (gibbs.final < 0.2 if p.gibbs_n >= 14 else True)
    return beta_ok and pot.ok(1e-8), {"beta": gibbs.to_json(), "kamae": pot.to_json()}


def _example6(p: Profile) -> tuple[bool, dict]:
    rep = gallery.example6_run(p.example6_n)
    return rep.ok, rep.to_json()


def random_nonnegative(rng: random.Random, rows: int, cols: int, zero_prob: float = 0.3, top: int = 6) -> ExactMatrix:
    return ExactMatrix.from_rows(
        [[0 if rng.random() < zero_prob else rng.randint(1, top) for _ in range(cols)] for _ in range(rows)]
    )


@dataclass
class MetricSuite:
    samples: int
    seed: int
    failures: dict[str, list[str]] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    def record(self, key: str, ok: bool, detail: Callable[[], str]) -> None:
        self.counts[key] = self.counts.get(key, 0) + 1
        if not ok:
            self.failures.setdefault(key, [])
            if len(self.failures[key]) < 5:
                self.failures[key].append(detail())

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"samples": self.samples, "seed": self.seed, "checked": self.counts, "failures": self.failures}


def metric_suite(samples: int = 10_000, seed: int = 0) -> MetricSuite:
    """Contraction, sandwich, composition and support-propagation properties on random matrices."""
    rng = random.Random(seed)
    suite = MetricSuite(samples, seed)
    for _ in range(samples):
        d = rng.randint(2, 4)
        a = random_nonnegative(rng, d, d)
        b = random_nonnegative(rng, d, d)
        c = random_nonnegative(rng, d, d)
        ab = a @ b
        # contraction of the projective diameter
        if not a.is_zero() and hypothesis_H(a) is not None and not ab.is_zero():
            lhs = delta_coeff(ab).value
            rhs = delta_coeff(a).value * tau(b)
            suite.record("contraction", lhs <= rhs + 1e-12, lambda: f"{a!r} {b!r}")
        # sandwich on a common face
        support = [i for i in range(d) if rng.random() < 0.7] or [0]
        x = [Fraction(rng.randint(1, 9)) if i in support else Fraction(0) for i in range(d)]
        y = [Fraction(rng.randint(1, 9)) if i in support else Fraction(0) for i in range(d)]
        sx, sy = sum(x), sum(y)
        x, y = [v / sx for v in x], [v / sy for v in y]
        dist = proj_distance(x, y).value
        l1 = float(sum(abs(u - v) for u, v in zip(x, y)))
        low = min(min(x[i], y[i]) for i in support)
        suite.record("sandwich", l1 / d <= dist * (1 + 1e-12) + 1e-15 and dist <= l1 / float(low) * (1 + 1e-12) + 1e-15,
                     lambda: f"{x} {y}")
        # composition bounds, exact
        if not a.is_zero() and not b.is_zero() and not ab.is_zero():
            La, la, Lb, lb = min_Lambda(a), min_lambda(a), min_Lambda(b), min_lambda(b)
            L, lam = compose_h_bounds((La, la), (Lb, lb))
            suite.record("composition", min_Lambda(ab) <= L and min_lambda(ab) <= lam, lambda: f"{a!r} {b!r}")
        # support propagation under left multiplication
        suite.record("left_multiplication", left_multiplication_check(b, a).ok, lambda: f"{b!r} {a!r}")
        if in_H1(a):
            suite.record("h1_closure", h1_closure_check(b, a, c).ok, lambda: f"{b!r} {a!r} {c!r}")
    return suite


def _metric(p: Profile) -> tuple[bool, dict]:
    suite = metric_suite(p.metric_samples, seed=0)
    return suite.ok, suite.to_json()


def dominance_bound_check(words: int, seed: int = 0, vectors: int = 5, w_words: int = 4 * langw.BLOCK_WORDS + 3) -> dict:
    """Limit-vector bound along seeded condition-(C) words of the digit family."""
    rng = random.Random(seed)
    out = {"words": [], "violations": [], "checked": 0}
    for _ in range(words):
        word = langw.random_regular_word(rng, w_words)
        cert = langw.condition_c_certificate(word)
        if not cert.ok:
            out["violations"].append({"word_len": len(word), "detail": "certificate failed"})
            continue
        seq = [langw.GENERATORS[int(ch)] for ch in word]
        xs = [ExactMatrix.column([rng.randint(1, 9) for _ in range(langw.D)]) for _ in range(vectors)]
        rep = condc.dominance_diagnostics(seq, cert.result, None, xs)
        bad = [(xi, b.n) for xi, bs in rep.bounds.items() for b in bs if not b.holds]
        out["checked"] += sum(len(bs) for bs in rep.bounds.values())
        out["words"].append({"length": len(word), "H": rep.H, "horizon": rep.horizon, "r": rep.r, "C": rep.C})
        out["violations"].extend({"word_len": len(word), "x": xi, "n": n} for xi, n in bad[:3])
    return out


def _dominance(p: Profile) -> tuple[bool, dict]:
    res = dominance_bound_check(p.words, seed=0)
    return not res["violations"] and res["checked"] > 0, res


CRITERIA: list[tuple[int, str, Callable[[Profile], tuple[bool, dict]], float]] = [
    (1, "appendix tables reproduced with key properties", _appendix, 1),
    (2, "family table bounds for k <= kmax", _family_table, 5),
    (3, "doubling exhaustion and extremal offenders", _doubling, 10),
    (4, "contraction of 130-word concatenations", _contraction, 60),
    (5, "beta machinery exact identities", _beta_machinery, 30),
    (6, "power limits within 1e-6 and support scan", _limits, 30),
    (7, "weak Gibbs trend and Kamae potential convergence", _weak_gibbs, 300),
    (8, "closed-form product, partition and enclosures", _example6, 5),
    (9, "metric and class property suite", _metric, 60),
    (10, "limit-vector bound along condition-(C) words", _dominance, 120),
]


def run_criterion(number: int, profile: str | Profile = "full") -> CriterionResult:
    p = PROFILES[profile] if isinstance(profile, str) else profile
    for num, name, fn, budget in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            passed, witness = fn(p)
            return CriterionResult(num, name, bool(passed), time.perf_counter() - t0, budget, witness)
    raise KeyError(f"no criterion {number}")


def verify_all(profile: str = "quick", only: list[int] | None = None) -> list[CriterionResult]:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    numbers = only or [c[0] for c in CRITERIA]
    return [run_criterion(n, profile) for n in numbers]
