import math
from fractions import Fraction
from itertools import product as iproduct

import mpmath
import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import betaconv as bc
from matprodlab import langw

BETA = float(bc.BETA)


def ternary(n):
    return ["".join(t) for t in iproduct("012", repeat=n)]


@pytest.fixture(scope="module")
def coin_sums():
    """All partial sums (beta-1) sum_{n<=N} e_n beta^-n over 2^N fair coin sequences, sorted."""
    N = 20
    w = (BETA - 1) * BETA ** -np.arange(1, N + 1)
    x = np.zeros(1)
    for k in range(N):
        x = np.concatenate([x, x + w[k]])
    x.sort()
    return N, x


def enclosure(coin_sums, left, right):
    """Lower and upper bounds on P(X in [left, right)) given the tail lies in [0, beta^-N]."""
    N, x = coin_sums
    tail = BETA ** -N
    inside = np.searchsorted(x, right - tail, "left") - np.searchsorted(x, left, "left")
    touching = np.searchsorted(x, right, "left") - np.searchsorted(x, left - tail, "right")
    return max(inside, 0) / 2 ** N, touching / 2 ** N


def test_beta_value():
    lo, hi = bc.beta_value(1e-3)
    root = mpmath.findroot(lambda x: x ** 3 - 2 * x ** 2 + x - 1, 1.75)
    assert lo <= root <= hi and hi - lo <= 1e-3
    lo, hi = bc.beta_value(1e-16)
    mid = (lo + hi) / 2
    assert abs(mid ** 3 - 2 * mid ** 2 + mid - 1) < 1e-15
    assert round(mid, 3) == 1.755


def test_field_identities():
    one = bc.beta_power(-1) + bc.beta_power(-2) + bc.beta_power(-4)
    assert one == bc.ONE
    assert bc.identity_residual().is_zero()
    assert bc.BETA * bc.BETA_INV == bc.ONE
    assert float(bc.BETA ** 3) == pytest.approx(float(2 * bc.BETA ** 2 - bc.BETA + 1))


@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.fractions(min_value=-5, max_value=5, max_denominator=9),
       st.fractions(min_value=-5, max_value=5, max_denominator=9))
def test_field_signs_match_high_precision(a, b, c):
    x = bc.CubicFieldElement(a, b, c)
    mpmath.mp.dps = 60
    beta = mpmath.findroot(lambda t: t ** 3 - 2 * t ** 2 + t - 1, mpmath.mpf("1.75"))
    val = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * beta + \
        mpmath.mpf(c.numerator) / c.denominator * beta ** 2
    want = 0 if (a, b, c) == (0, 0, 0) else (1 if val > 0 else -1)
    assert x.sign() == want


def test_parry_digits():
    assert bc.parry_digits(bc.ZERO, 8) == "0" * 8
    assert bc.parry_digits(bc.BETA_INV, 8) == "1" + "0" * 7
    digits = bc.parry_digits(Fraction(1, 2), 12)
    # greedy expansion in floats at 60 digits as an independent evaluation
    mpmath.mp.dps = 60
    beta = mpmath.findroot(lambda t: t ** 3 - 2 * t ** 2 + t - 1, mpmath.mpf("1.75"))
    x, s, ref = mpmath.mpf(1) / 2, mpmath.mpf(0), []
    for k in range(1, 13):
        d = 1 if beta ** k * (x - s) >= 1 else 0
        ref.append(str(d))
        s += d * beta ** -k
    assert digits == "".join(ref)
    s = bc.partial_sum(digits)
    assert s <= Fraction(1, 2) < s + bc.beta_power(-12)
    with pytest.raises(ValueError):
        bc.parry_digits(bc.ONE, 3)


def test_admissibility():
    assert bc.is_admissible("110010")
    assert not bc.is_admissible("1101")
    for n in range(1, 8):
        for xi in ternary(n):
            assert bc.is_admissible(bc.expand(xi))


def test_recoding():
    assert bc.recode("0101100") == "012"
    assert bc.recode("1100") == "2"
    for n in range(0, 8):
        for xi in ternary(n):
            assert bc.recode(bc.expand(xi)) == xi
    for bad in ("1", "11", "110"):
        with pytest.raises(bc.IncompleteBlock):
            bc.recode("0" + bad)


def test_interval_geometry():
    for n in range(1, 5):
        for w in ternary(n - 1):
            kids = [bc.BetaIntervalWord(w + e) for e in "012"]
            parent = bc.BetaIntervalWord(w) if w else None
            for a, b in zip(kids, kids[1:]):
                assert a.right == b.left
            if parent is not None:
                assert kids[0].left == parent.left and kids[2].right == parent.right
            for k in kids:
                assert k.length == bc.beta_power(-len(k.binary))


def test_vertex_closure():
    cl = bc.vertex_closure()
    assert len(cl.vertices) == 7
    assert set(cl.vertices) == set(bc.VERTICES)
    j = cl.vertices.index(bc.BETA - 1)
    path = cl.path_to(j)
    assert path
    # follow the labelled path from 0 through successor sets restricted to the window
    current = {bc.ZERO}
    for e in path:
        current = {v for g in current for v in bc.successors(g, int(e)) if bc.in_window(v)}
    assert bc.BETA - 1 in current
    for i, e, k in cl.edges:
        assert cl.vertices[k] in bc.successors(cl.vertices[i], e)
    for v in cl.vertices:
        assert -1 < v < bc.BETA
    json_v = cl.vertices[2].to_json()
    assert len(json_v["decimal"].replace(".", "").lstrip("0-")) >= 29


def test_incidence_matrices_match_generators():
    assert bc.incidence_matrices() == tuple(langw.GENERATORS)
    assert bc.check_incidence()


def test_fixed_vector_and_masses():
    assert not any(bc.fixed_vector_residual())
    assert bc.R[0] + bc.R[1] == 1
    assert bc.U_MASS == Fraction(59, 20)
    assert sum(bc.mu_cylinder(e) for e in "012") == 1


def test_mu_partition_to_depth_seven():
    for n in range(0, 7):
        for w in ternary(n):
            parent = bc.mu_cylinder(w) if w else Fraction(1)
            assert sum(bc.mu_cylinder(w + e) for e in "012") == parent


def test_mu_case_split_matches_vertex_form():
    for n in range(1, 6):
        for w in ternary(n):
            assert bc.mu_cylinder(w) == bc.mu_via_vertices(w)


def test_mu_against_coin_enumeration(coin_sums):
    for n in range(1, 4):
        for xi in ternary(n):
            J = bc.BetaIntervalWord(xi)
            lo, hi = enclosure(coin_sums, float(J.left), float(J.right))
            mu = float(bc.mu_cylinder(xi))
            assert lo - 1e-12 <= mu <= hi + 1e-12


def test_nu_examples():
    assert bc.nu_cylinder("") == Fraction(59, 20)
    for n in range(1, 7):
        for w in ternary(n):
            assert bc.nu_cylinder(w) >= bc.mu_cylinder(w)


def test_row_and_scaling_identities():
    assert bc.row_inequalities()
    assert bc.scaling_identities(20)


def test_ratio_bounds():
    for xi in ("1", "10", "1202", "0" * 6, "2" * 6, "0012", "2210", "02"):
        rep = bc.ratio_diagnostics(xi, 8)
        assert rep.ok, rep.to_json()
    assert bc.ratio_diagnostics("000", 8).bound == pytest.approx(3 * float(bc.U_MASS / bc.R[0]))
    with pytest.raises(ValueError):
        bc.ratio_diagnostics("")


def test_weak_gibbs_trend():
    rep = bc.psi_and_weak_gibbs(10, 8)
    assert rep.decreasing
    roots = rep.root_ratio
    assert abs(roots[-1] - 1) < abs(roots[2] - 1)


def test_verify_report():
    rep = bc.verify_beta(6)
    assert rep.ok
    assert set(rep.to_json()) >= {"vertices_ok", "incidence_ok", "partition_ok"}
