import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import gallery as g
from matprodlab.exactmat import ExactMatrix


def cf_nested(terms):
    """1/(t0 + 1/(t1 + ...)) evaluated from the inside out."""
    x = Fraction(0)
    for t in reversed(terms):
        x = 1 / (t + x)
    return x


def test_config_validation():
    with pytest.raises(ValueError):
        g.ExampleConfig("7")
    with pytest.raises(ValueError):
        g.ExampleConfig("1", n=0)
    assert g.ExampleConfig("5.2").n == 40


@pytest.mark.parametrize("ex", ["1", "2", "3", "4", "5", "6", "5.2"])
def test_every_example_runs(ex):
    out = g.run_example(g.ExampleConfig(ex, 20))
    assert isinstance(out, dict) and out


def test_block_triangular_profile():
    blk = ExactMatrix.from_rows([[2, 1, 0, 0], [1, 2, 0, 0], [1, 1, 1, 1], [1, 1, 1, 1]])
    rep = g.blocktri_check([blk] * 12, (2, 2))
    assert rep.ok
    # diagonal block growth 3^n over 2^n gives eps_n = (2/3)^n
    assert rep.eps[1:] == [Fraction(2, 3) ** n for n in range(1, 13)]
    assert rep.S == 1 + rep.Lambda * sum(rep.eps[:13])
    up = ExactMatrix.from_rows([[1, 1, 1, 1], [1, 1, 1, 1], [0, 0, 2, 1], [0, 0, 1, 2]])
    assert g.blocktri_check([up] * 6, (2, 2), upper=True).ok
    with pytest.raises(ValueError):
        g.blocktri_check([up], (2, 2))


@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 5), st.integers(1, 5)), min_size=1, max_size=12))
def test_triangular_column_direction(triples):
    a, b, d = zip(*triples)
    rep = g.tri2x2_limit(a, b, d, len(triples))
    assert rep.exact_match
    P = np.eye(2, dtype=object)
    for x, y, z in triples:
        P = P.dot(np.array([[Fraction(x), Fraction(y)], [Fraction(0), Fraction(z)]], dtype=object))
    col = P[:, 1] / sum(P[:, 1])
    assert tuple(col) == rep.direct


def test_triangular_series_limit():
    n = 40
    rep = g.tri2x2_limit([1] * n, [Fraction(1, 2 ** (i + 1)) for i in range(n)], [1] * n, n, s=1)
    assert rep.error < 1e-11
    div = g.tri2x2_limit([1] * n, [1] * n, [1] * n, n, s=math.inf)
    assert div.predicted == (1.0, 0.0) and div.error == pytest.approx(1 / (n + 1))


def test_two_limit_products():
    for k in range(1, 8):
        rep = g.example3_products(k)
        assert rep.match
    d = [g.example3_products(k).distances for k in (4, 8, 12)]
    assert d[0][0] > d[1][0] > d[2][0] and d[0][1] > d[1][1] > d[2][1]
    seq = g.example3_sequence(10)
    assert [i + 1 for i, m in enumerate(seq) if m == g.EX3_CUT] == [1, 3, 6, 10]


def test_positive_family_rate():
    A = ExactMatrix.from_rows([[2, 1], [1, 3]])
    B = ExactMatrix.from_rows([[1, 1], [2, 1]])
    rep = g.positive_family_limit([A, B], (1, 1), 30)
    assert rep.tail_ok
    # independent limit: Perron vector of the period product
    w, V = np.linalg.eig(np.array([[2, 1], [1, 3]]) @ np.array([[1, 1], [2, 1]]))
    v = np.abs(V[:, np.argmax(w.real)].real)
    assert np.allclose(rep.limit, v / v.sum(), atol=1e-12)
    with pytest.raises(ValueError):
        g.positive_family_limit([ExactMatrix.from_rows([[0, 1], [1, 1]])], (1, 1), 3)


@given(st.lists(st.sampled_from("01"), min_size=1, max_size=14))
def test_rademacher_series_matches_product(letters):
    omega = "".join(letters)
    for beta in (2.0, 1.5, (1 + math.sqrt(5)) / 2):
        # a zero tail leaves the series unchanged and shrinks the leftover mass like beta^-n
        rep = g.lyap_direction_rademacher(omega + "0" * 60, beta)
        assert rep.error < 1e-9


def test_rademacher_monotone_at_two():
    words = ["".join(t) for t in __import__("itertools").product("01", repeat=8)]
    vals = [g.lyap_direction_rademacher(w, 2.0).series for w in words]
    assert vals == sorted(vals)


def test_rademacher_order_breaks_below_two():
    beta = 1.5
    a = g.lyap_direction_rademacher("0" + "1" * 80, beta).series
    b = g.lyap_direction_rademacher("1" + "0" * 80, beta).series
    assert a == pytest.approx(1 / beta) and b == pytest.approx((beta - 1) / beta)
    assert a > b


@given(st.lists(st.integers(1, 6), min_size=1, max_size=8), st.sampled_from([None, "0", "1"]))
def test_continued_fraction_words(runs, tail):
    rep = g.lyap_direction_cf(runs, tail)
    assert rep.entries_match
    if tail is None:
        assert rep.p_cf == cf_nested((1,) + tuple(runs))
    else:
        assert rep.p_matrix == rep.p_cf


def test_continued_fraction_convergence():
    errs = [g.lyap_direction_cf([1] * n).error for n in (5, 10, 20)]
    assert errs[0] > errs[1] > errs[2]
    golden = (math.sqrt(5) - 1) / 2
    assert float(g.lyap_direction_cf([1] * 30).p_matrix) == pytest.approx(1 / (1 + golden), abs=1e-10)


@pytest.mark.parametrize("n", range(1, 60))
def test_phi_against_float_formula(n):
    s = math.sqrt(8 * n - 7)
    want = n - (1 + math.floor(s / 2 - 0.5) * math.floor(s / 2 + 0.5) / 2)
    assert g.phi(n) == want
    assert g.phi(n) == g.example6_split(n)[1]


def test_example6_closed_form_and_partition():
    rep = g.example6_run(30)
    assert rep.closed_form_match and rep.partition_ok and rep.enclosure_ok and rep.phi_ok
    assert all(row.norm3_identity for row in rep.rows)
    assert all(row.norm4 == 2 for row in rep.rows)
    assert rep.rows[-1].log11_norm1_over_n == pytest.approx(1, abs=0.1)
    assert np.allclose(rep.limits[0], [0.5, 0.5, 0, 0]) and np.allclose(rep.limits[1], [3 / 7, 4 / 7, 0, 0])
    P = ExactMatrix.identity(4)
    for m in g.example6_sequence(12):
        P = P @ m
    assert P == g.example6_closed_form(12)


def test_rotating_approximants():
    rep = g.rotating_rank_one(4)
    n_d = [c.distance for c in rep.checkpoints if c.kind == "n"]
    m_d = [c.distance for c in rep.checkpoints if c.kind == "m"]
    assert n_d == sorted(n_d, reverse=True) and m_d == sorted(m_d, reverse=True)
    assert n_d[-1] < 0.03 and m_d[-1] < 0.02
    # the two checkpoint families approach different rank-one limits
    assert np.abs(g.ROTATION_LIMIT_N - g.ROTATION_LIMIT_M).sum() == pytest.approx(2)
    assert g.rotation_checkpoints(1) == (5, 10)
    assert g.rotation_word(2) == "AB" + "CCD"
