from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import kamae, langw
from matprodlab.exactmat import (
    ExactMatrix,
    Order,
    SupportPattern,
    col_pattern_count,
    compare_patterns,
    format_rational,
    norm1,
    product,
    support_pattern,
)

from conftest import nonneg_matrices

# entries of the 7x7 product for the word 11111 as printed
PRINTED_11111 = [
    [3, 0, 3, 2, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
    [1, 0, 3, 3, 1, 0, 0],
    [1, 0, 1, 3, 2, 0, 0],
    [2, 0, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
]


def test_identity_and_zero_products():
    a = ExactMatrix.from_rows([[1, 2], ["1/3", 0]])
    assert product(ExactMatrix.identity(2), a) == a
    assert (a @ ExactMatrix.zeros(2, 2)).is_zero()


def test_binary_digit_zero_matrix_is_idempotent():
    assert kamae.A0 @ kamae.A0 == kamae.A0


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        ExactMatrix.identity(2) @ ExactMatrix.identity(3)


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        ExactMatrix.from_rows([[1, -1]])


def test_canonical_form_makes_equality_structural():
    a = ExactMatrix.from_rows([["2/4", "3/6"]])
    b = ExactMatrix.from_rows([["1/2", "1/2"]])
    assert a == b and hash(a) == hash(b)


def test_support_pattern_examples():
    assert support_pattern([0, 3, 0]).mask == (0, 1, 0)
    assert support_pattern([0, 0, 0]).mask == (0, 0, 0)
    # printed column 5 of the k-th power of the third generator is (k, 0, k-1, k, 1, 0, 0)
    assert support_pattern(langw.word_matrix("2").col(4)).mask == (1, 0, 0, 1, 1, 0, 0)
    for k in range(2, 8):
        assert langw.word_matrix("2" * k).col(4) == ExactMatrix.column([k, 0, k - 1, k, 1, 0, 0])
        assert support_pattern(langw.word_matrix("2" * k).col(4)).mask == (1, 0, 1, 1, 1, 0, 0)


def test_compare_patterns():
    p = SupportPattern((1, 0, 0))
    assert compare_patterns(p, SupportPattern((1, 1, 0))) is Order.LE
    assert compare_patterns(SupportPattern((1, 1, 0)), p) is Order.GE
    assert compare_patterns(p, p) is Order.EQ
    assert compare_patterns(SupportPattern((1, 0, 1)), SupportPattern((0, 1, 1))) is Order.INCOMPARABLE
    with pytest.raises(ValueError):
        compare_patterns(p, SupportPattern((1, 0)))


def test_col_pattern_count():
    assert col_pattern_count(ExactMatrix.identity(5)) == 5
    assert col_pattern_count(ExactMatrix.zeros(3, 3)) == 0
    printed = ExactMatrix.from_rows(PRINTED_11111)
    assert langw.word_matrix("11111") == printed
    supports = {tuple(i for i in range(7) if PRINTED_11111[i][j]) for j in range(7)} - {()}
    assert col_pattern_count(printed) == len(supports) == 1


def test_norm1():
    assert norm1(ExactMatrix.column(["1/2", "1/2"])) == 1
    assert norm1(ExactMatrix.zeros(2, 3)) == 0
    # entry sum of the appendix table for 000100, added by hand from its rows
    rows = langw.APPENDIX_TABLES["000100"].split("/")
    assert norm1(langw.word_matrix("000100")) == sum(int(c) for r in rows for c in r) == 19


def test_json_round_trip():
    a = ExactMatrix.from_rows([["1/3", 2], [0, "7/5"]])
    obj = a.to_json()
    assert obj == {"rows": 2, "cols": 2, "data": [["1/3", "2"], ["0", "7/5"]]}
    assert ExactMatrix.from_json(obj) == a
    assert format_rational(Fraction(6, 3)) == "2"


@given(nonneg_matrices(rows=3, cols=3), nonneg_matrices(rows=3, cols=3))
def test_product_matches_numpy(a, b):
    assert np.allclose((a @ b).to_numpy(), a.to_numpy() @ b.to_numpy())


@given(nonneg_matrices(rows=3, cols=3), nonneg_matrices(rows=3, cols=2))
def test_norm_is_submultiplicative(a, b):
    assert norm1(a @ b) <= norm1(a) * norm1(b)


@given(nonneg_matrices(rows=4, cols=4), st.lists(st.integers(0, 5), min_size=4, max_size=4),
       st.lists(st.integers(1, 5), min_size=4, max_size=4))
def test_image_support_depends_only_on_support(a, x, scale):
    y = [xi * s for xi, s in zip(x, scale)]
    assert support_pattern(a @ ExactMatrix.column(x)) == support_pattern(a @ ExactMatrix.column(y))


@given(nonneg_matrices(rows=3, cols=3), st.integers(0, 4))
def test_power_matches_repeated_product(a, n):
    acc = ExactMatrix.identity(3)
    for _ in range(n):
        acc = acc @ a
    assert a ** n == acc
