import math
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import assume, given
import hypothesis.strategies as st

from matprodlab.exactmat import ExactMatrix
from matprodlab.projective import ExtendedLogValue, delta_coeff, hypothesis_H, proj_distance, tau

from conftest import nonneg_matrices, rational_vectors, rectangle_matrices


def cross_ratio_oracle(rows):
    """Max cross ratio over all index quadruples of a positive block, straight from the definition."""
    nz = [(i, j) for i, r in enumerate(rows) for j, v in enumerate(r) if v]
    I = sorted({i for i, _ in nz})
    J = sorted({j for _, j in nz})
    if len(nz) != len(I) * len(J):
        return None
    best = Fraction(1)
    for i, k in iproduct(I, I):
        for j, l in iproduct(J, J):
            best = max(best, Fraction(rows[i][j] * rows[k][l]) / (rows[k][j] * rows[i][l]))
    return best


def test_rectangle_detection():
    assert hypothesis_H(ExactMatrix.from_rows([[1, 2], [3, 4]])) == (frozenset({0, 1}), frozenset({0, 1}))
    assert hypothesis_H(ExactMatrix.identity(2)) is None
    assert hypothesis_H(ExactMatrix.from_rows([[0, 0, 0], [0, 2, 5]])) == (frozenset({1}), frozenset({1, 2}))
    with pytest.raises(ValueError):
        hypothesis_H(ExactMatrix.zeros(2, 2))


def test_delta_examples():
    assert delta_coeff(ExactMatrix.from_rows([[1, 2], [2, 4]])).ratio == 1
    assert delta_coeff(ExactMatrix.from_rows([[1, 2], [3, 4]])).ratio == Fraction(3, 2)
    assert delta_coeff(ExactMatrix.identity(2)).is_infinite


def test_tau_examples():
    assert tau(ExactMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert tau(ExactMatrix.identity(2)) == 1.0
    assert tau(ExactMatrix.from_rows([[1, 2], [3, 4]])) == pytest.approx(math.tanh(math.log(1.5) / 4), rel=1e-15)


def test_distance_examples():
    assert proj_distance([1, 2, 3], [1, 2, 3]).ratio == 1
    assert proj_distance([1, 1], [1, 2]).ratio == 2
    assert proj_distance([1, 0], [1, 1]).is_infinite
    with pytest.raises(ValueError):
        proj_distance([0, 0], [1, 1])


def test_json_forms():
    assert ExtendedLogValue(Fraction(3, 2)).to_json() == {"kind": "finite", "ratio": "3/2"}
    assert ExtendedLogValue.infinite().to_json() == {"kind": "infinite"}
    assert ExtendedLogValue.from_json({"kind": "finite", "ratio": "7/3"}).ratio == Fraction(7, 3)


@given(nonneg_matrices(max_dim=4, nonzero=True))
def test_delta_matches_definition(a):
    expected = cross_ratio_oracle(a.to_rows())
    got = delta_coeff(a)
    assert got.ratio == expected


@given(nonneg_matrices(max_dim=4, nonzero=True))
def test_tau_range(a):
    t = tau(a)
    assert 0 <= t <= 1
    assert (t == 1.0) == (hypothesis_H(a) is None) or (t == 1.0 and delta_coeff(a).value > 100)


@given(rectangle_matrices(), nonneg_matrices(rows=3, cols=3, nonzero=True))
def test_contraction(a, b):
    ab = a @ b
    assume(not ab.is_zero())
    assert delta_coeff(ab).value <= delta_coeff(a).value * tau(b) + 1e-12


@st.composite
def same_face_pairs(draw, dim=4):
    support = draw(st.sets(st.integers(0, dim - 1), min_size=1))
    x = draw(rational_vectors(dim, positive=True, support=support))
    y = draw(rational_vectors(dim, positive=True, support=support))
    z = draw(rational_vectors(dim, positive=True, support=support))
    return support, x, y, z


def _unit(v):
    s = sum(v)
    return [t / s for t in v]


@given(same_face_pairs())
def test_sandwich(data):
    support, x, y, _ = data
    x, y = _unit(x), _unit(y)
    d = proj_distance(x, y).value
    l1 = float(sum(abs(a - b) for a, b in zip(x, y)))
    low = float(min(min(x[i], y[i]) for i in support))
    assert l1 / len(x) <= d + 1e-12
    assert d <= l1 / low + 1e-12


@given(same_face_pairs())
def test_triangle_inequality(data):
    _, x, y, z = data
    assert proj_distance(x, z).value <= proj_distance(x, y).value + proj_distance(y, z).value + 1e-12


@given(same_face_pairs(), st.fractions(min_value=Fraction(1, 10), max_value=10), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_scale_invariance_and_matrix_form(data, a, b):
    _, x, y, _ = data
    d = proj_distance(x, y)
    assert proj_distance([a * t for t in x], [b * t for t in y]) == d
    pair = ExactMatrix.from_rows([[u, v] for u, v in zip(x, y)])
    assert delta_coeff(pair) == d


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_finite_iff_same_support(x, y):
    assume(any(x) and any(y))
    finite = not proj_distance(x, y).is_infinite
    assert finite == ([bool(t) for t in x] == [bool(t) for t in y])
