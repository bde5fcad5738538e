from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from matprodlab.exactmat import ExactMatrix

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@st.composite
def nonneg_matrices(draw, rows=None, cols=None, max_dim=4, top=6, zero_prob=0.3, nonzero=False):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    entry = st.one_of(st.just(0), st.integers(1, top)) if zero_prob else st.integers(1, top)
    data = draw(st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r))
    m = ExactMatrix.from_rows(data)
    if nonzero and m.is_zero():
        data[0][0] = 1
        m = ExactMatrix.from_rows(data)
    return m


@st.composite
def rational_vectors(draw, dim, positive=False, support=None):
    lo = 1 if positive else 0
    vals = draw(st.lists(st.fractions(min_value=lo, max_value=20, max_denominator=12), min_size=dim, max_size=dim))
    if support is not None:
        vals = [v if i in support else Fraction(0) for i, v in enumerate(vals)]
    return vals


@st.composite
def h1_matrices(draw, d=4, top=1):
    """Column supports drawn as initial segments of one row order, so they form a chain."""
    order = draw(st.permutations(range(d)))
    cols = []
    for _ in range(d):
        size = draw(st.integers(0, d))
        rows = set(order[:size])
        cols.append([draw(st.integers(1, top)) if i in rows else 0 for i in range(d)])
    return ExactMatrix.from_rows([[cols[j][i] for j in range(d)] for i in range(d)])


@st.composite
def rectangle_matrices(draw, d=3, top=6):
    """Nonzero pattern is a full rectangle I x J."""
    I = draw(st.sets(st.integers(0, d - 1), min_size=1))
    J = draw(st.sets(st.integers(0, d - 1), min_size=1))
    return ExactMatrix.from_rows([[draw(st.integers(1, top)) if i in I and j in J else 0 for j in range(d)] for i in range(d)])
