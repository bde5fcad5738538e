import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import condc, gallery, kamae, langw
from matprodlab.exactmat import ExactMatrix, support_pattern
from matprodlab.hclass import min_lambda
from matprodlab.projective import hypothesis_H

from conftest import h1_matrices, nonneg_matrices


def every_step(n):
    return condc.CutSequence((0, 0) + tuple(range(1, n + 1)))


def test_cut_sequence_validation():
    with pytest.raises(ValueError):
        condc.CutSequence((0, 1, 2))
    with pytest.raises(ValueError):
        condc.CutSequence((0, 0, 2, 2))
    cuts = condc.CutSequence((0, 0, 2, 5, 9))
    assert [cuts.k_of(n) for n in range(9)] == [0, 0, 1, 1, 1, 2, 2, 2, 2]


def test_q_block_examples():
    rng = random.Random(0)
    seq = [ExactMatrix.from_rows([[rng.randint(0, 3) for _ in range(3)] for _ in range(3)]) for _ in range(12)]
    cuts = condc.CutSequence((0, 0, 2, 5, 9, 13))
    assert condc.q_block(seq, cuts, 0) == ExactMatrix.identity(3)
    assert condc.q_block(seq, cuts, 1) == condc.p_product(seq, 1)
    for n in range(1, 12):
        k = cuts.k_of(n)
        assert condc.p_product(seq, cuts[k]) @ condc.q_block(seq, cuts, n) == condc.p_product(seq, n)
    for k in range(1, 5):
        blocks = [condc.q_block(seq, cuts, cuts[i]) for i in range(1, k + 1)]
        acc = ExactMatrix.identity(3)
        for b in blocks:
            acc = acc @ b
        assert acc == condc.p_product(seq, cuts[k])


def test_block_iteration_matches_direct_products():
    rng = random.Random(1)
    seq = [ExactMatrix.from_rows([[rng.randint(0, 2) for _ in range(3)] for _ in range(3)]) for _ in range(15)]
    cuts = condc.CutSequence((0, 0, 3, 4, 8, 11, 16))
    for stt in condc.iterate_blocks(seq, cuts, 15):
        assert stt.P == condc.p_product(seq, stt.n)
        assert stt.Q == condc.q_block(seq, cuts, stt.n)


def gamma_oracle(count):
    g = [1]
    for k in range(count - 1):
        g.append(g[-1] + k)
    return g


def test_reinforced_cuts_follow_the_recursion():
    s = (0,) + tuple(range(0, 40))
    out = condc.reinforce_cuts(condc.CutSequence(s)).cuts
    assert out == tuple(s[g] for g in gamma_oracle(len(out)))
    assert out[:6] == (0, 0, 1, 3, 6, 10)


def test_reinforced_blocks_contract_on_family_words():
    rng = random.Random(2)
    word = langw.random_regular_word(rng, 40)
    dec = langw.w_decompose(word)
    ends = [len(dec.head)]
    for w in dec.body:
        ends.append(ends[-1] + len(w.text))
    cuts = condc.CutSequence((0, 0) + tuple(ends[1:]))
    seq = [langw.GENERATORS[int(c)] for c in word]
    lam = max(min_lambda(condc.q_block(seq, cuts, cuts[k])) for k in range(2, len(cuts) - 1))
    strong = condc.reinforce_cuts(cuts)
    for k in range(2, len(strong) - 1):
        q = condc.q_block(seq, strong, strong[k])
        assert min_lambda(q) <= lam ** (k - 1)


def test_positive_constant_sequence_gives_witness():
    a = ExactMatrix.from_rows([[1, 2], [3, 1]])
    res = condc.check_condition_c([a] * 10, every_step(10), Fraction(0), Fraction(4), 9)
    assert isinstance(res, condc.ConditionCWitness)
    lam, Lam, h1 = condc.observed_witness([a] * 10, every_step(10), 9)
    assert (lam, Lam, h1) == (0, 4, True)


def test_example3_sequence_violates():
    seq = gallery.example3_sequence(60)
    lam, Lam, _ = condc.observed_witness(seq, every_step(60), 59)
    res = condc.check_condition_c(seq, every_step(60), Fraction(99, 100), Lam, 59)
    assert isinstance(res, condc.ConditionCViolation)
    assert res.n <= 59


def test_family_certificate_gives_witness():
    word = langw.random_regular_word(random.Random(5), 2 * langw.BLOCK_WORDS + 2)
    cert = langw.condition_c_certificate(word)
    assert cert.ok
    assert isinstance(cert.result, condc.ConditionCWitness)
    assert cert.result.lam < 1


def test_column_blocks_examples():
    pos = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert condc.column_blocks(pos) == [(frozenset({0, 1}), frozenset({0, 1}))]
    stairs = ExactMatrix.from_rows([[1, 2, 1, 0], [1, 1, 0, 0], [3, 0, 0, 0]])
    assert condc.column_blocks(stairs) == [
        (frozenset({0, 1, 2}), frozenset({0})),
        (frozenset({0, 1}), frozenset({1})),
        (frozenset({0}), frozenset({2})),
    ]
    # powers of the third generator have incomparable column supports {1,3} and {4}
    with pytest.raises(ValueError):
        condc.column_blocks(langw.word_matrix("222"))
    with pytest.raises(ValueError):
        condc.column_blocks(langw.word_matrix("010"))


def test_example6_block_structure():
    n = 12
    seq = gallery.example6_sequence(n)
    P = condc.p_product(seq, n)
    assert P == gallery.example6_closed_form(n)
    blocks = condc.column_blocks(P)
    total = ExactMatrix.zeros(4, 4)
    for h in range(1, len(blocks) + 1):
        piece = condc.h_diamond(P, blocks, h)
        assert hypothesis_H(piece) is not None
        total = total + piece
    assert total == P


@given(h1_matrices(top=5))
def test_partition_covers_nonzeros(m):
    if m.is_zero():
        return
    blocks = condc.column_blocks(m)
    cells = set()
    for rows, cols in blocks:
        part = {(i, j) for i in rows for j in cols}
        assert not part & cells
        cells |= part
    assert cells == {(i, j) for i in range(m.rows) for j in range(m.cols) if m[i, j]}


@given(h1_matrices(top=5), st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_h_index_support_identity(m, x):
    if m.is_zero():
        return
    blocks = condc.column_blocks(m)
    X = ExactMatrix.column(x)
    if (m @ X).is_zero():
        with pytest.raises(ValueError):
            condc.h_index(X, blocks)
        return
    h = condc.h_index(X, blocks)
    assert support_pattern(m @ X).indices == blocks[h - 1][0]


def test_h_index_examples():
    m = ExactMatrix.from_rows([[1, 2, 1, 0], [1, 1, 0, 0], [3, 0, 0, 0]])
    blocks = condc.column_blocks(m)
    assert condc.h_index([1] * 4, blocks) == 1
    for h, (_, cols) in enumerate(blocks, start=1):
        assert condc.h_index(ExactMatrix.basis(4, min(cols)), blocks) == h
    with pytest.raises(IndexError):
        condc.h_diamond(m, blocks, len(blocks) + 1)


def test_label_compression():
    assert condc.xi_compress((1, 1, 1, 2, 3, 3, 3, 1, 1)) == (1, 2, 3, 1)
    assert condc.xi_compress(()) == ()


def test_rate_constants():
    r, C = condc.rate_constants(Fraction(1, 2), Fraction(3))
    assert r == 0.75 and C == 108


def test_example6_dominance():
    seq = gallery.example6_sequence(40)
    cuts = every_step(40)
    lam, Lam, _ = condc.observed_witness(seq, cuts, 39)
    wit = condc.check_condition_c(seq, cuts, lam, Lam, 39)
    rep = condc.dominance_diagnostics(seq, wit, 39, reinforce=False, start=2)
    assert rep.H == 3
    expected = [(0.5, 0.5, 0, 0), (3 / 7, 4 / 7, 0, 0), (0.5, 0.5, 0, 0)]
    for got, want in zip(rep.limits, expected):
        assert np.allclose(got, want, atol=1e-6)
    # columns within a group are trapped away from the boundary of their face
    for row in rep.csv_rows():
        assert row[2] >= 1
    assert rep.steps[-1].norm_ratios and all(r < 0.05 for r in rep.steps[-1].norm_ratios)


def test_singular_gap_examples():
    assert condc.singular_gap([[1, 2], [2, 4]])[2] == pytest.approx(0, abs=1e-12)
    assert condc.singular_gap([[1, 0], [0, 1]])[2] == pytest.approx(1)
    assert condc.singular_gap([[0, 0], [0, 0]]) == (0.0, 0.0, 0.0)


def test_singular_gap_along_binary_digit_word():
    rng = random.Random(1)
    P = ExactMatrix.identity(3)
    ratios = []
    for _ in range(30):
        P = P @ kamae.FAMILY[rng.randint(0, 1)]
        ratios.append(condc.singular_gap(P)[2])
    assert ratios[-1] < 1e-3
    assert all(b <= a + 1e-12 for a, b in zip(ratios, ratios[1:]))


@given(st.lists(st.lists(st.floats(0, 10), min_size=3, max_size=3), min_size=3, max_size=3))
def test_singular_values_match_eigenvalues(rows):
    a = np.array(rows)
    s1, s2, _ = condc.singular_gap(rows)
    eig = np.sort(np.linalg.eigvalsh(a.T @ a))[::-1]
    scale = max(1.0, eig[0])
    assert s1 ** 2 == pytest.approx(eig[0], abs=1e-9 * scale)
    assert s2 ** 2 == pytest.approx(eig[1], abs=1e-9 * scale)


@given(st.lists(st.lists(st.floats(-5, 5), min_size=5, max_size=5), min_size=2, max_size=7))
def test_jacobi_svd_matches_numpy(rows):
    from matprodlab.svd import singular_values

    got = singular_values(rows)
    want = np.linalg.svd(np.array(rows), compute_uv=False)
    assert np.allclose(got[: len(want)], want, atol=1e-9)


def test_common_left_eigenvector():
    assert condc.common_left_eigvec_check([np.eye(3), 2 * np.eye(3)])
    assert not condc.common_left_eigvec_check([gallery.ROTATION["A"], gallery.ROTATION["B"]])
    assert not condc.common_left_eigvec_check(list(langw.GENERATORS))
    shared = np.array([[2.0, 1.0], [0.0, 3.0]]), np.array([[5.0, 4.0], [0.0, 1.0]])
    # both transposes have (0, 1) as a left eigenvector
    assert condc.common_left_eigvec_check([m.T for m in shared])
