import math
import random
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import kamae, langw
from matprodlab import repmeasure as rm
from matprodlab.exactmat import ExactMatrix

KAMAE = kamae.REPRESENTATION


def words(alphabet, n):
    return ["".join(t) for t in iproduct(alphabet, repeat=n)]


def test_representation_validation():
    with pytest.raises(ValueError):
        rm.LinearRepresentation((ExactMatrix.from_rows([["1/2"]]),), (Fraction(1),), (Fraction(1),))
    with pytest.raises(ValueError):
        rm.LinearRepresentation((ExactMatrix.identity(1),), (Fraction(1),), (Fraction(2),))
    again = rm.LinearRepresentation.from_json(KAMAE.to_json())
    assert again.matrices == KAMAE.matrices and again.R == KAMAE.R


def test_empty_cylinder_has_mass_one():
    assert rm.measure_cylinder(KAMAE, "") == 1
    assert rm.measure_cylinder(rm.iid_representation([Fraction(1, 4), Fraction(3, 4)]), "") == 1


def test_additivity_to_depth_ten():
    for n in range(0, 10):
        for w in words("01", n):
            assert rm.measure_cylinder(KAMAE, w + "0") + rm.measure_cylinder(KAMAE, w + "1") == rm.measure_cylinder(KAMAE, w)


def test_binary_digit_measure_is_entry_sum():
    for n in range(1, 8):
        for w in words("01", n):
            assert rm.measure_cylinder(KAMAE, w) == kamae.kamae_matrix(w).norm1() / 3 ** (n + 1)
            assert rm.measure_cylinder(KAMAE, w) == kamae.kamae_measure(w)


def test_shift_cocycle():
    for n in range(1, 9):
        for w in words("01", n):
            assert rm.cocycle_check(KAMAE, w)


def test_pi_n_examples():
    assert rm.pi_n(kamae.FAMILY, "", kamae.HALF_QUARTER) == kamae.HALF_QUARTER
    for a in range(1, 8):
        th = Fraction(1 + 2 * a, 4 * (1 + a))
        for tail in ("", "0", "1101"):
            assert rm.pi_n(kamae.FAMILY, "1" * a + "0" + tail, kamae.U) == (th, th, 1 - 2 * th)
    for n in range(1, 10):
        assert rm.pi_n(rm.NONUNIFORM_FAMILY, "0" * (n - 1) + "1", rm.NONUNIFORM_R) == (Fraction(4, 5), Fraction(1, 5), 0)
    with pytest.raises(rm.ZeroProduct):
        rm.pi_n([ExactMatrix.zeros(2, 2)], "0", (Fraction(1, 2), Fraction(1, 2)))


@given(st.text("012", max_size=8), st.fractions(min_value=Fraction(1, 7), max_value=9))
def test_pi_n_scale_invariant(word, c):
    R = tuple(Fraction(1, 7) for _ in range(7))
    assert rm.pi_n(langw.GENERATORS, word, R) == rm.pi_n(langw.GENERATORS, word, tuple(c * x for x in R))


def test_omega_membership():
    pos = [ExactMatrix.from_rows([[1, 2], [1, 1]])]
    assert rm.omega_R_member(pos, (Fraction(1, 2), Fraction(1, 2)), "0000")
    for w in words("01", 12)[::37]:
        assert rm.omega_R_member(kamae.FAMILY, kamae.U, w)
    rng = random.Random(0)
    for _ in range(200):
        w = "".join(rng.choice("012") for _ in range(rng.randint(1, 20)))
        assert rm.omega_R_member(langw.GENERATORS, [1] * 7, w)


def test_potential_examples():
    assert rm.n_step_potential(KAMAE, "0110", 1) == pytest.approx(math.log(rm.measure_cylinder(KAMAE, "0")))
    iid = rm.iid_representation([Fraction(1, 3), Fraction(2, 3)])
    for w in ("0", "10", "1101"):
        assert rm.n_step_potential(iid, w) == pytest.approx(math.log([1 / 3, 2 / 3][int(w[0])]))
    for a in range(1, 6):
        w = "0" + "1" * a + "0" + "01" * 20
        assert rm.n_step_potential(KAMAE, w) == pytest.approx(math.log(1 / 3) + math.log((2 * a + 1) / (a + 1)), abs=1e-9)


def test_gibbs_constants():
    iid = rm.iid_representation([Fraction(1, 3), Fraction(2, 3)])
    exact = rm.gibbs_constants(iid, lambda w: math.log([1 / 3, 2 / 3][int(w[0])]), 6, 6)
    assert all(k == pytest.approx(1.0, abs=1e-12) for k in exact.K)
    g = rm.gibbs_constants(KAMAE, kamae.kamae_phi, 10, 8)
    assert g.monotone
    assert g.rates_decreasing
    assert g.to_json()["label"] == "depth-D lower estimate of the sup"


def test_cauchy_scans():
    idem = [ExactMatrix.from_rows([["1/2", "1/2"], ["1/2", "1/2"]])]
    assert rm.cauchy_uniform_scan(idem, (Fraction(1, 2), Fraction(1, 2)), 3, 2).gap == 0
    scan = rm.cauchy_uniform_scan(rm.NONUNIFORM_FAMILY, rm.NONUNIFORM_R, 6, 1, prefix="0" * 6)
    jump = sum(abs(float(a - b)) for a, b in zip(rm.NONUNIFORM_JUMP, rm.NONUNIFORM_LIMIT))
    assert scan.gap >= jump - 1e-12


def test_power_limits():
    z = rm.power_limit(langw.GENERATORS[0])
    assert z.status == "exact"
    assert z.C == tuple(Fraction(x) for x in ("0", "1/5", "1/5", "0", "1/5", "1/5", "1/5"))
    assert z.D == (1, 0, 0, 0, 0, 0, 0)
    t = rm.power_limit(langw.GENERATORS[2])
    assert t.C == tuple(Fraction(x) for x in ("1/3", "0", "1/3", "1/3", "0", "0", "0"))
    assert t.D == (0, 0, 0, 0, 1, 0, 0)
    proj = ExactMatrix.from_rows([["1/3", "1/3"], ["2/3", "2/3"]])
    p = rm.power_limit(proj)
    assert p.C == (Fraction(1, 3), Fraction(2, 3)) and p.converged
    assert rm.power_limit(ExactMatrix.from_rows([[0, 1], [1, 0]])).status in ("oscillating", "not-rank-one")


def test_power_residuals_decrease():
    lim0 = rm.power_limit(langw.GENERATORS[0])
    res0 = rm.power_residuals(langw.GENERATORS[0], lim0, 80)
    start = lim0.detection or 1
    for r in range(4):
        cls = res0[start + r::4]
        assert all(b < a for a, b in zip(cls, cls[1:]))
    lim2 = rm.power_limit(langw.GENERATORS[2])
    res2 = rm.power_residuals(langw.GENERATORS[2], lim2, 80)
    assert all(b < a for a, b in zip(res2, res2[1:]))


def test_pointwise_routes():
    pos = [ExactMatrix.from_rows([[1, 2], [2, 1]])]
    rep = rm.check_pointwise_conditions(pos, (1, 1), "0000", psi=lambda n: n - 1)
    assert rep.route == "S1"
    for tail in ("0", "2"):
        r = rm.check_pointwise_conditions(langw.GENERATORS, [1] * 7, "0120", tail=tail)
        assert r.route == "S2" and r.s2_ok


def test_uniform_conditions():
    pos = [ExactMatrix.from_rows([[1, 2], [2, 1]])]
    rep = rm.check_uniform_conditions(pos, (1, 1), "000", rm.UniformParams(Fraction(2), psi=lambda n: n - 1), 5)
    assert rep.u1_ok
    word = langw.random_regular_word(random.Random(0), 8)
    psi = rm.decomposition_psi(word, 1)
    rep = rm.check_uniform_conditions(langw.GENERATORS, [1] * 7, word[:10], rm.UniformParams(Fraction(10 ** 6), psi=psi), 12, n_min=8)
    assert rep.u1_ok
    tail = rm.check_uniform_conditions(langw.GENERATORS, [1] * 7, "0120", rm.UniformParams(Fraction(10 ** 6), tail="0"), 7)
    assert tail.u3_ok


def test_nonuniform_ratio_jumps():
    for n in range(3, 12):
        assert rm.nonuniform_ratio("1" + "0" * n) == 1
        assert rm.nonuniform_ratio("1" + "0" * (n - 1) + "1") == Fraction(6, 5)
