import math
import random
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given
import hypothesis.strategies as st

from matprodlab import kamae
from matprodlab import repmeasure as rm
from matprodlab.exactmat import ExactMatrix
from matprodlab.hclass import min_Lambda


def test_measure_examples():
    assert kamae.kamae_measure("") == 1
    assert kamae.A0.norm1() == 4
    assert kamae.kamae_measure_raw("0") == Fraction(4, 3)
    assert kamae.kamae_measure("0") == Fraction(4, 9)


def test_measure_additivity_to_depth_ten():
    for n in range(10):
        for t in iproduct("01", repeat=n):
            w = "".join(t)
            assert kamae.kamae_measure(w + "0") + kamae.kamae_measure(w + "1") == kamae.kamae_measure(w)


def test_normalization_report_flags_raw_reading():
    rep = kamae.normalization_report(8)
    assert rep.norm_A0 == 4
    assert rep.raw_total == 3
    assert rep.renormalized_additive
    assert not rep.to_json()["raw_is_probability"]


def test_block_matrices():
    assert kamae.kamae_B(0) == kamae.A0
    for a in range(6):
        assert kamae.A0 @ kamae.kamae_matrix("1" * a) @ kamae.A0 == kamae.kamae_B(a)
    assert kamae.kamae_B(1) @ kamae.kamae_B(2) == kamae.kamae_B(7)
    with pytest.raises(ValueError):
        kamae.kamae_B(-1)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_block_products_collapse(runs):
    prod = ExactMatrix.identity(3)
    for a in runs:
        prod = prod @ kamae.kamae_B(a)
    half_odd = 1
    for a in runs:
        half_odd *= 2 * a + 1
    assert prod == kamae.kamae_B((half_odd - 1) // 2)
    assert kamae.alpha(runs) == (half_odd - 1) // 2


def test_limit_map_examples():
    assert kamae.kamae_V("0") == (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))
    for a in range(1, 10):
        th = kamae.theta(a)
        assert th == Fraction(1 + 2 * a, 4 * (1 + a))
        assert kamae.kamae_V("1" * a + "0") == (th, th, 1 - 2 * th)
        assert rm.pi_n(kamae.FAMILY, "1" * a + "0" + "10", kamae.U) == (th, th, 1 - 2 * th)
    for w in ("", "0", "01", "110"):
        v = kamae.kamae_matrix(w) @ ExactMatrix.column([1, 1, 0])
        assert kamae.kamae_V(w, "1") == tuple(x / v.norm1() for x in v.to_list())
    with pytest.raises(kamae.NeedMoreDigits):
        kamae.kamae_V("111")


def test_potential_table_values():
    third = math.log(1 / 3)
    assert kamae.kamae_phi("00") == pytest.approx(third)
    assert kamae.kamae_phi("0", "1") == pytest.approx(math.log(2 / 3))
    for a in range(1, 11):
        assert kamae.kamae_phi("1" * a + "0") == pytest.approx(third + math.log((a + 1) / a))
        assert kamae.kamae_phi("0" + "1" * a + "0") == pytest.approx(third + math.log((2 * a + 1) / (a + 1)))
    with pytest.raises(kamae.NeedMoreDigits):
        kamae.kamae_phi("0111")


def test_potential_matches_its_defining_formula():
    for prefix in ("00", "0110", "10", "1110", "01111110"):
        case, a = kamae.phi_case(prefix)
        assert kamae.phi_from_V(prefix) == kamae.phi_ratio(case, a)


def test_cylinder_classes_converge_exactly():
    conv = kamae.potential_convergence(n=40, amax=10)
    assert conv.errors["01a0"] < 1e-8
    assert conv.errors["1a0"] < 1e-8


def test_point_classes_converge_like_one_over_n():
    errs = {n: kamae.potential_convergence(n=n, amax=10).errors for n in (20, 40, 80)}
    for key in ("00/1bar", "01bar"):
        assert errs[40][key] == pytest.approx(errs[20][key] / 2, rel=0.05)
        assert errs[80][key] == pytest.approx(errs[40][key] / 2, rel=0.05)


def test_generic_potential_agrees_on_random_cylinders():
    rng = random.Random(4)
    for _ in range(50):
        a = rng.randint(1, 10)
        tail = "".join(rng.choice("01") for _ in range(40))
        for prefix in ("0" + "1" * a + "0", "1" * a + "0"):
            w = prefix + "0" + tail  # keep the tail away from all-ones
            assert rm.n_step_potential(kamae.REPRESENTATION, w) == pytest.approx(kamae.kamae_phi(w), abs=1e-9)


def test_dichotomy():
    rep = kamae.dichotomy_check(12, 10)
    assert rep.ok
    assert rep.zero_idempotent
    assert rep.max_lambda < 1
    assert [min_Lambda(kamae.power_A1(n)) for n in (1, 2, 4)] == sorted(min_Lambda(kamae.power_A1(n)) for n in (1, 2, 4))
    assert kamae.power_A1(5) == kamae.kamae_matrix("11111")


def test_uniformity_gaps_under_majorants():
    rep = kamae.uniformity_check()
    assert rep.ok and rep.decaying
    for n in range(1, 30):
        m1, m2 = kamae.majorants(n)
        assert m1 >= 0 and m2 >= 0
    assert max(kamae.majorants(40)) < max(kamae.majorants(4))


def test_table_and_figure_shapes():
    rows = kamae.potential_table(3)
    assert len(rows) == 3 + 2 * 3
    pts = kamae.figure_samples(16, 20)
    assert len(pts) == 16 and pts[0][0] == 0.0
