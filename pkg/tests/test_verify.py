import pytest

from matprodlab import verify
from matprodlab.exactmat import ExactMatrix


def test_profiles():
    assert set(verify.PROFILES) == {"quick", "full"}
    assert verify.PROFILES["full"].kmax == 64
    with pytest.raises(ValueError):
        verify.verify_all("slow")
    with pytest.raises(KeyError):
        verify.run_criterion(11, "quick")


def test_result_line_and_json():
    r = verify.CriterionResult(3, "demo", False, 0.5, 1.0, {"x": 1})
    assert r.line().startswith("[FAIL] criterion  3 demo")
    assert r.in_budget and r.to_json()["witness"] == {"x": 1}


@pytest.mark.parametrize("number", [1, 4, 5, 8, 9])
def test_quick_profile_passes(number):
    assert verify.run_criterion(number, "quick").passed


def test_metric_suite_counts():
    suite = verify.metric_suite(samples=200, seed=7)
    assert suite.ok
    assert suite.counts["sandwich"] == 200 and suite.counts["left_multiplication"] == 200
    assert suite.counts["contraction"] > 10 and suite.counts["composition"] > 50


def test_metric_suite_records_failures():
    suite = verify.MetricSuite(1, 0)
    suite.record("x", False, lambda: "boom")
    assert not suite.ok and suite.failures == {"x": ["boom"]}


def test_dominance_bound_small():
    res = verify.dominance_bound_check(1, seed=1)
    assert res["checked"] > 0 and not res["violations"]


def test_random_nonnegative_shape():
    import random
    m = verify.random_nonnegative(random.Random(0), 3, 4)
    assert isinstance(m, ExactMatrix) and m.shape == (3, 4)
    assert all(v >= 0 for v in m.numerators)
