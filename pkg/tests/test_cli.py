import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from matprodlab import betaconv
from matprodlab.cli import dumps, main, plain


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_rows(capsys):
    code, out, err = run(capsys, "classify", "--rows", "1,2;0,3")
    assert code == 0
    data = json.loads(out)
    assert data["h1"] is True and data["lambda"] == "1/3"
    assert "lambda" in err


def test_classify_digit_word(capsys):
    code, out, _ = run(capsys, "classify", "--word", "000100")
    assert code == 0 and json.loads(out)


def test_projdist_vectors(capsys):
    code, out, _ = run(capsys, "projdist", "--x", "1,2", "--y", "2,1")
    assert code == 0
    assert json.loads(out)["log"] == pytest.approx(2 * __import__("math").log(2))


def test_beta_mu_word(capsys):
    code, out, err = run(capsys, "beta", "mu", "--word", "0121")
    assert code == 0
    data = json.loads(out)
    assert Fraction(data["mu"]) == betaconv.mu_cylinder("0121")
    assert data["binary"] == betaconv.expand("0121")


def test_beta_verify_passes(capsys):
    code, _, err = run(capsys, "beta", "verify", "--depth", "5")
    assert code == 0 and "PASS" in err


def test_failing_check_exits_one(capsys):
    code, _, err = run(capsys, "langw", "verify", "--lemma", "family", "--kmax", "4")
    assert code == 1 and "FAIL" in err


def test_bad_flag_exits_two(capsys):
    assert run(capsys, "classify", "--nope")[0] == 2
    assert run(capsys, "beta", "mu", "--word", "013")[0] == 2
    assert run(capsys, "classify", "--rows", "1,2;3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_json_csv_and_manifest_files(capsys, tmp_path):
    j, c, m = tmp_path / "out.json", tmp_path / "out.csv", tmp_path / "man.json"
    code, out, _ = run(capsys, "examples", "run", "--id", "6", "--n", "20", "--json", str(j), "--csv", str(c), "--manifest", str(m))
    assert code == 0 and out.strip()
    data = json.loads(j.read_text())
    assert data["closed_form_match"] is True
    rows = list(csv.reader(c.open()))
    assert len(rows) > 2
    man = json.loads(m.read_text())
    assert man["subcommand"] == "examples" and man["outputs"]["json"] == str(j)
    j.unlink()
    code, _, _ = run(capsys, "replay", str(m))
    assert code == 0 and json.loads(j.read_text()) == data


def test_replay_missing_manifest(capsys, tmp_path):
    assert run(capsys, "replay", str(tmp_path / "missing.json"))[0] == 2


def test_csv_unavailable_is_usage_error(capsys, tmp_path):
    assert run(capsys, "beta", "value", "--csv", str(tmp_path / "x.csv"))[0] == 2


def test_graphs_dot(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "graphs", "--which", "gamma1", "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph") and "->" in text
    assert json.loads(out)["vertices"] > 0


def test_verify_all_subset(capsys):
    code, _, err = run(capsys, "verify-all", "--profile", "quick", "--only", "1,8")
    assert code == 0
    assert err.count("[PASS]") == 2


def test_serialization_is_stable():
    obj = {"b": Fraction(1, 3), "a": 0.1, "c": float("inf")}
    text = dumps(plain(obj))
    assert text.index('"a"') < text.index('"b"')
    assert '"1/3"' in text and "0.10000000000000001" in text and '"inf"' in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matprodlab", "beta", "value", "--precision", "1e-6"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["low"] <= 1.7548776662466927 <= data["high"]
