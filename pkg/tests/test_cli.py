import csv
import json
import subprocess
import sys

import pytest

from kronsum import random_feasible_pair
from kronsum.cli import main, resolve_seed
from kronsum.matrix import matrix_to_dict


def _run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text())


def _strip(report):
    report = dict(report)
    report.pop("metadata")
    return report


def test_seed_precedence(monkeypatch):
    monkeypatch.delenv("KD_SEED", raising=False)
    assert resolve_seed(None) == 0
    monkeypatch.setenv("KD_SEED", "17")
    assert resolve_seed(None) == 17
    assert resolve_seed(3) == 3


def test_verify_family_normal(tmp_path):
    code, rep = _run(tmp_path, "verify-family", "--family", "normal", "--d", "4", "--samples", "200", "--seed", "7")
    assert code == 0
    assert rep["instances"] == 200 and rep["failed"] == 0
    assert rep["max_objective"] <= 0.5 + 1e-9
    assert rep["worst_instance"]["family"] == "normal"
    assert "timestamp" in rep["metadata"]


def test_verify_family_d3_reports_exceedance(tmp_path):
    code, rep = _run(tmp_path, "verify-family", "--family", "normal", "--d", "3", "--samples", "50", "--seed", "7")
    assert code == 0
    assert rep["bound_asserted"] is False
    assert rep["exceedances"] >= 1
    assert rep["max_objective"] >= 5 / 9 - 1e-6


def test_verify_family_is_deterministic(tmp_path, monkeypatch):
    args = ["verify-family", "--family", "family2", "--d", "6", "--samples", "50"]
    monkeypatch.setenv("KD_SEED", "5")
    _, r1 = _run(tmp_path, *args, name="a.json")
    _, r2 = _run(tmp_path, *args, "--seed", "5", name="b.json")
    _, r3 = _run(tmp_path, *args, "--seed", "6", name="c.json")
    assert json.dumps(_strip(r1), sort_keys=True) == json.dumps(_strip(r2), sort_keys=True)
    assert r1["max_objective"] != r3["max_objective"]
    assert r1["max_lambda1_bound_times_d"] <= 1.5 + 1e-9


def test_verify_family_inconsistent_d(tmp_path, capsys):
    assert main(["verify-family", "--family", "family1", "--d", "5"]) == 2
    assert "d = 4" in capsys.readouterr().err


def test_search(tmp_path):
    code, rep = _run(tmp_path, "search", "--d", "4", "--family", "normal", "--restarts", "3", "--seed", "1",
                     "--max-iters", "300")
    assert code == 0
    assert rep["certificate"]["verdict"] in ("SUPPORTS", "SATURATES")
    lines = (tmp_path / "out.jsonl").read_text().splitlines()
    assert [json.loads(line)["restart"] for line in lines] == [0, 1, 2]


def test_localize_matrix(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(matrix_to_dict([[2, 1], [0.5, -1]])))
    code, rep = _run(tmp_path, "localize", str(path))
    assert code == 0
    assert rep["input_kind"] == "matrix"
    assert rep["gershgorin"]["kind"] == "discs"
    assert rep["brauer"]["kind"] == "cassini"


def test_localize_pair(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(random_feasible_pair(3, 4).to_dict()))
    code, rep = _run(tmp_path, "localize", str(path))
    assert code == 0
    assert rep["input_kind"] == "pair"
    assert rep["eigenvalues"][1] <= rep["weyl_pair_bound"] + 1e-9
    assert rep["weyl_pair_bound"] <= rep["weyl_pair_bound_brauer"] + 1e-12


def test_localize_bad_input(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    assert main(["localize", str(path)]) == 2


@pytest.mark.parametrize("alpha,npt", [(-0.5, True), (-0.1, False), (1.0, False)])
def test_werner_check(tmp_path, alpha, npt):
    code, rep = _run(tmp_path, "werner-check", "--d", "4", "--alpha", str(alpha))
    assert code == 0
    assert rep["npt"] is npt
    assert rep["min_pt_eigenvalue"] == pytest.approx(rep["min_pt_eigenvalue_closed_form"], abs=1e-12)


def test_reproduce(tmp_path):
    code, rep = _run(tmp_path, "reproduce", "--grid", "120")
    assert code == 0
    rows = {r["name"]: r for r in rep["rows"]}
    assert rows["pp_ab d=4"]["computed"] == pytest.approx(0.5, abs=1e-12)
    assert rows["d3-example"]["abs_err"] <= 1e-12
    assert rows["werner d=4 alpha=-1/2 min-eig"]["pass"]
    assert "argmax" in rows["family2-reduced-f d=5"]["detail"]
    for r in rep["rows"]:
        assert set(r) >= {"computed", "expected", "abs_err", "anchor"}
    with open(tmp_path / "out.csv") as fh:
        assert len(list(csv.DictReader(fh))) == len(rep["rows"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kronsum", "werner-check", "--d", "2", "--alpha", "-1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["npt"] is True
