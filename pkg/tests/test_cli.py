import json
import subprocess
import sys

import pytest

from twopt import tables
from twopt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_compute_p1_degree_one(capsys):
    code, out = run(capsys, "compute", "pn", "1", "--dmax", "1")
    assert code == 0
    data = json.loads(out)
    assert data["target"] == "P^1" and data["degrees"] == ["1"]
    got = {(e["a"], e["k"], e["b"], e["l"]): e["value"] for e in data["entries"]}
    assert len(got) == 8
    assert got[(0, 1, 0, 1)] == "2" and got[(0, 2, 0, 0)] == "-2"


def test_degree_bound_zero_gives_empty_table(capsys):
    code, out = run(capsys, "compute", "pn", "2", "--dmax", "0")
    assert code == 0 and json.loads(out)["entries"] == []


def test_json_round_trip_is_byte_identical(capsys, tmp_path):
    path = tmp_path / "p2.json"
    assert main(["compute", "pn", "2", "--dmax", "1", "--out", str(path)]) == 0
    text = path.read_text()
    assert tables.dumps(tables.loads(text)) == text


def test_csv_output_for_twisted_sector(capsys):
    code, out = run(capsys, "compute", "wps", "1,2", "--dmax", "1/2", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "a,psi_a,b,psi_b,degree,value"
    assert all(line.split(",")[4] == "1/2" for line in lines[1:])
    assert len(lines) > 1


@pytest.mark.parametrize("argv, code", [
    (["compute", "pn", "1", "--dmax", "-1"], 2),
    (["compute", "pn", "x"], 2),
    (["compute", "wps", "1,0"], 2),
    (["compute", "pn", "1", "--lambda", "1,2"], 2),
    (["compute", "toric", "P1", "--lambda", "1,1"], 2),
    (["compute", "toric", "no-such-fan.json"], 2),
    (["compute", "builtin", "X2"], 6),
    (["condition", "pn", "2"], 2),
    (["condition", "builtin", "X2", "--composition", "9,1"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, out = run(capsys, *argv)
    assert got == code
    assert "error" in json.loads(out)


@pytest.mark.parametrize("argv", [
    ["verify", "pn", "2", "--dmax", "2"],
    ["verify", "wps", "1,1,2", "--dmax", "1"],
    ["verify", "toric", "P1xP1", "--dmax", "1"],
    ["verify", "builtin", "X2", "--dmax", "1"],
])
def test_verify_passes(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 0, out
    data = json.loads(out)
    assert data["ok"] and all(r["ok"] for r in data["reports"])
    assert all(r["passed"] or r["expected"] is False for r in data["reports"])


def test_condition_x2_reports_expected_failure(capsys):
    code, out = run(capsys, "condition", "builtin", "X2", "--composition", "5,1", "--format", "csv")
    assert code == 0
    assert out.startswith("FAIL") and "[expected fail]" in out and "degree 1,0" in out


def test_condition_defaults(capsys):
    code, out = run(capsys, "condition", "toric", "P3", "--format", "csv")
    assert code == 0 and out.count("PASS") == 4
    code, out = run(capsys, "condition", "builtin", "X1", "--composition", "3,1", "--format", "csv")
    assert code == 0 and out.startswith("PASS")


def test_toric_compute_matches_pn(capsys):
    _, toric = run(capsys, "compute", "toric", "P1", "--dmax", "2")
    _, proj = run(capsys, "compute", "pn", "1", "--dmax", "2")
    assert json.loads(toric)["entries"] == json.loads(proj)["entries"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "twopt", "compute", "pn", "1", "--dmax", "1", "--format", "csv"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[0] == "a,psi_a,b,psi_b,degree,value"
