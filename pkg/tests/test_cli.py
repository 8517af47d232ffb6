from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from shintani.cli import main

GOLDEN = ["--D", "5", "--modulus", "4,-1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_datum_golden(capsys):
    code, rep, _ = run(capsys, "datum", *GOLDEN)
    assert code == 0
    assert list(rep)[:6] == ["D", "modulus", "r", "epsF", "b_period", "xy"]
    assert rep["D"] == 5 and rep["r"] == 5 and rep["b_period"] == [3]
    assert rep["epsF"] == {"a": "123/2", "b": "55/2"}
    assert rep["modulus"]["matrix"] == [[11, 0], [3, 1]]
    cycle = ["2/11,1/11", "7/11,9/11", "8/11,4/11", "6/11,3/11", "10/11,5/11"]
    got = [",".join(p) for p in rep["xy"]]
    assert got == cycle[1:] + cycle[:1]


def test_datum_d12(capsys):
    code, rep, _ = run(capsys, "datum", "--D", "12")
    assert code == 0 and rep["b_period"] == [4] and rep["xy"] == [["1/1", "0/1"]]


def test_basis_pair_modulus(capsys):
    _, a, _ = run(capsys, "datum", *GOLDEN)
    _, b, _ = run(capsys, "datum", "--D", "5", "--modulus", "11,0;7,1,2")
    assert a == b


@pytest.mark.parametrize("argv,fragment", [
    (["datum", "--D", "7"], "0 or 1 mod 4"),
    (["datum", "--D", "5", "--modulus", "4,x"], "--modulus, element 1, field 2"),
    (["datum", "--D", "5", "--modulus", "4,-1,0"], "field 3: denominator"),
    (["datum", "--D", "5", "--ideal", "1,0;0,1"], "not an O_K-ideal"),
    (["datum", "--D", "5", "--ideal", "1,0;0,1;2,2"], "one element or two"),
    (["datum", "--D", "5", "--modulus", "1,0,2"], "integral"),
    (["datum"], "--D is required"),
])
def test_validation_errors(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert fragment in json.loads(err)["error"]


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "nonsense"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["datum", "--D", "five"])
    assert exc.value.code == 1


def test_zeta0(capsys):
    code, rep, _ = run(capsys, "zeta0", "--D", "12", "--verify")
    assert code == 0 and rep["zeta0"] == "1/12" and rep["verify"]["passed"]
    code, rep, _ = run(capsys, "zeta0", *GOLDEN, "--verify")
    assert code == 0 and rep["zeta0"] == "0/1"


def test_shintani_golden_verify(capsys):
    code, rep, _ = run(capsys, "shintani", *GOLDEN, "--verify")
    assert code == 0
    assert abs(float(rep["x2"]["value"]) - 1) < 1e-8
    assert rep["x"]["value"].startswith("0.464312613208126947")
    assert rep["x"]["precision_bits"] == 64
    assert rep["verify"]["star_theorem_applicable"] is True


def test_shintani_trivial_ray_star_not_applicable(capsys):
    code, rep, _ = run(capsys, "shintani", "--D", "12", "--verify")
    assert code == 0 and rep["verify"]["star_theorem_applicable"] is False
    assert abs(float(rep["x"]["value"]) - 1) < 1e-15


def test_rho_verify(capsys):
    code, rep, _ = run(capsys, "rho", "--D", "5", "--verify")
    assert code == 0
    assert float(rep["verify"]["constant_residual"]) < 1e-5
    assert float(rep["verify"]["pole_residual"]) < 1e-12
    assert rep["pole"]["value"].startswith("0.962423650119206")


def test_round_trip(capsys, tmp_path):
    path = tmp_path / "datum.json"
    _, rep, _ = run(capsys, "datum", *GOLDEN)
    path.write_text(json.dumps(rep), encoding="utf-8")
    _, again, _ = run(capsys, "datum", "--from-json", str(path))
    assert again == rep
    for cmd in ("zeta0", "shintani"):
        _, direct, _ = run(capsys, cmd, *GOLDEN)
        _, loaded, _ = run(capsys, cmd, "--from-json", str(path))
        assert loaded == direct


def test_round_trip_rejects_tampering(capsys, tmp_path):
    _, rep, _ = run(capsys, "datum", *GOLDEN)
    rep["xy"][0][0] = "1/11"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rep), encoding="utf-8")
    code, _, err = run(capsys, "datum", "--from-json", str(path))
    assert code == 1 and "xy" in json.loads(err)["error"]
    code, _, err = run(capsys, "datum", "--from-json", str(tmp_path / "missing.json"))
    assert code == 1


def test_precision(capsys, monkeypatch):
    monkeypatch.setenv("SHINTANI_PRECISION_BITS", "96")
    _, rep, _ = run(capsys, "shintani", *GOLDEN)
    assert rep["x"]["precision_bits"] == 96
    assert rep["x"]["value"].startswith("0.46431261320812694733859")
    _, rep, _ = run(capsys, "shintani", *GOLDEN, "--precision-bits", "64")
    assert rep["x"]["precision_bits"] == 64
    monkeypatch.setenv("SHINTANI_PRECISION_BITS", "lots")
    code, _, err = run(capsys, "shintani", *GOLDEN)
    assert code == 1 and "SHINTANI_PRECISION_BITS" in err
    code, _, _ = run(capsys, "shintani", *GOLDEN, "--precision-bits", "10")
    assert code == 1


def test_check_suite_passes(capsys):
    code, rep, _ = run(capsys, "check", "datum")
    assert code == 0 and rep["passed"]
    assert [r["criterion"] for r in rep["results"]] == [1, 7, 9]


def test_check_suite_reports_failure(capsys):
    # the shintani suite contains the star-theorem check on trivial rays
    code, rep, _ = run(capsys, "check", "shintani")
    assert code == 2 and not rep["passed"]
    by_n = {r["criterion"]: r for r in rep["results"]}
    assert by_n[2]["passed"] and not by_n[8]["passed"]


@pytest.mark.skipif(shutil.which("shintani") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["shintani", "zeta0", "--D", "12"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["zeta0"] == "1/12"
