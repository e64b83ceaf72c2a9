from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from threepoint.cli import run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_verify_json(fixtures_dir):
    code, out, _ = _run("verify", "--max-dim", "16", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == 1
    assert report["oriented"]["admissible"] == [4, 8, 16]
    assert report["spin"]["admissible"] == [8, 16]
    assert report["unitary"]["admissible"] == [4]
    assert "meta" not in report


def test_coeffs_table():
    code, out, _ = _run("coeffs", "--genus", "L", "--k", "2", "--json")
    assert code == 0
    table = json.loads(out)
    assert {"partition": [2], "value": "7/45"} in table["coefficients"]
    code, out, _ = _run("coeffs", "--genus", "L", "--k", "2")
    assert "(2,): 7/45" in out


def test_coeffs_rejects_zero_degree():
    code, _, err = _run("coeffs", "--genus", "todd", "--k", "0")
    assert code == 1 and json.loads(err)["error"]


def test_localize(fixtures_dir):
    model = str(fixtures_dir / "cp2.json")
    assert _run("localize", "--model", model, "--class", "t^2") == (0, "0\n", "")
    assert _run("localize", "--model", model, "--class", "p1")[1] == "3\n"
    assert _run("localize", "--model", model, "--class", "euler")[1] == "3\n"
    code, out, _ = _run("localize", "--model", str(fixtures_dir / "cp2_unitary.json"), "--class", "p1", "--json")
    payload = json.loads(out)
    assert payload["value"] == "3" and payload["chi_y"] == [1, -1, 1] and payload["signature"] == 1


def test_localize_degree_mismatch_reports_source(fixtures_dir):
    code, _, err = _run("localize", "--model", str(fixtures_dir / "cp2.json"), "--class", "t^3")
    assert code == 1
    error = json.loads(err)
    assert "degree" in error["message"] and "cp2.json" in error["source"]


def test_localize_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"half_dim": 2,\n "points": [}')
    code, _, err = _run("localize", "--model", str(bad), "--class", "t^2")
    assert code == 1
    assert json.loads(err)["source"].endswith(":2:13")


def test_localize_missing_file(tmp_path):
    code, _, err = _run("localize", "--model", str(tmp_path / "nope.json"), "--class", "t^2")
    assert code == 1 and json.loads(err)["error"] == "FileNotFoundError"


def test_unknown_flags_rejected():
    with pytest.raises(SystemExit) as exc:
        _run("verify", "--max-dim", "16", "--bogus")
    assert exc.value.code != 0


def test_feasible_classes():
    for cls, expected in [("oriented", [4, 8, 16, 24, 32]), ("spin", [8, 16]), ("unitary", [4])]:
        code, out, _ = _run("feasible", "--max-dim", "32", "--class", cls, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["admissible"] == expected and payload["schema"] == 1


def test_solve_dim8_and_parity_search():
    code, out, _ = _run("solve-dim8", "--json")
    assert json.loads(out)["solutions"] == [{"sign": 1, "c4": 3, "c22": 1, "todd": 0}]
    code, out, _ = _run("parity-search", "--chi-neg1", "3", "--chi-1", "1", "--json")
    payload = json.loads(out)
    assert payload["assignments"] == [] and payload["searched"] == 1000
    code, out, _ = _run("parity-search", "--chi-neg1", "3", "--chi-1", "3")
    assert "1 + y^2 + y^4" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--max-dim", "32", "--json"],
        ["coeffs", "--genus", "todd", "--k", "4", "--json"],
        ["feasible", "--max-dim", "40", "--class", "spin", "--json"],
    ],
)
def test_outputs_are_deterministic_and_reparse(argv):
    first = _run(*argv)[1]
    second = _run(*argv)[1]
    assert first == second
    assert json.loads(first)


def test_meta_flag_adds_metadata():
    _, out, _ = _run("verify", "--max-dim", "16", "--json", "--meta")
    meta = json.loads(out)["meta"]
    assert {"version", "python", "timestamp"} <= set(meta)


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "threepoint", "localize", "--model", str(fixtures_dir / "cp2.json"), "--class", "t^2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout == "0\n"
