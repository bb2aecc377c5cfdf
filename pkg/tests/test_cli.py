import json
import os
import subprocess
import sys

import pytest

from modbeta.cli import EXIT_INFRA, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main, run


def out_of(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_alpha_table_p5(capsys):
    code, out, _ = out_of(["alpha-table", "--p", "5", "--tmax", "40", "--format", "json"], capsys)
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    orders = {r["t"]: r["order"] for r in rows}
    assert sorted(orders) == [4, 8, 12, 16, 20, 24, 28, 32, 36, 40]
    assert orders[20] == orders[40] == 25
    assert all(v == 5 for t, v in orders.items() if t % 20)
    assert all(r["generator"] == f"E{r['t']}" for r in rows)


def test_alpha_table_empty_range(capsys):
    code, out, _ = out_of(["alpha-table", "--p", "5", "--tmax", "2", "--format", "json"], capsys)
    assert code == EXIT_OK and json.loads(out)["rows"] == []


def test_alpha_table_p7(capsys):
    code, out, _ = out_of(["alpha-table", "--p", "7", "--tmax", "6", "--format", "csv"], capsys)
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 2 and lines[1].split(",")[:2] == ["6", "7"]


def test_beta_enumerate(capsys):
    code, out, _ = out_of(["beta", "enumerate", "--p", "5", "--degree-max", "300", "--format", "json"], capsys)
    assert code == EXIT_OK
    rows = json.loads(out)["indices"]
    found = {(r["i"], r["j"], r["k"]): r["degree"] for r in rows}
    assert found[(1, 1, 1)] == 40 and found[(2, 1, 1)] == 88


def test_beta_search_writes_delta_squared_certificate(tmp_path, capsys):
    code, out, _ = out_of(["beta", "search", "--p", "5", "--i", "1", "--out", str(tmp_path), "--format", "json"], capsys)
    assert code == EXIT_OK
    cert = json.loads(out)["results"][0]["certificate"]
    coeffs = [int(c) for c in cert["coefficients"]]
    assert coeffs[:8] == [0, 0, 1, 2, 0, 0, 0, 1]
    assert (tmp_path / "beta_p5_i1_j1_k1.json").exists()


def test_verify_and_rigidity(tmp_path, capsys):
    assert main(["beta", "search", "--p", "5", "--i", "1", "--out", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    path = str(tmp_path / "beta_p5_i1_j1_k1.json")
    code, out, _ = out_of(["beta", "rigidity", "--cert", path, "--ells", "2,3"], capsys)
    assert code == EXIT_OK and "pass" in out
    code, _, _ = out_of(["beta", "verify", "--cert", path], capsys)
    assert code == EXIT_OK


def test_corrupted_certificate_is_a_violation(tmp_path, capsys):
    main(["beta", "search", "--p", "5", "--i", "1", "--out", str(tmp_path)])
    capsys.readouterr()
    path = tmp_path / "beta_p5_i1_j1_k1.json"
    doc = json.loads(path.read_text())
    doc["witnesses"]["2"]["ord_q"] = "5"
    path.write_text(json.dumps(doc))
    code, out, _ = out_of(["beta", "verify", "--cert", str(path), "--format", "json"], capsys)
    assert code == EXIT_VIOLATION
    doc = json.loads(out)
    assert not doc["passed"] and {r["failed_condition"] for r in doc["reports"]} == {2}


def test_basis_outputs(capsys):
    code, out, _ = out_of(["basis", "--weight", "12", "--level", "1", "--format", "json"], capsys)
    assert code == EXIT_OK
    assert [r["name"] for r in json.loads(out)["basis"]] == ["e12", "Delta"]
    code, out, _ = out_of(["basis", "--weight", "4", "--level", "2", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["certificate"]["rank"] == 2 and doc["certificate"]["saturated"]
    code, out, _ = out_of(["basis", "--weight", "2", "--level", "1"], capsys)
    assert code == EXIT_OK and "M_2 = 0" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["alpha-table", "--p", "4"],
        ["alpha-table", "--p", "5", "--ells", "11"],
        ["alpha-table", "--p", "5", "--ells", "7"],
        ["basis", "--weight", "4", "--level", "11"],
        ["beta", "verify"],
        ["beta", "frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_insufficient_precision_exits_3(capsys):
    assert main(["basis", "--weight", "40", "--level", "2", "--precision", "2"]) == EXIT_INFRA


def test_parallel_search_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    out1, c1 = run(["beta", "search", "--p", "5", "--degree-max", "140", "--out", str(a), "--jobs", "1", "--format", "json"])
    out2, c2 = run(["beta", "search", "--p", "5", "--degree-max", "140", "--out", str(b), "--jobs", "3", "--format", "json"])
    assert c1 == c2 == EXIT_OK and out1 == out2
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir()) and names
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "modbeta", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "alpha-table" in res.stdout


def test_cache_dir_from_environment(tmp_path):
    env_dir = tmp_path / "cache"
    res = subprocess.run(
        [sys.executable, "-m", "modbeta", "basis", "--weight", "8", "--level", "3"],
        capture_output=True, text=True, env={**os.environ, "MODBETA_CACHE_DIR": str(env_dir)},
    )
    assert res.returncode == 0
    assert any(env_dir.iterdir())
