import json
import os
import subprocess
import sys

import pytest

from hurwitz_wedge.cli import ResultCache, main, parse_mu, parse_range, render, truncate_sig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_argument_parsers():
    assert parse_mu("2,1,1") == (2, 1, 1)
    assert parse_mu("112") == (2, 1, 1)
    assert parse_range("0..3") == [0, 1, 2, 3]
    assert parse_range("4") == [4]


def test_correlator_command(capsys, monkeypatch):
    monkeypatch.delenv("HURWITZ_CACHE_DIR", raising=False)
    code, out, _ = run(capsys, "correlator", "--mu", "2,2", "--format", "json")
    assert code == 0 and json.loads(out)[0]["qproducts"] == "[6][2]^3 + 3[2]^4"
    _, out, _ = run(capsys, "correlator", "--word", "1:1,1:1,-2:1", "--format", "json")
    assert json.loads(out)[0]["qproducts"] == "[3]"
    _, out, _ = run(capsys, "correlator", "--mu", "5", "--format", "json")
    assert json.loads(out)[0]["qproducts"] == "[5]^4"
    code, _, err = run(capsys, "correlator", "--word", "1:1,zz")
    assert code == 2 and "position 4" in err


def test_hurwitz_command(capsys, monkeypatch):
    monkeypatch.delenv("HURWITZ_CACHE_DIR", raising=False)
    _, out, _ = run(capsys, "hurwitz", "--mu", "2,1", "--g", "0..3", "--format", "json")
    rows = json.loads(out)
    assert [r["value"] for r in rows] == ["4", "40", "364", "3280"]
    assert rows[0]["closed_form"].startswith("2/12")
    _, out, _ = run(capsys, "hurwitz", "--mu", "2,1,1", "--g", "0", "--format", "csv")
    assert out.splitlines()[1].startswith("\"2,1,1\",0,1,5,240")
    _, out, _ = run(capsys, "hurwitz", "--mu", "2", "--g", "0", "--r", "2", "--format", "json")
    assert json.loads(out)[0]["value"] == "1/2"
    _, out, _ = run(capsys, "hurwitz", "--mu", "2", "--g", "1", "--r", "2", "--precision", "5", "--format", "json")
    assert json.loads(out)[0]["decimal"] == "0.5"
    code, _, _ = run(capsys, "hurwitz", "--mu", "3", "--r", "2")
    assert code == 2


def test_tables_commands(capsys, monkeypatch):
    monkeypatch.delenv("HURWITZ_CACHE_DIR", raising=False)
    for which in ("1", "2", "3"):
        code, out, err = run(capsys, "tables", which, "--format", "json")
        rows = json.loads(out)
        assert code == 0 and len(rows) == 17 and all(r["match"] for r in rows)
        assert "PASS" in err


def test_oracle_and_monotone_commands(capsys, monkeypatch):
    monkeypatch.delenv("HURWITZ_CACHE_DIR", raising=False)
    _, out, _ = run(capsys, "oracle", "--mu", "2,1", "--g", "0", "--format", "json")
    assert json.loads(out)[0] == {"mu": "2,1", "k": 3, "r": 1, "count": "24", "weighted": "4", "method": "exhaustive"}
    _, out, _ = run(capsys, "oracle", "--mu", "2", "--g", "0", "--r", "2", "--format", "json")
    assert json.loads(out)[0]["weighted"] == "1/2"
    code, _, err = run(capsys, "oracle", "--mu", "3,3", "--g", "3")
    assert code == 2 and "BudgetExceeded" in err
    code, out, _ = run(capsys, "monotone", "--mu", "2,2", "--g", "0..8", "--fit", "--format", "json")
    rep = json.loads(out)[0]
    assert code == 0 and rep["all_pass"] and rep["model"]["C0"] == "-1/2"
    _, out, _ = run(capsys, "monotone", "--mu", "3", "--g", "0", "--format", "json")
    assert json.loads(out)[0]["value"] == "2"


@pytest.mark.parametrize("suite", ["score", "inclusion-exclusion", "gap", "asymptotics", "oracle"])
def test_check_suites(capsys, suite):
    code, out, err = run(capsys, "check", suite, "--format", "json")
    assert code == 0, out
    assert all(r["ok"] for r in json.loads(out))


def test_render_formats():
    rows = [{"a": 1, "b": "x"}, {"a": 2, "b": None}]
    assert render(rows, "csv") == "a,b\n1,x\n2,"
    assert render(rows, "markdown").splitlines()[0] == "| a | b |"
    assert render(rows, "text").splitlines()[1] == "1  x"
    assert json.loads(render(rows, "json")) == rows


def test_truncation_rendering():
    from fractions import Fraction

    assert truncate_sig(Fraction(1136992, 10**19), 5) == "1.1369E-13"
    assert truncate_sig(Fraction(100237788894, 10**11), 8) == "1.0023778"


def test_cache_round_trip_and_corruption(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HURWITZ_CACHE_DIR", str(tmp_path))
    argv = ["hurwitz", "--mu", "3,1", "--g", "0..2"]
    _, first, _ = run(capsys, *argv)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    _, second, _ = run(capsys, *argv)
    assert first == second
    files[0].write_text("{not json")
    _, third, _ = run(capsys, *argv)
    assert third == first
    doc = json.loads(files[0].read_text())
    doc["payload"][0]["value"] = "999"
    files[0].write_text(json.dumps(doc))
    _, fourth, _ = run(capsys, *argv)
    assert fourth == first
    assert not list(tmp_path.glob("*.tmp"))


def test_cache_without_dir_is_noop():
    c = ResultCache(None)
    assert c.cached({"x": 1}, lambda: [1]) == [1]
    assert c.get(c.key({"x": 1})) is None


def test_console_script_and_pure_backend():
    env = dict(os.environ, HURWITZ_WEDGE_PURE="1")
    code = (
        "from hurwitz_wedge.oracle import kernels, connected_count;"
        "print(kernels.BACKEND, connected_count(4, (2, 1, 1), 5))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "240"]
    out = subprocess.run([sys.executable, "-m", "hurwitz_wedge.cli", "coeffs", "--mu", "2,1", "--format", "csv"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "2,1" in out.stdout
