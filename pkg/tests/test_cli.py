"""Command line interface: exit codes, reports and cache handling."""
import json
import subprocess
import sys

import pytest

from qunimodal.cli import EXIT_INCOMPLETE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, parse_cases


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("QUNIMODAL_CACHE_DIR", str(d))
    monkeypatch.chdir(tmp_path)
    return d


@pytest.mark.parametrize("argv", [
    [], ["prove"], ["prove", "--m", "3"], ["nope"],
    ["prove", "--m", "1", "--d", "1"], ["prove", "--m", "3", "--d", "1", "--L", "-1"],
    ["prove", "--m", "9", "--d", "40"], ["prove", "--m", "3", "--d", "1", "--cases", "5..2"],
    ["prove", "--m", "3", "--d", "1", "--cases", "x"], ["oracle-check", "--m", "3", "--d", "1", "--l-max", "0"],
    ["sz", "--m", "5"], ["sz", "--m", "7", "--mode", "prove", "--b1", "3"],
    ["induction", "--n-d", "7", "--d", "1"], ["koh", "--l", "-1", "--m", "2"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == EXIT_USAGE


def test_parse_cases():
    assert parse_cases(None, 10) is None
    assert parse_cases("2..4", 10) == [2, 3, 4]
    assert parse_cases("10%", 100) == list(range(0, 100, 10))


def test_prove(tmp_path, capsys, cache_dir):
    assert main(["prove", "--m", "3", "--d", "1", "--out", "r.json"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Proven" in out
    rep = json.loads((tmp_path / "r.json").read_text())
    assert set(rep) >= {"config", "status", "margins", "exceptions", "families", "cases_total", "metadata"}
    assert rep["status"] == "Proven" and rep["margins"] == {"L": 1, "U": 3}
    assert "wall_time_ms" in rep["metadata"]
    assert (cache_dir / "gaussian-m3.json").exists()


def test_prove_slice_and_resume(tmp_path):
    args = ["prove", "--m", "3", "--d", "1", "--out", "s.json", "--jobs", "1"]
    assert main(args + ["--cases", "0..9"]) == EXIT_OK
    lines = (tmp_path / "s.json.journal").read_text().splitlines()
    assert len(lines) == 11
    assert main(args + ["--resume"]) == EXIT_OK
    full = json.loads((tmp_path / "s.json").read_text())
    assert full["cases_run"] == full["cases_total"] == 36


def test_prove_incomplete():
    # margins (1, 0) for m = 4 leave unresolved strips at the upper edge
    assert main(["prove", "--m", "4", "--d", "1", "--L", "1", "--U", "0", "--jobs", "1"]) == EXIT_INCOMPLETE


def test_oracle_check(tmp_path, capsys):
    assert main(["oracle-check", "--m", "3", "--d", "1", "--l-max", "30", "--out", "o.json"]) == EXIT_OK
    assert "identical for l <= 30" in capsys.readouterr().out
    assert json.loads((tmp_path / "o.json").read_text())["identical"] is True
    # self-test: the oracle side uses a different upper margin
    assert main(["oracle-check", "--m", "3", "--d", "1", "--l-max", "30", "--oracle-U", "0"]) == EXIT_MISMATCH


def test_koh(tmp_path, capsys):
    assert main(["koh", "--l", "8", "--m", "5", "--plot-data", "k.tsv"]) == EXIT_OK
    assert "top layer value 73 at k=20" in capsys.readouterr().out
    rows = (tmp_path / "k.tsv").read_text().splitlines()
    assert rows[0] == "layer\tpartition\tk\tvalue"
    assert len(rows) == 1 + 7 * 41


def test_sz_oracle(tmp_path, capsys):
    assert main(["sz", "--m", "7", "--out", "z.json"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "b1=0: (6, 12), (6, 16), (6, 18), (6, 20), (8, 26)" in out
    assert json.loads((tmp_path / "z.json").read_text())["status"] == "ok"


def test_sz_prove_slice(tmp_path):
    assert main(["sz", "--m", "7", "--mode", "prove", "--lam", "4", "--b1", "4",
                 "--cases", "0..1", "--jobs", "1", "--out", "p.json"]) == EXIT_OK
    rep = json.loads((tmp_path / "p.json").read_text())
    assert rep["status"] == "Proven" and rep["cases_run"] == 2


def test_induction(tmp_path, capsys):
    assert main(["induction", "--n-d", "8", "--d", "1", "--bound", "20", "--out", "i.json"]) == EXIT_OK
    assert "0 uncovered" in capsys.readouterr().out
    data = json.loads((tmp_path / "i.json").read_text())
    assert all(e["status"] != "uncovered" for e in data["entries"])


def test_cache_commands(capsys, cache_dir):
    assert main(["koh", "--l", "2", "--m", "2"]) == EXIT_OK
    main(["prove", "--m", "3", "--d", "1", "--l-max", "20"])
    capsys.readouterr()
    assert main(["cache", "inspect"]) == EXIT_OK
    out = capsys.readouterr().out
    assert str(cache_dir) in out and "gaussian-m3.json" in out and "ok" in out
    assert main(["cache", "clear"]) == EXIT_OK
    assert "removed 1 files" in capsys.readouterr().out
    assert not list(cache_dir.glob("*.json"))


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "qunimodal", "induction", "--n-d", "8", "--d", "1",
                        "--bound", "12"], capture_output=True, text=True)
    assert r.returncode == 0 and "uncovered" in r.stdout
    r = subprocess.run([sys.executable, "-m", "qunimodal", "prove"], capture_output=True, text=True)
    assert r.returncode == EXIT_USAGE


def test_prove_reduced_moduli(tmp_path):
    assert main(["prove", "--m", "3", "--d", "1", "--reduce-moduli", "--jobs", "1", "--out", "a.json"]) == EXIT_OK
    assert main(["prove", "--m", "3", "--d", "1", "--jobs", "1", "--out", "b.json"]) == EXIT_OK
    a, b = (json.loads((tmp_path / n).read_text()) for n in ("a.json", "b.json"))
    assert (a["cases_total"], b["cases_total"]) == (12, 36)
    assert a["exceptions"] == b["exceptions"] and a["families"] == b["families"]
