import subprocess
import sys

import pytest

from tradelab import are_isomorphic, minimal_trade, validate
from tradelab.cli import main
from tradelab.search import read_ledger
from tradelab.ttf import load_ttf, save_ttf, write_ttf


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def min2_file(tmp_path):
    return save_ttf(minimal_trade(2, 3), tmp_path / "min2.ttf")


def test_verify_minimal(capsys, min2_file):
    code, out, _ = run(capsys, "verify", min2_file, "--t", 2)
    assert code == 0
    assert out.strip() == "valid volume=4 foundation=6 steiner=true simple=true"


def test_verify_single_block_difference(capsys, tmp_path):
    path = tmp_path / "bad.ttf"
    path.write_text("trade t=2 k=3\n0 1 2\n---\n0 1 3\n")
    code, out, _ = run(capsys, "verify", path, "--t", 2)
    assert code == 1
    assert out.startswith("invalid subset=0 2 counts=1,0")


def test_verify_unsorted_line(capsys, tmp_path):
    path = tmp_path / "bad.ttf"
    path.write_text(write_ttf(minimal_trade(2, 3)).replace("0 2 4", "0 4 2"))
    code, out, err = run(capsys, "verify", path, "--t", 2)
    assert code == 2 and out == "" and "ascending" in err


def test_verify_wrong_t_and_missing_file(capsys, min2_file, tmp_path):
    assert run(capsys, "verify", min2_file, "--t", 1)[0] == 2
    assert run(capsys, "verify", tmp_path / "nope.ttf", "--t", 2)[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "search", "--t", 2)[0] == 2
    assert run(capsys, "search", "--t", 2, "--k", 3, "--s", 4, "--node-budget", -1)[0] == 2
    assert run(capsys, "search", "--t", 2, "--k", 3, "--s", 4, "--workers", 0)[0] == 2


@pytest.mark.parametrize("t,k,volume,found", [(2, 3, 4, 6), (1, 2, 2, 4), (2, 4, 4, 7)])
def test_minimal_round_trip(capsys, tmp_path, t, k, volume, found):
    path = tmp_path / "m.ttf"
    code, _, _ = run(capsys, "minimal", "--t", t, "--k", k, "--out", path)
    assert code == 0
    assert path.read_text() == write_ttf(minimal_trade(t, k))
    code, out, _ = run(capsys, "verify", path, "--t", t)
    assert code == 0 and f"volume={volume} foundation={found}" in out


def test_minimal_bad_params(capsys, tmp_path):
    assert run(capsys, "minimal", "--t", 3, "--k", 3, "--out", tmp_path / "x.ttf")[0] == 2


def test_derive(capsys, tmp_path, min2_file):
    out_path = tmp_path / "d.ttf"
    code, _, _ = run(capsys, "derive", min2_file, "--t", 2, "--x", 0, "--out", out_path)
    assert code == 0
    d = validate(load_ttf(out_path))
    assert d.t == 1 and are_isomorphic(d, minimal_trade(1, 2))
    assert run(capsys, "derive", min2_file, "--t", 2, "--x", 42, "--out", out_path)[0] == 2
    one = save_ttf(minimal_trade(1, 2), tmp_path / "one.ttf")
    assert run(capsys, "derive", one, "--t", 1, "--x", 0, "--out", out_path)[0] == 2


@pytest.mark.parametrize("t,k,s,mode,code", [(2, 3, 4, "steiner", 0), (2, 3, 5, "general", 1),
                                             (3, 4, 13, "steiner", 1), (2, 4, 5, "steiner", 1)])
def test_search_exit_codes(capsys, tmp_path, t, k, s, mode, code):
    ledger = tmp_path / "ledger.txt"
    wdir = tmp_path / "wit"
    got, out, _ = run(capsys, "search", "--t", t, "--k", k, "--s", s, "--mode", mode,
                      "--ledger", ledger, "--witness-dir", wdir)
    assert got == code
    rec = read_ledger(ledger)[-1]
    assert (rec["t"], rec["k"], rec["s"], rec["mode"]) == (t, k, s, mode)
    assert out.strip().split(" ")[4] == rec["status"]
    if code == 0:
        assert [p.split("/")[-1] for p in rec["witness_files"]] == ["witness_t2_k3_s4_0.ttf"]
        assert validate(load_ttf(rec["witness_files"][0])).volume == 4
    else:
        assert rec["status"] == "exhausted-empty" and rec["witness_files"] == []


def test_search_budget_exit(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--t", 3, "--k", 4, "--s", 13, "--node-budget", 1)
    assert code == 3 and "budget-exceeded" in out


def test_ledger_from_environment(capsys, tmp_path, monkeypatch):
    ledger = tmp_path / "env_ledger.txt"
    monkeypatch.setenv("TRADE_LEDGER", str(ledger))
    run(capsys, "search", "--t", 2, "--k", 3, "--s", 5)
    run(capsys, "search", "--t", 2, "--k", 3, "--s", 5, "--mode", "simple")
    assert [r["mode"] for r in read_ledger(ledger)] == ["steiner", "simple"]


def test_spectrum_two(capsys):
    code, out, _ = run(capsys, "spectrum", "--t", 2)
    assert code == 0
    assert "verdict: verified" in out and "exhausted-empty" in out


def test_spectrum_three_machine(capsys, tmp_path):
    ledger = tmp_path / "l.txt"
    code, out, _ = run(capsys, "spectrum", "--t", 3, "--machine", "--ledger", ledger)
    assert code == 0
    lines = out.strip().splitlines()
    assert [int(line.split()[2]) for line in lines[:-1]] == [9, 10, 11, 13]
    assert lines[-1] == "verdict verified"
    assert len(read_ledger(ledger)) == 4


def test_spectrum_budget(capsys):
    code, out, _ = run(capsys, "spectrum", "--t", 3, "--node-budget", 1)
    assert code == 3 and "inconclusive" in out


def test_spectrum_needs_t2(capsys):
    assert run(capsys, "spectrum", "--t", 1)[0] == 2


def test_module_entry_point(tmp_path, min2_file):
    proc = subprocess.run([sys.executable, "-m", "tradelab", "verify", str(min2_file), "--t", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("valid")
