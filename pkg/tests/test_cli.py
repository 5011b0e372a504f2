import json
import subprocess
import sys

import pytest

from supercong.cli import builtin_checks, main


def lines(text):
    return [json.loads(x) for x in text.splitlines()]


def test_sweep_single_instance(capsys):
    code = main(["sweep", "--statements", "T11a", "--primes", "5", "--J", "0", "--a-max", "1", "--no-timestamp"])
    out = lines(capsys.readouterr().out)
    assert code == 0 and len(out) == 3
    assert out[1]["params"] == {"p": 5, "h": 3, "a": 1} and out[1]["pass"]


def test_sweep_sn3(capsys):
    assert main(["sweep", "--statements", "SN3", "--n-max", "30"]) == 0
    out = lines(capsys.readouterr().out)
    assert "timestamp" in out[0]
    assert sum(1 for r in out if r.get("statement") == "SN3" and r["pass"]) == 30


def test_sweep_skip_small_prime_power(capsys):
    assert main(["sweep", "--statements", "T11a", "--primes", "3", "--a-max", "1", "--J", "0"]) == 0
    rec = lines(capsys.readouterr().out)[1]
    assert rec["skipped"] and not rec["pass"]


def test_sweep_bad_spec(capsys):
    assert main(["sweep", "--statements", "NOPE"]) == 2
    assert "unknown statement" in capsys.readouterr().err
    assert main(["sweep", "--primes", "4"]) == 2


def test_sweep_spec_file_and_out(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"statements": ["UDIV"], "primes": [7]}))
    out = tmp_path / "r.csv"
    assert main(["sweep", "--spec", str(spec), "--format", "csv", "--out", str(out), "--no-timestamp"]) == 0
    text = out.read_text().splitlines()
    assert text[1].startswith("statement,") and text[2].startswith("UDIV,p=7;")


def test_sweep_mutate(capsys):
    assert main(["sweep", "--statements", "UDIV", "--primes", "5", "--mutate"]) == 1


def test_check_corpus(capsys):
    assert main(["check", "--builtin", "--no-timestamp"]) == 0
    out = lines(capsys.readouterr().out)
    assert out[-1]["fail"] == 0 and out[-1]["pass"] == len(builtin_checks()) + 1  # L23d has two


def test_check_failure_and_empty(tmp_path, capsys):
    bad = tmp_path / "bad.chk"
    bad.write_text("assert 1 === 2 mod 3\n")
    empty = tmp_path / "empty.chk"
    empty.write_text("")
    assert main(["check", str(bad)]) == 1
    capsys.readouterr()
    assert main(["check", str(empty), "--no-timestamp"]) == 0
    out = lines(capsys.readouterr().out)
    assert len(out) == 2 and out[-1]["pass"] == 0


def test_check_parse_error(tmp_path, capsys):
    f = tmp_path / "x.chk"
    f.write_text("let p = 5;\nassert binom(p, ) === 1 mod p\n")
    assert main(["check", str(f)]) == 2
    assert f"{f}:2:17" in capsys.readouterr().err


def test_check_eval_error(tmp_path, capsys):
    f = tmp_path / "x.chk"
    f.write_text("assert 1/5 === 0 mod 5\n")
    assert main(["check", str(f), "--no-timestamp"]) == 2
    assert "NotPAdicInteger" in lines(capsys.readouterr().out)[1]["error"]


def test_check_directory_and_overrides(tmp_path, capsys):
    (tmp_path / "a.chk").write_text("let p = 3;\nassert p^2 === 4 mod 7\n")
    assert main(["check", str(tmp_path), "--set", "p=2"]) == 0
    assert main(["check", str(tmp_path)]) == 1


def test_eval(capsys):
    assert main(["eval", "sum(k, 0, 2, cbin(k))"]) == 0
    assert capsys.readouterr().out.strip() == "9"
    assert main(["eval", "p^2 - 1", "--set", "p=7"]) == 0
    assert capsys.readouterr().out.strip() == "48"
    assert main(["eval", "assert vp(0,3) >= 100"]) == 0
    assert lines(capsys.readouterr().out)[0]["pass"]
    assert main(["eval", "assert 1 === 2 mod 3"]) == 1
    capsys.readouterr()
    assert main(["eval", "1 +"]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "supercong", "eval", "binom(14, 4)"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "1001"
