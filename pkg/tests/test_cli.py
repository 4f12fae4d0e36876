import json
import os
import shutil
import subprocess
import sys

import pytest
from click.testing import CliRunner

from mmw.cli import RunConfig, main


def invoke(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def ledger_hash(output):
    return next(l.split()[-1] for l in output.splitlines() if l.startswith("ledger hash:"))


def test_help_and_list():
    r = invoke("--help")
    assert r.exit_code == 0 and "gallery" in r.output
    r = invoke("gallery", "list")
    assert r.exit_code == 0 and "theorem1" in r.output and "omega-witness" in r.output


def test_diagonalize_writes_bundle(tmp_path):
    out = tmp_path / "d"
    r = invoke("diagonalize", "--delta", "~x0 = 0", "--out", str(out))
    assert r.exit_code == 0, r.output
    assert "Π1" in r.output
    doc = json.loads((out / "diagonal.json").read_text())
    assert doc["psi_class"] == "Π1"
    assert invoke("audit", "replay", str(out)).exit_code == 0


def test_direct_numbering(tmp_path):
    r = invoke("diagonalize", "--delta", "x0 = x0", "--numbering", "direct", "--out", str(tmp_path))
    assert r.exit_code == 0, r.output
    assert "num(992) = num(992)" in r.output


@pytest.mark.parametrize("args", [
    ["diagonalize", "--delta", "x0 = "],
    ["diagonalize", "--delta", "~(x0 = 0)"],
    ["gallery", "classify", "--delta", "x"],
    ["diagonalize", "--delta", "x0 = x0", "--eval-bound", "0"],
])
def test_parse_errors_exit_2(args, tmp_path):
    r = invoke(*args, "--out", str(tmp_path))
    assert r.exit_code == 2


def test_caret_points_at_error(tmp_path):
    r = invoke("diagonalize", "--delta", "x0 = = 0", "--out", str(tmp_path))
    assert r.exit_code == 2 and "^" in r.output


@pytest.mark.parametrize("args", [
    ["gallery", "no-such-thing"],
    ["diagonalize", "--delta", "x1 = 0"],
    ["diagonalize", "--delta", "x0 = x0", "--theory", "ZFC"],
    ["diagonalize", "--delta", "x0 = x0", "--phi", "x0 = 0"],
])
def test_preconditions_exit_3(args, tmp_path):
    r = invoke(*args, "--out", str(tmp_path))
    assert r.exit_code == 3, r.output


def test_replay_failure_exit_4(tmp_path):
    out = tmp_path / "k"
    assert invoke("audit", "scheme", "--instance", "kreisel", "--out", str(out)).exit_code == 0
    certs = out / "certificates"
    victim = sorted(certs.iterdir())[0]
    victim.write_bytes(victim.read_bytes() + b"\n")
    r = invoke("audit", "replay", str(out))
    assert r.exit_code == 4
    assert invoke("audit", "replay", str(tmp_path / "missing")).exit_code == 4


def test_kreisel_table(tmp_path):
    r = invoke("audit", "scheme", "--instance", "kreisel", "--out", str(tmp_path))
    assert "K false in ℕ; PA+K ω-consistent" in r.output


def test_theory_file(tmp_path):
    spec = tmp_path / "t.txt"
    spec.write_text("name: Q+\nbase: Q\nextra: num(2) = num(2)\n")
    r = invoke("gallery", "goedel", "--theory", str(spec), "--out", str(tmp_path / "o"))
    assert r.exit_code == 0, r.output


def test_out_from_environment(tmp_path):
    out = tmp_path / "env"
    r = invoke("gallery", "theorem1-toy", env={"MMW_OUT": str(out)})
    assert r.exit_code == 0 and (out / "claims.json").exists()


def test_same_config_same_hash_anywhere(tmp_path):
    a = invoke("gallery", "classify", "--out", str(tmp_path / "a"))
    b = invoke("gallery", "classify", "--out", str(tmp_path / "b"))
    assert ledger_hash(a.output) == ledger_hash(b.output)


def test_config_is_part_of_the_hash(tmp_path):
    a = invoke("gallery", "redundancy", "--out", str(tmp_path / "a"))
    c = invoke("gallery", "redundancy", "--seed", "1", "--out", str(tmp_path / "c"))
    assert ledger_hash(c.output) != ledger_hash(a.output)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(budget_proof=0)
    with pytest.raises(ValueError):
        RunConfig(numbering="gray")
    rec = RunConfig(out="/x").run_record("gallery", name="goedel")
    assert "out" not in rec and rec["command"] == "gallery"


@pytest.mark.skipif(shutil.which("mmw") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = subprocess.run(["mmw", "gallery", "theorem1-toy", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "Refuted" in p.stdout
    p = subprocess.run([sys.executable, "-m", "mmw", "gallery", "list"], capture_output=True, text=True)
    assert p.returncode == 0
