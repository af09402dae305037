import io
import json
import subprocess
import sys

import pytest

from heegner_lab import cli, quaternion
from heegner_lab.quaternion import BrandtMatrix


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_mass_line(capsys):
    code, out, _ = run(["mass", "--ell", "11"], capsys)
    assert code == 0 and out == "mass = 5/12, expected 5/12, OK\n"


def test_parse_returns_validated_config():
    cfg = cli.parse(["equidist", "--ell", "11", "--D", "-3", "--n-max", "200"])
    assert cfg.command == "equidist" and cfg.ell == [11] and cfg.D == -3 and cfg.n_max == 200
    assert cfg.report_config()["n_max"] == 200 and "workers" not in cfg.report_config()


@pytest.mark.parametrize("args,needle", [
    (["equidist", "--ell", "13", "--D", "-3"], "inert"),
    (["galois", "--ell", "13", "--D", "-3", "--n", "5"], "inert"),
    (["multi-ell", "--ell", "11,13", "--D", "-3"], "inert"),
    (["cosets", "--ell", "11", "--D", "-3", "--n", "6"], "coprime"),
    (["mass", "--ell", "12"], "not prime"),
    (["mass", "--ell", "7", "--level", "3", "--D", "-4"], "Heegner"),
    (["classpoly", "--D", "-5"], "discriminant"),
    (["goursat", "--r", "4"], "--r"),
])
def test_usage_errors_name_the_constraint(args, needle, capsys):
    code, _, err = run(args, capsys)
    assert code == 2 and needle in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run(["mass", "--ell", "11", "--bogus"], capsys)
    assert code == 2


def test_brandt_fault_injection(monkeypatch, capsys):
    real = quaternion.brandt_matrix

    def broken(classes, m, max_m=500):
        B = real(classes, m, max_m)
        M = [row[:] for row in B.matrix]
        M[0][0] += 1
        return BrandtMatrix(B.m, M, B.weights)

    monkeypatch.setattr(quaternion, "brandt_matrix", broken)
    code, out, _ = run(["brandt", "--ell", "11", "--n", "2,3"], capsys)
    assert code == 1 and json.loads(out)["ok"] is False


def test_brandt_ok(capsys):
    code, out, _ = run(["brandt", "--ell", "11", "--n", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == cli.SCHEMA_VERSION
    assert doc["rows"][0]["sigma1"] == 3 and doc["config"]["ell"] == [11]


def test_goursat_reports_five(capsys):
    code, out, _ = run(["goursat", "--group", "A5", "--r", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["count"] == 5 and len(doc["rows"]) == 5


def test_output_independent_of_workers(tmp_path, capsys):
    outs = []
    for w in ("1", "2"):
        path = tmp_path / f"r{w}.json"
        code, _, _ = run(["surject", "--ell", "11", "--D", "-3", "--n", "5,17,23", "--workers", w,
                          "--out", str(path)], capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert list(json.loads(outs[0])) == sorted(json.loads(outs[0]))


def test_config_file_defaults_and_override(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# batch\nell = 11\nD = -3\nn = 5,17\n")
    cfg = cli.parse(["surject", "--config", str(cfgfile), "--n", "23"])
    assert cfg.ell == [11] and cfg.D == -3 and cfg.n == [23]
    code, out, _ = run(["surject", "--config", str(cfgfile), "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("c,coverage")
    assert [line.split(",")[-3] for line in out.splitlines()[1:]] == ["5", "17"]


def test_ss_and_classpoly(capsys):
    code, out, _ = run(["ss", "--ell", "11", "--n", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and [r["j"] for r in doc["rows"]] == ["0", "1"]
    assert doc["rows"][0]["hecke_orbits"]["2"] == ["1", "1", "1"]
    code, out, _ = run(["classpoly", "--D", "-15", "--ell", "11"], capsys)
    assert code == 0 and json.loads(out)["rows"][0]["export"] == "-15 -121287375 191025 1"


def test_modpoly_dir_and_env(tmp_path, capsys, monkeypatch):
    code, _, err = run(["ss", "--ell", "11", "--n", "2", "--modpoly-dir", str(tmp_path)], capsys)
    assert code == 2 and "modpoly_2" in err
    (tmp_path / "modpoly_2.txt").write_text("p 2\n0 0 1\n")
    monkeypatch.setenv("HEEGNER_LAB_DATA", str(tmp_path))
    code, _, err = run(["ss", "--ell", "13", "--n", "2"], capsys)
    assert code == 1 and "invariant" in err


def test_remaining_commands_succeed(capsys):
    for args in (["classes", "--ell", "23"],
                 ["cosets", "--ell", "11", "--D", "-4", "--n", "3,5,9,25"],
                 ["galois", "--ell", "11", "--D", "-3", "--n", "5", "--twists", "id;5:3,3,7"],
                 ["equidist", "--ell", "11", "--n-max", "30"],
                 ["select-ell", "--D", "-4"],
                 ["multi-ell", "--ell", "11,23,47,59", "--D", "-3", "--n", "5"]):
        code, out, _ = run(args, capsys)
        assert code == 0, args
        assert json.loads(out)["config"]["command"] == args[0]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heegner_lab.cli", "mass", "--ell", "13"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "mass = 1/2, expected 1/2, OK\n"
