import subprocess
import sys

import numpy as np
import pytest

from poincare_maxwell.cli import LORENTZ_COLUMNS, MOMENT_COLUMNS, ORBIT_COLUMNS, main
from poincare_maxwell.config import SEED_ENV, ConfigError, RunConfig, load_config, parse_lines
from poincare_maxwell.report import CheckResult, format_float, read_csv, write_csv

SHORT = ["--t_end", "3", "--samples", "101"]


# --- config ---------------------------------------------------------------

def test_defaults_are_cyclotron_run():
    cfg = RunConfig()
    assert (cfg.q, cfg.m0, cfg.c, cfg.B, cfg.Ex, cfg.Ey) == (1.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    assert (cfg.Px, cfg.Py) == (1.0, 0.0)
    assert cfg.rel_tol == cfg.abs_tol == 1e-12
    assert cfg.threshold == 1e-7


def test_parse_lines():
    vals = parse_lines(["# comment", "", "B = 2.5  # trailing", "samples=11", "check_energy = no"])
    assert vals == {"B": 2.5, "samples": 11, "check_energy": False}
    with pytest.raises(ConfigError):
        parse_lines(["nonsense"])
    with pytest.raises(ConfigError):
        parse_lines(["colour = red"])
    with pytest.raises(ConfigError):
        parse_lines(["samples = 1.5"])


def test_load_config_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("seed = 5\nB = 2.0\nEx = 0.1\n")
    cfg = load_config(path, environ={})
    assert (cfg.seed, cfg.B, cfg.Ex) == (5, 2.0, 0.1)
    cfg = load_config(path, environ={SEED_ENV: "9"})
    assert cfg.seed == 9
    cfg = load_config(path, {"seed": "11", "B": "3"}, environ={SEED_ENV: "9"})
    assert (cfg.seed, cfg.B) == (11, 3.0)


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(m0=0.0)
    with pytest.raises(ConfigError):
        RunConfig(samples=1)
    with pytest.raises(ConfigError):
        load_config(None, {"bogus": "1"}, environ={})


def test_config_text_roundtrip(tmp_path):
    cfg = RunConfig(B=0.3, check_casimirs=False, samples=7)
    path = tmp_path / "c.cfg"
    path.write_text(cfg.to_text())
    assert load_config(path, environ={}) == cfg


# --- report ----------------------------------------------------------------

def test_check_result_lines():
    assert CheckResult("a", 1e-12, 1e-10).line() == "a PASS 1.000000e-12 1.000000e-10"
    assert not CheckResult("b", 2.0, 1.0).passed
    assert CheckResult("exact", 0.0, 0.0).passed
    assert not CheckResult("exact", 1e-300, 0.0).passed


def test_csv_roundtrip(tmp_path):
    rows = np.array([[0.1, 1.0 / 3.0], [np.pi, -2e-17]])
    write_csv(tmp_path / "a.csv", ("u", "v"), rows)
    header, data = read_csv(tmp_path / "a.csv")
    assert header == ["u", "v"]
    np.testing.assert_array_equal(data, rows)
    assert format_float(0.1) == "0.10000000000000001"
    with pytest.raises(ValueError):
        write_csv(tmp_path / "b.csv", ("u",), rows)


# --- commands ----------------------------------------------------------------

def test_algebra_check_passes(capsys):
    assert main(["algebra-check", "--seed", "1", "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "jacobi_exact PASS" in out
    assert "FAIL" not in out


def test_algebra_check_corrupt_fails(capsys):
    assert main(["algebra-check", "--seed", "1", "--samples", "5", "--corrupt-constants"]) == 1
    out = capsys.readouterr().out
    assert "jacobi_exact FAIL" in out
    assert "jacobi_float_c1 FAIL" in out


def test_algebra_check_seed_from_env(monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, "3")
    main(["algebra-check", "--samples", "5"])
    a = capsys.readouterr().out
    main(["algebra-check", "--samples", "5", "--seed", "3"])
    b = capsys.readouterr().out
    assert a == b


def test_casimir_command(capsys):
    assert main(["casimir", "1", "0", "0", "2", "0", "0", "0", "0", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "C0 -1"
    assert out[1] == "C1 4"
    assert out[2] == "C2 2"
    assert out[3] == "class TwoSheetPlus"


def test_classify_command(capsys):
    assert main(["classify", "0", "2", "0", "0", "0", "0", "0", "0", "0"]) == 0
    out = capsys.readouterr().out
    assert "class OneSheet\n" in out
    assert "chart_valid false" in out
    main(["classify", "1", "1", "0", "0", "0", "0", "0", "0", "0"])
    assert "class ConePlus" in capsys.readouterr().out


def test_compare_writes_csvs_and_passes(tmp_path, capsys):
    assert main(["compare", "--out", str(tmp_path), *SHORT, "--Ex", "0.2", "--pix", "0.1"]) == 0
    report = (tmp_path / "report.txt").read_text()
    assert "FAIL" not in report
    assert "equivalence_orbit PASS" in report
    for name, cols in (("lorentz", LORENTZ_COLUMNS), ("orbit", ORBIT_COLUMNS), ("moments", MOMENT_COLUMNS)):
        header, data = read_csv(tmp_path / f"{name}.csv")
        assert tuple(header) == cols
        assert data.shape == (101, len(cols))
    _, lor = read_csv(tmp_path / "lorentz.csv")
    assert lor[-1, 0] == pytest.approx(3.0)


def test_compare_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["compare", "--out", str(a), *SHORT]) == 0
    assert main(["compare", "--out", str(b), *SHORT]) == 0
    for name in ("lorentz.csv", "orbit.csv", "moments.csv", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_simulate_modes(tmp_path):
    assert main(["simulate", "--mode", "lorentz", "--out", str(tmp_path / "l"), *SHORT]) == 0
    assert (tmp_path / "l" / "lorentz.csv").exists()
    assert not (tmp_path / "l" / "orbit.csv").exists()
    assert main(["simulate", "--mode", "orbit", "--out", str(tmp_path / "o"), *SHORT]) == 0
    assert (tmp_path / "o" / "orbit.csv").exists()


def test_simulate_orbit_off_chart_exits_2(tmp_path, capsys):
    assert main(["simulate", "--mode", "orbit", "--B", "0", "--out", str(tmp_path), *SHORT]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("samples = lots\n")
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_failing_threshold_exits_1(tmp_path):
    assert main(["compare", "--out", str(tmp_path), *SHORT, "--threshold", "1e-30"]) == 1
    assert "FAIL" in (tmp_path / "report.txt").read_text()


def test_disabled_checks_are_omitted(tmp_path, capsys):
    args = ["compare", "--out", str(tmp_path), *SHORT, "--check_equivalence", "false", "--check_casimirs", "no"]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "equivalence" not in out
    assert "casimir" not in out


def test_defaults_command(capsys):
    assert main(["defaults"]) == 0
    assert capsys.readouterr().out == RunConfig().to_text()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "poincare_maxwell", "defaults"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "threshold = 1e-07" in r.stdout
