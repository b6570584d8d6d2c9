import math
import os

import pytest

from qclock.cli import (EXIT_CONVERGENCE, EXIT_OK, EXIT_PARSE,
                        EXIT_VALIDATION, RunConfig, apply_preset, main,
                        parse_config, run_table, serialize)
from qclock.distribution import ArrivalScheme
from qclock.errors import ConfigParseError, ValidationError


def test_empty_config_gives_default_preset():
    cfg = parse_config("")
    assert cfg.physics.d == 1.0
    assert cfg.physics.u == 3e5
    assert cfg.physics.B == 10.0
    assert cfg.physics.sigma0 == 1e-5
    assert cfg.sigma0_ladder == (1e-5, 1e-6, 1e-7, 1e-8)
    assert cfg.scheme is ArrivalScheme.MODULUS_TOTAL_CURRENT
    assert cfg.thetas_deg[0] == pytest.approx(34.94767, abs=1e-9)
    assert cfg.thetas_deg[1] == pytest.approx(94.94767, abs=1e-9)
    assert cfg.thetas_deg[2] == pytest.approx(124.94767, abs=1e-9)


def test_preset_ii_only_changes_length():
    cfg = parse_config("preset = II")
    assert cfg.physics.d == 2.0
    assert cfg.physics.u == 3e5
    assert cfg.physics.B == 10.0
    assert cfg.thetas_deg[0] == pytest.approx(69.89534, abs=1e-9)


def test_negative_length_is_a_validation_error():
    with pytest.raises(ValidationError, match="d must be positive"):
        parse_config("d = -1")


def test_unknown_key_reports_line_number():
    with pytest.raises(ConfigParseError, match="line 3") as excinfo:
        parse_config("# comment\nd = 1.0\nbogus = 7\n")
    assert excinfo.value.line == 3
    assert "bogus" in str(excinfo.value)


def test_malformed_line_reports_line_number():
    with pytest.raises(ConfigParseError, match="line 1"):
        parse_config("just some words")
    with pytest.raises(ConfigParseError, match="line 2"):
        parse_config("d = 1.0\nsigma0 = oops")


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("\n# full line comment\n  \nd = 1.5  # trailing\n")
    assert cfg.physics.d == 1.5


def test_sigma0_list_sets_ladder():
    cfg = parse_config("sigma0 = 1e-5, 1e-7")
    assert cfg.sigma0_ladder == (1e-5, 1e-7)
    assert cfg.physics.sigma0 == 1e-5


def test_scheme_and_quadrature_keys():
    cfg = parse_config(
        "scheme = modulus-schrodinger-current\nrel_tol = 1e-9\n"
        "panel_order = 20\nmax_depth = 30\n")
    assert cfg.scheme is ArrivalScheme.MODULUS_SCHRODINGER_CURRENT
    assert cfg.quad.rel_tol == 1e-9
    assert cfg.quad.panel_order == 20
    assert cfg.quad.max_depth == 30


def test_thetas_validated():
    with pytest.raises(ValidationError, match=r"\[0, 360\)"):
        parse_config("thetas_deg = 400")


def test_ladder_entries_pass_validity_guard():
    with pytest.raises(ValidationError, match="exit instant"):
        parse_config("sigma0 = 1e-5, 1e-9")


def test_round_trip():
    cfg = parse_config(
        "preset = II\nsigma0 = 2e-5, 1e-6\nthetas_deg = 10, 95.5\n"
        "scheme = modulus-schrodinger-current\nrel_tol = 1e-9\nout = results\n")
    assert parse_config(serialize(cfg)) == cfg


def test_round_trip_defaults():
    cfg = RunConfig()
    assert parse_config(serialize(cfg)) == cfg


def test_preset_recomputes_default_thetas():
    cfg = apply_preset(RunConfig(), "II")
    assert cfg.thetas_deg[0] == pytest.approx(69.89534, abs=1e-9)
    explicit = parse_config("thetas_deg = 42")
    assert apply_preset(explicit, "II").thetas_deg == (42.0,)


def test_validate_subcommand(capsys):
    assert main(["validate", "--preset", "I"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "configuration OK" in out
    assert "34.94767" in out


def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert main(["validate", "--config", str(bad)]) == EXIT_PARSE
    assert "unknown key" in capsys.readouterr().err


def test_exit_code_validation_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("d = -1\n")
    assert main(["validate", "--config", str(bad)]) == EXIT_VALIDATION
    assert "d must be positive" in capsys.readouterr().err


def test_exit_code_missing_config_file(tmp_path, capsys):
    missing = tmp_path / "nope.cfg"
    assert main(["validate", "--config", str(missing)]) == 5
    assert "error" in capsys.readouterr().err


def test_exit_code_delta_scheme_curve(tmp_path, capsys):
    code = main(["curve", "--scheme", "semiclassical-delta",
                 "--out", str(tmp_path)])
    assert code == EXIT_VALIDATION
    assert "closed-form" in capsys.readouterr().err


def test_exit_code_convergence(tmp_path, capsys):
    # a tolerance below the integrand's evaluation-noise floor cannot be
    # met at any depth, let alone two levels
    cfgfile = tmp_path / "shallow.cfg"
    cfgfile.write_text("sigma0 = 1e-5\nrel_tol = 1e-14\nmax_depth = 2\n")
    code = main(["table", "--config", str(cfgfile), "--out", str(tmp_path)])
    assert code == EXIT_CONVERGENCE
    assert not (tmp_path / "table.csv").exists()


def test_table_single_cell(tmp_path, capsys):
    theta = f"{34.94767:.5f}"
    code = main(["table", "--sigma0", "1e-5", "--theta-deg", theta,
                 "--out", str(tmp_path)])
    assert code == EXIT_OK
    text = (tmp_path / "table.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == f"sigma0_cm,p_plus_{theta},p_minus_{theta}"
    assert lines[1] == "1e-05,1.00000,0.00000"


def test_table_full_preset_i(tmp_path):
    code = main(["table", "--preset", "I", "--out", str(tmp_path)])
    assert code == EXIT_OK
    rows = (tmp_path / "table.csv").read_text().splitlines()
    assert len(rows) == 5
    assert rows[1].startswith("1e-05,1.00000,0.00000,0.75000,0.25000,0.50000,0.50000")
    assert rows[4].startswith("1e-08,0.99887,0.00113,0.75242,0.24758,0.50345,0.49655")


def test_table_reproducible_across_thread_counts(tmp_path, monkeypatch):
    outputs = {}
    for threads in ("1", "4"):
        monkeypatch.setenv("QCLOCK_THREADS", threads)
        out = tmp_path / f"threads{threads}"
        assert main(["table", "--sigma0", "1e-7", "--sigma0", "1e-8",
                     "--out", str(out)]) == EXIT_OK
        outputs[threads] = (out / "table.csv").read_bytes()
    assert outputs["1"] == outputs["4"]


def test_bad_thread_env_rejected(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QCLOCK_THREADS", "many")
    assert main(["table", "--sigma0", "1e-5", "--out", str(tmp_path)]) == \
        EXIT_VALIDATION


def test_curve_outputs(tmp_path):
    code = main(["curve", "--sigma0", "1e-5", "--sigma0", "1e-4",
                 "--out", str(tmp_path)])
    assert code == EXIT_OK
    curves = sorted(tmp_path.glob("curve_sigma0_*.csv"))
    summaries = sorted(tmp_path.glob("curve_sigma0_*_summary.txt"))
    assert len(curves) == 2 and len(summaries) == 2

    peaks, variances = {}, {}
    for summary in summaries:
        entries = dict(line.split(" = ") for line in
                       summary.read_text().splitlines())
        key = summary.name
        peaks[key] = float(entries["peak_phi_deg"])
        variances[key] = float(entries["variance_rad2"])
        assert float(entries["truncated_tail_mass"]) < 1e-6
    for peak in peaks.values():
        assert peak == pytest.approx(34.94767, abs=1e-3)
    v_small = variances["curve_sigma0_1em05_summary.txt"]
    v_large = variances["curve_sigma0_0_0001_summary.txt"]
    assert v_small > v_large  # variance grows as sigma0 shrinks


def test_compare_outputs(tmp_path):
    code = main(["compare", "--sigma0", "1e-8", "--out", str(tmp_path)])
    assert code == EXIT_OK
    files = sorted(tmp_path.glob("compare_*.csv"))
    assert len(files) == 2  # one per current scheme
    for path in files:
        lines = path.read_text().splitlines()
        assert lines[0] == "theta_deg,p_plus,p_minus,p_plus_sc,delta"
        first = lines[1].split(",")
        assert float(first[0]) == pytest.approx(34.94767, abs=1e-9)
        assert abs(float(first[4])) == pytest.approx(0.0011344, abs=5e-5)


def test_flag_overrides_config(tmp_path):
    cfgfile = tmp_path / "base.cfg"
    cfgfile.write_text("preset = II\nsigma0 = 1e-6\n")
    out = tmp_path / "out"
    code = main(["table", "--config", str(cfgfile), "--sigma0", "1e-5",
                 "--theta-deg", "69.89534", "--out", str(out)])
    assert code == EXIT_OK
    rows = (out / "table.csv").read_text().splitlines()
    assert rows[1] == "1e-05,1.00000,0.00000"  # d=2 from preset, flag sigma0
