import csv
import io
import json
import math

import numpy as np
import pytest

from tqft import cli
from tqft.calibration import cliff_depth, crossover_error_rate, error_budget
from tqft.circuits import gate_count, parse_plan, plan_truncated_qft
from tqft.cli import (
    UsageError,
    main,
    parse_float_list,
    parse_int_list,
    parse_phase_spec,
)
from tqft.qpe import grid_phases, mean_success_probability


def read_artifact(path):
    """Split a CSV artifact into (comment lines, row dicts)."""
    lines = path.read_text().splitlines()
    meta = [line for line in lines if line.startswith("#")]
    body = "\n".join(line for line in lines if not line.startswith("#"))
    return meta, list(csv.DictReader(io.StringIO(body)))


def test_parse_int_list():
    assert parse_int_list("4,5,6") == [4, 5, 6]
    assert parse_int_list("1..5") == [1, 2, 3, 4, 5]
    assert parse_int_list("7") == [7]
    assert parse_int_list("1,3..5") == [1, 3, 4, 5]
    assert parse_int_list("all") is None
    for bad in ("", "x", "5..2", "1..x", "1;2"):
        with pytest.raises(UsageError):
            parse_int_list(bad)


def test_parse_float_list():
    points = parse_float_list("1e-4..1e-2:log8")
    assert len(points) == 8
    assert points[0] == pytest.approx(1e-4) and points[-1] == pytest.approx(1e-2)
    ratios = np.diff(np.log(points))
    assert np.allclose(ratios, ratios[0])
    assert parse_float_list("0..1:lin3") == pytest.approx([0.0, 0.5, 1.0])
    assert parse_float_list("1e-3,2e-3") == pytest.approx([1e-3, 2e-3])
    for bad in ("a", "1..2:geo5", "1..-1:log4", "1..2:log"):
        with pytest.raises(UsageError):
            parse_float_list(bad)


def test_parse_phase_spec():
    assert parse_phase_spec("500") == (500, 0)
    assert parse_phase_spec("grid:256") == (0, 256)
    for bad in ("grid:x", "abc", "grid:"):
        with pytest.raises(UsageError):
            parse_phase_spec(bad)


def test_gates_artifact(tmp_path):
    out = tmp_path / "gates.csv"
    assert main(["gates", "--m", "30", "--d", "11,13,14,30", "--out", str(out)]) == 0
    meta, rows = read_artifact(out)
    assert meta[0].startswith("# tqft ")
    assert meta[1].startswith("# config ")
    assert json.loads(meta[1][len("# config "):])["subcommand"] == "gates"
    assert [int(r["gates"]) for r in rows] == [245, 282, 299, 435]
    assert all(r["gates_full"] == "435" for r in rows)
    assert float(rows[-1]["reduction_pct"]) == 0.0


def test_tvd_zero_row_and_exit(tmp_path):
    out = tmp_path / "tvd.csv"
    code = main(["tvd", "--m", "4", "--d", "4", "--phases", "16", "--grid", "32",
                 "--out", str(out)])
    assert code == 0
    _, rows = read_artifact(out)
    assert len(rows) == 1
    assert rows[0]["max_tv"] == "0"
    assert rows[0]["ratio"] == "0"


def test_tvd_table_protocol_row_count(tmp_path):
    out = tmp_path / "tvd.csv"
    assert main(["tvd", "--m", "4,5,6", "--d", "all", "--phases", "50",
                 "--grid", "64", "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    assert len(rows) == 15  # 4 + 5 + 6 depth choices
    for row in rows:
        assert float(row["max_tv"]) <= float(row["bound_tight"]) + 1e-12


def test_usage_error_exit_codes(tmp_path, capsys):
    # argparse-level: missing required flag
    with pytest.raises(SystemExit) as info:
        main(["tvd"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["nosuchcommand"])
    assert info.value.code == 1
    # post-parse validation
    assert main(["tvd", "--m", "99", "--d", "all"]) == 1
    assert main(["tvd", "--m", "4", "--d", "all", "--phases", "0", "--grid", "0"]) == 1
    assert main(["rmse", "--m", "8", "--d", "9"]) == 1
    err = capsys.readouterr().err
    assert "UsageError" in err


def test_numerical_failure_exit_code(tmp_path, capsys):
    assert main(["platforms", "--m", "30", "--file", str(tmp_path / "missing.csv")]) == 2
    payload = json.loads(capsys.readouterr().err.splitlines()[0])
    assert payload["error"] in ("FileNotFoundError", "OSError")


def test_bound_violation_exit_code(tmp_path, monkeypatch, capsys):
    # force the tight bound negative so every row trips the check
    monkeypatch.setattr(cli, "tvd_bound",
                        lambda m, d, form="tight": -1.0 if form == "tight" else 1.0)
    out = tmp_path / "tvd.csv"
    code = main(["tvd", "--m", "4", "--d", "2", "--phases", "8", "--grid", "0",
                 "--out", str(out)])
    assert code == 3
    assert "BoundViolation" in capsys.readouterr().err
    assert out.exists()  # artifact still written for inspection


def test_platforms_custom_registry(tmp_path):
    registry = tmp_path / "registry.csv"
    registry.write_text("name,eps_2q\nLab Rig,1e-3\n")
    out = tmp_path / "platforms.csv"
    assert main(["platforms", "--m", "20", "--file", str(registry),
                 "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    assert len(rows) == 1
    assert rows[0]["name"] == "Lab Rig"
    assert int(rows[0]["depth"]) == 12
    assert rows[0]["clamped"] == "false"


def test_tfim_spectrum_rows(tmp_path):
    out = tmp_path / "tfim.csv"
    assert main(["tfim", "--n", "4", "--J", "1", "--h", "0.5", "--spectrum", "4",
                 "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    assert len(rows) == 4
    energies = [float(r["energy"]) for r in rows]
    assert energies == pytest.approx([-3.4270, -3.3322, -1.8268, -1.7321], abs=1e-3)
    assert float(rows[0]["phi"]) == pytest.approx(0.0, abs=1e-12)


def test_tfim_experiment_row(tmp_path):
    out = tmp_path / "trial.csv"
    assert main(["tfim", "--n", "4", "--m", "8", "--d", "5", "--state", "3",
                 "--eps", "1e-3", "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    row = rows[0]
    assert (int(row["m"]), int(row["d"]), int(row["state"])) == (8, 5, 3)
    assert row["on_grid"] == "false"
    assert float(row["model_rmse"]) == pytest.approx(error_budget(8, 5, 1e-3).rmse)
    assert float(row["energy_rmse"]) == pytest.approx(
        2.0 * 3.4270340889080906 * float(row["phase_rmse"]), rel=1e-9)
    # full-depth spelling
    assert main(["tfim", "--n", "4", "--m", "6", "--d", "full",
                 "--out", str(tmp_path / "full.csv")]) == 0
    _, rows = read_artifact(tmp_path / "full.csv")
    assert int(rows[0]["d"]) == 6


def test_plan_artifact_roundtrip(tmp_path):
    out = tmp_path / "plan.txt"
    assert main(["plan", "--m", "6", "--d", "4", "--out", str(out)]) == 0
    assert parse_plan(out.read_text()) == plan_truncated_qft(6, 4)


def test_rmse_rows_match_model(tmp_path):
    out = tmp_path / "rmse.csv"
    assert main(["rmse", "--m", "16", "--d", "11", "--eps", "1e-4..1e-2:log5",
                 "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    assert len(rows) == 5
    for row in rows:
        eps = float(row["eps_2q"])
        assert float(row["rmse_truncated"]) == pytest.approx(
            error_budget(16, 11, eps).rmse, rel=1e-12)
        assert float(row["rmse_full"]) == pytest.approx(
            error_budget(16, None, eps).rmse, rel=1e-12)
        assert int(row["gates"]) == gate_count(16, 11)


def test_crossover_row(tmp_path):
    out = tmp_path / "crossover.csv"
    assert main(["crossover", "--m", "16", "--d", "11", "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    row = rows[0]
    assert float(row["crossover_eps"]) == pytest.approx(crossover_error_rate(16, 11),
                                                        rel=1e-12)
    assert int(row["gates_truncated"]) == 105
    assert int(row["gates_full"]) == 120
    assert float(row["tv_bound"]) == pytest.approx(math.pi * 5.0 / 2048.0)


def test_cliff_rows(tmp_path):
    out = tmp_path / "cliff.csv"
    assert main(["cliff", "--m", "8", "--d", "1,5,8", "--phases", "grid:32",
                 "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    phis = grid_phases(32)
    for row in rows:
        assert int(row["cliff_depth_marker"]) == cliff_depth(8)
        assert row["success_sampled"] == ""  # exact mode leaves it blank
        expected = mean_success_probability(phis, 8, int(row["d"]))
        assert float(row["success_exact"]) == pytest.approx(expected, rel=1e-12)


def test_cliff_sampled_mode(tmp_path):
    out = tmp_path / "cliff.csv"
    assert main(["cliff", "--m", "6", "--d", "2,6", "--mode", "sampled",
                 "--phases", "grid:16", "--shots", "400", "--out", str(out)]) == 0
    _, rows = read_artifact(out)
    for row in rows:
        sampled = float(row["success_sampled"])
        assert abs(sampled - float(row["success_exact"])) < 0.1
    # deterministic under a fixed seed
    again = tmp_path / "cliff2.csv"
    assert main(["cliff", "--m", "6", "--d", "2,6", "--mode", "sampled",
                 "--phases", "grid:16", "--shots", "400", "--out", str(again)]) == 0
    assert out.read_bytes() == again.read_bytes()


def test_repeat_runs_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["tvd", "--m", "4,5", "--d", "all", "--phases", "40", "--grid", "32"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_format_mirrors_csv(tmp_path):
    csv_out, json_out = tmp_path / "g.csv", tmp_path / "g.json"
    argv = ["gates", "--m", "12", "--d", "3,7"]
    assert main(argv + ["--out", str(csv_out)]) == 0
    assert main(argv + ["--format", "json", "--out", str(json_out)]) == 0
    doc = json.loads(json_out.read_text())
    assert doc["tool"] == "tqft"
    assert doc["config"]["subcommand"] == "gates"
    assert doc["columns"] == ["m", "d", "gates", "gates_full", "reduction_pct"]
    _, csv_rows = read_artifact(csv_out)
    assert len(doc["rows"]) == len(csv_rows) == 2
    for json_row, csv_row in zip(doc["rows"], csv_rows):
        assert json_row["gates"] == int(csv_row["gates"])


def test_stdout_output(capsys):
    assert main(["gates", "--m", "5", "--d", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# tqft ")
    assert "5,3,7,10,30" in out


def test_output_dir_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "artifacts"))
    assert main(["gates", "--m", "5", "--d", "3", "--out", "g.csv"]) == 0
    assert (tmp_path / "artifacts" / "g.csv").exists()
    # absolute --out ignores the environment
    absolute = tmp_path / "direct.csv"
    assert main(["gates", "--m", "5", "--d", "3", "--out", str(absolute)]) == 0
    assert absolute.exists()


def test_suite_writes_all_artifacts(tmp_path):
    out_dir = tmp_path / "suite"
    assert main(["suite", "--out-dir", str(out_dir)]) == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == sorted(name for name, _ in cli.SUITE)
