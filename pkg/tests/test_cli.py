import csv
import json

import pytest

from publadder.cli import main


def read_csv(path):
    with path.open(newline="") as fh:
        return list(csv.reader(fh))


def test_calibrate_table(tmp_path):
    assert main(["calibrate", "--loads", "2,3,5,10", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "calibration.csv")
    assert rows[0] == ["tier", "load", "desk_reject_effective", "overall_C", "eventual_rate"]
    assert len(rows) == 13
    assert [r[2] for r in rows[1:] if r[0] == "T1"] == ["0.850000", "0.900000", "0.940000", "0.970000"]
    raw = (tmp_path / "calibration.csv").read_bytes()
    assert b"\r\n" not in raw


def test_manifest_lists_outputs(tmp_path):
    main(["calibrate", "--out", str(tmp_path), "--seed", "3"])
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["master_seed"] == 3
    assert manifest["outputs"] == [str(tmp_path / "calibration.csv")]
    assert manifest["config"]["tiers"]["T1"]["desk_reject_prob_baseline"] == 0.7


def test_sweep_is_reproducible(tmp_path):
    config = tmp_path / "small.json"
    config.write_text('{"faculty_pool": 300}')
    for name in ("a", "b"):
        assert main(["sweep", "--loads", "1,10", "--seed", "7", "--config", str(config), "--out", str(tmp_path / name)]) == 0
    a, b = (tmp_path / "a" / "sweep.csv").read_bytes(), (tmp_path / "b" / "sweep.csv").read_bytes()
    assert a == b
    rows = read_csv(tmp_path / "a" / "sweep.csv")
    assert rows[0][:3] == ["load", "group", "n"]
    assert rows[1][2] == "300"


def test_cohort_outputs(tmp_path):
    assert main(["cohort", "--tier", "T3", "--n", "500", "--out", str(tmp_path)]) == 0
    summary = dict(read_csv(tmp_path / "cohort_T3_summary.csv")[1:])
    assert int(summary["submitted"]) == 500
    assert int(summary["accepted"]) + int(summary["desk_rejected"]) + int(summary["review_rejected"]) == 500
    hist = read_csv(tmp_path / "cohort_T3_histogram.csv")
    assert hist[0] == ["bin_lower_months", "count"]
    assert sum(int(c) for _, c in hist[1:]) == int(summary["accepted"])


def test_portfolio_json_and_faculty_detail(tmp_path):
    config = tmp_path / "c.json"
    config.write_text('{"faculty_pool": 100, "adopter_fraction": 0.1}')
    assert main(["portfolio", "--config", str(config), "--format", "json", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "portfolio_summary.json").read_text())
    assert [g["group"] for g in summary] == ["all", "adopters", "rest"]
    faculty = json.loads((tmp_path / "faculty.json").read_text())
    assert len(faculty) == 100 and sum(f["is_adopter"] for f in faculty) == 10


def test_missing_config_fails(tmp_path, capsys):
    assert main(["portfolio", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) != 0
    assert "not found" in capsys.readouterr().err


def test_bad_config_fails(tmp_path, capsys):
    config = tmp_path / "c.json"
    config.write_text('{"external_laod": 5}')
    assert main(["portfolio", "--config", str(config), "--out", str(tmp_path)]) == 1
    assert "external_laod" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], ["calibrate", "--bogus"], ["sweep", "--loads", "0.5"], []])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "usage" in capsys.readouterr().err


def test_random_seed_is_recorded(tmp_path):
    assert main(["calibrate", "--seed", "random", "--out", str(tmp_path)]) == 0
    seed = json.loads((tmp_path / "manifest.json").read_text())["master_seed"]
    assert 0 <= seed < 2**64
