import json

import numpy as np
import pytest

from somfrechet.cli import (main, read_distance_csv, read_volume, write_distance_csv,
                            write_volume)
from somfrechet.core import DistanceMatrix, GroupedSample, Volume
from somfrechet.inference import permutation_test
from somfrechet.pipeline import derive_seed


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def small_run(tmp_path):
    d = tmp_path / "run"
    assert run("simulate", "--dir", d, "--scenario", "SC2", "--snr", 2, "--seed", 7,
               "--n-per-group", 5) == 0
    assert run("train", "--dir", d, "--gamma", 20) == 0
    assert run("dist", "--dir", d) == 0
    return d


def test_volume_round_trip(tmp_path):
    vol = Volume(np.arange(12, dtype=float).reshape(4, 3), 2, 2, "s1")
    name = write_volume(tmp_path, vol, seed=3)
    assert (tmp_path / name).stat().st_size == 4 * 12
    back = read_volume(tmp_path / name)
    assert np.array_equal(back.data, vol.data)
    assert (back.width, back.height, back.subject_id) == (2, 2, "s1")
    assert json.loads((tmp_path / "s1.json").read_text())["seed"] == 3


def test_distance_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=6)
    D = DistanceMatrix(np.abs(x[:, None] - x[None]) / 3, "T-SMD", ids=list("abcdef"))
    write_distance_csv(tmp_path / "d.csv", D)
    back = read_distance_csv(tmp_path / "d.csv")
    assert back.values.tobytes() == D.values.tobytes()
    assert (back.metric_name, back.closed, back.ids) == ("T-SMD", False, D.ids)
    assert (tmp_path / "d.csv").read_text().startswith("# metric_name=T-SMD closed=false\n")


def test_sc2_pipeline_p_zero(tmp_path):
    d = tmp_path / "sc2"
    assert run("simulate", "--dir", d, "--scenario", "SC2", "--snr", 2, "--seed", 7) == 0
    assert run("train", "--dir", d) == 0
    assert run("dist", "--dir", d, "--metric", "t-smd") == 0
    assert run("infer", "--dir", d, "--metric", "t-smd", "--B", 100) == 0
    doc = json.loads((d / "infer_t-smd.json").read_text())
    assert doc["p_value"] == 0.0
    assert len((d / "null_t-smd.csv").read_text().splitlines()) == 101


def test_reingested_matrix_reproduces_p(small_run):
    d = small_run
    assert run("infer", "--dir", d, "--metric", "s-smd", "--B", 50) == 0
    doc = json.loads((d / "infer_s-smd.json").read_text())
    D = read_distance_csv(d / "dist_s-smd_closed.csv")
    res = permutation_test(D, GroupedSample.from_sizes([5, 5]), 50, derive_seed(0, 0))
    assert (res.p_value, res.statistic) == (doc["p_value"], doc["statistic"])
    null = [float(x) for x in (d / "null_s-smd.csv").read_text().split()[1:]]
    assert null == res.null_distribution.tolist()


def test_rectangular_grid_accepted(tmp_path):
    d = tmp_path / "r"
    run("simulate", "--dir", d, "--n-per-group", 2)
    assert run("train", "--dir", d, "--grid", "4x6", "--gamma", 3) == 0
    som = json.loads(next((d / "soms").iterdir()).read_text())
    assert (som["k1"], som["k2"], len(som["weights"]), len(som["assignment"])) == (4, 6, 24, 100)


def test_rank_and_overlap(small_run, tmp_path):
    d = small_run
    assert run("rank", "--dir", d, "--metric", "st-smd") == 0
    ref = tmp_path / "ref.txt"
    ref.write_text(" ".join(["1"] * 25 + ["0"] * 75))
    assert run("overlap", "--dir", d, "--ref", f"A={ref}", "--ref", f"B={ref}") == 0
    lines = (d / "overlap.csv").read_text().splitlines()
    assert lines[0] == "rank,A_unit,A_fraction,B_unit,B_fraction"
    assert len(lines) == 1 + 9
    cols = np.array([[float(x) for x in ln.split(",")[2::2]] for ln in lines[1:]])
    assert np.abs(cols.sum(axis=0) - 1).max() <= 1e-12


def test_config_precedence_and_record(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("# study\nseed = 3\nn_per_group = 2\nscenario = SC3\n")
    d = tmp_path / "c"
    assert run("simulate", "--dir", d, "--config", cfg, "--seed", 9) == 0
    rec = dict(ln.split(" = ") for ln in (d / "config_simulate.txt").read_text().splitlines())
    assert (rec["seed"], rec["n_per_group"], rec["scenario"]) == ("9", "2", "SC3")
    assert "dir" not in rec and "workers" not in rec
    assert len((d / "manifest.csv").read_text().splitlines()) == 5


def test_usage_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("colour = red\n")
    assert run("simulate", "--dir", tmp_path, "--config", bad) == 1
    assert "unknown key 'colour'" in capsys.readouterr().err
    assert run("frobnicate") == 1
    assert run("simulate", "--dir", tmp_path, "--snr", -1) == 1
    assert run("simulate", "--dir", tmp_path, "--scenario", "SC1,SC2") == 1
    assert run("train", "--dir", tmp_path, "--no-such-flag") == 1


def test_data_errors_exit_two(small_run, capsys):
    d = small_run
    assert run("train", "--dir", d / "missing") == 2
    assert "manifest.csv" in capsys.readouterr().err
    vol = next((d / "volumes").glob("*.f32"))
    vol.write_bytes(vol.read_bytes()[:-4])
    assert run("train", "--dir", d) == 2
    assert str(vol) in capsys.readouterr().err
    (d / "dist_t-smd_closed.csv").write_text("garbage\n")
    assert run("infer", "--dir", d, "--metric", "t-smd") == 2


def test_report_empty_directory(tmp_path, capsys):
    assert run("report", "--dir", tmp_path, "--reps", 0) == 2
    assert "no replicate results" in capsys.readouterr().err


def test_report_resumes(tmp_path):
    args = ("report", "--dir", tmp_path, "--scenario", "SC2", "--snr", 2, "--n-per-group", 3,
            "--gamma", 5, "--B", 10, "--metric", "t-smd")
    assert run(*args, "--reps", 1) == 0
    first = tmp_path / "replicates" / "SC2_snr2_grid3x3" / "rep_000.json"
    stamp = first.stat().st_mtime_ns
    assert run(*args, "--reps", 2) == 0
    assert first.stat().st_mtime_ns == stamp
    rows = (tmp_path / "table.csv").read_text().splitlines()
    assert rows[1].startswith("SC2_snr2_grid3x3,SC2,2.0,3x3,T-SMD,")
    assert rows[1].endswith(",2")
