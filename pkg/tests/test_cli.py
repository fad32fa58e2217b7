import glob
import os

import pytest
from mpmath import mp

from ghostsic.artifacts import load_json, load_table, save_json, sic_record
from ghostsic.cli import build_parser, classify_dimension, main, validate_args
from ghostsic.errors import ConfigError
from ghostsic.ghost import tolerance
from ghostsic.necromancy import SicCandidate


def _run_dir(out):
    dirs = [d for d in glob.glob(os.path.join(out, "*")) if os.path.isdir(d)]
    assert len(dirs) == 1
    return dirs[0]


def test_tower_command(tmp_path):
    out = str(tmp_path / "tower")
    assert main(["--out", out, "--no-progbar", "tower", "--disc", "20", "--jmax", "4"]) == 0
    rows = load_json(os.path.join(_run_dir(out), "tower.json"))
    assert [row["d_j"] for row in rows] == [4, 8, 19, 48]
    assert [row["f_j"] for row in rows] == [1, 3, 8, 21]
    assert glob.glob(os.path.join(_run_dir(out), "*.log"))


def test_pairs_command_csv(tmp_path):
    out = str(tmp_path / "pairs")
    assert main(["--out", out, "--format", "csv", "pairs", "--dmax", "60"]) == 0
    rows = load_table(os.path.join(_run_dir(out), "pairs.csv"))
    assert [(row["d"], row["r"]) for row in rows] == [(11, 3), (19, 4), (29, 5), (29, 8), (41, 6), (55, 7)]


def test_classify_dimension():
    rows = classify_dimension(11)
    assert [row["f"] for row in rows] == [1, 2]
    assert sum(row["h"] for row in rows) == 3
    assert all(row["delta0"] == 24 for row in rows)


def test_domain_error_writes_report(tmp_path):
    out = str(tmp_path / "bad")
    assert main(["--out", out, "tower", "--disc", "16"]) == 3
    report = load_json(os.path.join(_run_dir(out), "error.json"))
    assert report["code"] == "domain"


@pytest.mark.parametrize("argv", [
    ["--prec", "32", "tower", "--disc", "5"],
    ["classify"],
    ["--log-level", "chatty", "pairs", "--dmax", "20"],
    [],
])
def test_config_errors(tmp_path, argv):
    assert main(["--out", str(tmp_path)] + argv) == 2


def test_validate_args_defaults(monkeypatch):
    monkeypatch.setenv("GHOSTSIC_PREC", "96")
    args = validate_args(build_parser().parse_args(["ghost", "--d", "4", "--form", "1,-3,1"]))
    assert args.prec == 96
    assert args.shift == 1
    assert args.progbar
    with pytest.raises(ConfigError):
        validate_args(build_parser().parse_args(["ghost", "--d", "3", "--form", "1,-3,1"]))


def test_verify_command(tmp_path):
    prec = 64
    with mp.workprec(prec):
        psi = mp.matrix([[0], [1], [-1]]) / mp.sqrt(2)
    path = str(tmp_path / "sic.json")
    save_json(sic_record(SicCandidate(psi, 3, None, mp.mpf(0), prec, None)), path)
    out = str(tmp_path / "verify")
    assert main(["--out", out, "verify", "--in", path]) == 0
    report = load_json(os.path.join(_run_dir(out), "verify.json"))
    assert report["passed"] is True


def test_verify_command_rejects_non_sic(tmp_path):
    prec = 64
    with mp.workprec(prec):
        psi = mp.matrix([[1], [0], [0], [0]])
    path = str(tmp_path / "sic.json")
    save_json(sic_record(SicCandidate(psi, 4, None, mp.mpf(0), prec, None)), path)
    out = str(tmp_path / "verify")
    assert main(["--out", out, "--no-progbar", "verify", "--in", path]) == 1
    report = load_json(os.path.join(_run_dir(out), "verify.json"))
    assert report["passed"] is False


def test_verify_command_rejects_malformed_file(tmp_path):
    path = str(tmp_path / "sic.json")
    save_json({"d": 3, "prec_bits": 64}, path)
    out = str(tmp_path / "verify")
    assert main(["--out", out, "verify", "--in", path]) == 2
    assert load_json(os.path.join(_run_dir(out), "error.json"))["code"] == "config"


def test_density_command_with_workers(tmp_path):
    out = str(tmp_path / "density")
    assert main(["--out", out, "--no-progbar", "--threads", "2", "density", "--bound", "2000"]) == 0
    (row,) = load_json(os.path.join(_run_dir(out), "density.json"))
    assert row["bound"] == 2000
    assert row["fields"] > 0
    assert 0 < row["density"] < 1


def test_classify_command_with_workers(tmp_path):
    out = str(tmp_path / "classify")
    assert main(["--out", out, "--no-progbar", "--threads", "2", "classify", "--dmax", "9"]) == 0
    rows = load_json(os.path.join(_run_dir(out), "classify.json"))
    totals = [sum(row["h"] for row in rows if row["d"] == d) for d in range(4, 10)]
    assert totals == [1, 1, 1, 2, 2, 2]


def test_align_rejects_multiples_of_three(tmp_path):
    out = str(tmp_path / "align")
    assert main(["--out", out, "align", "--disc", "5", "--n", "3"]) == 3
    assert load_json(os.path.join(_run_dir(out), "error.json"))["code"] == "domain"


@pytest.mark.slow
def test_ghost_command_smallest_dimension(tmp_path):
    out = str(tmp_path / "ghost")
    assert main(["--out", out, "--no-progbar", "--prec", "64", "ghost", "--d", "4", "--form", "1,-3,1"]) == 0
    record = load_json(os.path.join(_run_dir(out), "ghost.json"))
    assert record["passed"] is True
    assert record["twist"] == [1, 0, 0, 1]
    assert len(record["overlaps"]) == 16
    assert float(record["residuals"]["idempotency"]) < float(tolerance(64))


@pytest.mark.slow
def test_tcc_command_smallest_dimension(tmp_path):
    out = str(tmp_path / "tcc")
    argv = ["--out", out, "--no-progbar", "--prec", "64", "tcc", "--d", "4", "--form", "1,-3,1", "--shift", "1"]
    assert main(argv) == 0
    record = load_json(os.path.join(_run_dir(out), "tcc.json"))
    assert record["passed"] is True
    assert len(record["residuals"]) == 16


@pytest.mark.slow
def test_align_command_trivial_power(tmp_path):
    out = str(tmp_path / "align")
    assert main(["--out", out, "--no-progbar", "--prec", "64", "align", "--disc", "5", "--n", "1"]) == 0
    assert load_json(os.path.join(_run_dir(out), "align.json"))["passed"] is True


@pytest.mark.slow
def test_necromancy_then_verify(tmp_path):
    out = str(tmp_path / "necromancy")
    argv = ["--out", out, "--no-progbar", "--prec", "128", "necromancy", "--d", "4", "--form", "1,-3,1",
            "--target-prec", "256"]
    assert main(argv) == 0
    path = os.path.join(_run_dir(out), "sic.json")
    record = load_json(path)
    assert record["passed"] is True
    assert record["form"] == [1, -3, 1]
    checked = str(tmp_path / "verify")
    assert main(["--out", checked, "verify", "--in", path]) == 0
