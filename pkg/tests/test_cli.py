import logging

import pytest

from app.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main

SMALL_SCENARIO = """\
BS_ANTENNAS=2
RIS_ROWS=2
RIS_COLUMNS=2
RCG_MAX_ITERS=50
SWEEP_VARIABLE=bs_ris_distance
SWEEP_VALUES=[5, 45]
SWEEP_SCHEMES=["two_way", "time_sharing"]
SWEEP_SEEDS=2
"""


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logging.getLogger().handlers.clear()


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.env"
    path.write_text(SMALL_SCENARIO)
    return str(path)


def test_optimize_prints_result(capsys):
    assert main(["optimize", "--config", "defaults", "--seed", "7", "--eta", "0.5"]) == EXIT_OK
    out = capsys.readouterr().out
    for field in ("seed        7", "r_D", "r_U", "objective", "iterations", "termination", "trace"):
        assert field in out


def test_gradcheck_passes(capsys):
    assert main(["gradcheck", "--seed", "1", "--instances", "8", "--directions", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "passed              True" in out
    assert "(vs ||grad||*||d||)" in out


def test_missing_config_is_a_usage_error(capsys):
    assert main(["sweep"]) == EXIT_USAGE
    assert "--config" in capsys.readouterr().err


def test_nonexistent_config(tmp_path, capsys):
    assert main(["sweep", "--config", str(tmp_path / "nope.env")]) == EXIT_USAGE
    assert "--config" in capsys.readouterr().err


def test_unknown_flag():
    assert main(["optimize", "--config", "defaults", "--frobnicate"]) == EXIT_USAGE


def test_unknown_command():
    assert main(["plot"]) == EXIT_USAGE


def test_unknown_scheme():
    assert main(["sweep", "--config", "defaults", "--scheme", "best_effort"]) == EXIT_USAGE


def test_invalid_override_is_a_usage_error(small_config):
    assert main(["sweep", "--config", small_config, "--seeds", "0"]) == EXIT_USAGE


def test_invalid_eta_fails(capsys):
    assert main(["optimize", "--config", "defaults", "--eta", "1.5"]) == EXIT_FAILURE
    assert "eta" in capsys.readouterr().err


def test_sweep_writes_identical_outputs(tmp_path, small_config, capsys):
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["sweep", "--config", small_config, "--out", str(first)]) == EXIT_OK
    assert main(["sweep", "--config", small_config, "--out", str(second)]) == EXIT_OK
    csv_first = (first / "bs_ris_distance.csv").read_bytes()
    assert csv_first == (second / "bs_ris_distance.csv").read_bytes()
    assert len(csv_first.decode().splitlines()) == 1 + 2 * 2 * 2
    assert (first / "bs_ris_distance.svg").read_bytes() == (second / "bs_ris_distance.svg").read_bytes()
    assert "objective_median" in capsys.readouterr().out


def test_sweep_without_plots(tmp_path, small_config):
    out = tmp_path / "out"
    assert main(["sweep", "--config", small_config, "--out", str(out), "--no-plot", "--seeds", "1"]) == EXIT_OK
    assert (out / "bs_ris_distance.csv").exists()
    assert not (out / "bs_ris_distance.svg").exists()


def test_eta_sweep_adds_region_plot(tmp_path, small_config):
    out = tmp_path / "out"
    args = ["sweep", "--config", small_config, "--out", str(out), "--variable", "eta", "--values", "0,0.5,1", "--seeds", "1"]
    assert main(args) == EXIT_OK
    assert (out / "eta.csv").exists()
    assert (out / "eta_region.svg").exists()


def test_region_family(tmp_path, small_config, capsys):
    out = tmp_path / "out"
    args = ["region", "--config", small_config, "--out", str(out), "--values", "0,0.5,1", "--seeds", "1", "--distances", "20,45"]
    assert main(args) == EXIT_OK
    assert (out / "region_d20.csv").exists()
    assert (out / "region_d45.svg").exists()
    assert (out / "region_family.svg").exists()
    assert "sum-rate peak" in capsys.readouterr().out


def test_parser_defaults():
    args = build_parser().parse_args(["sweep", "--config", "defaults"])
    assert args.plot is True
    assert args.timing is None
    assert args.scheme is None
    assert str(args.out) == "results"


def test_region_without_eta_endpoints_is_a_usage_error(tmp_path, small_config, capsys):
    out = tmp_path / "out"
    args = ["region", "--config", small_config, "--out", str(out), "--values", "0.2,0.5", "--seeds", "1"]
    assert main(args) == EXIT_USAGE
    assert "endpoints 0 and 1" in capsys.readouterr().err
    assert not (out / "region.csv").exists()
