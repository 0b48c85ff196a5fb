import json

import pandas as pd
import pytest
from click.testing import CliRunner

import main
from src.verification import CheckResult, SuiteReport

GRID = ["--r-outer", "20", "--n-r", "17", "--n-theta", "32"]


@pytest.fixture
def runner():
    return CliRunner()


def manifest(out):
    return json.loads((out / "manifest.json").read_text(encoding="utf-8"))


def test_eval_writes_points_and_manifest(runner, tmp_path):
    result = runner.invoke(main.cli, ["--out", str(tmp_path), "eval", "--field", "hamel",
                                      "--params", "A=1,mu=0.5", "--points", "3,4;-5,1"])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(tmp_path / "eval.csv")
    assert len(frame) == 2
    data = manifest(tmp_path)
    assert data["status"] == "ok"
    assert data["config"]["values"]["FIELD_KIND"] == "hamel"
    assert {"program", "versions", "wall_time", "outputs"} <= set(data)


def test_unknown_field_is_a_config_error(runner, tmp_path):
    result = runner.invoke(main.cli, ["eval", "--field", "tornado", "--out", str(tmp_path)])
    assert result.exit_code == main.EXIT_CONFIG
    assert manifest(tmp_path)["status"] == "config-error"


def test_missing_required_key(runner, tmp_path):
    result = runner.invoke(main.cli, ["--out", str(tmp_path), "moments"])
    assert result.exit_code == main.EXIT_CONFIG
    assert not (tmp_path / "manifest.json").exists()


def test_moments_and_invariants(runner, tmp_path):
    result = runner.invoke(main.cli, ["--out", str(tmp_path), "moments", "--force", "lift:0.7,-0.4,1.1"])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "moments.csv").exists()

    result = runner.invoke(main.cli, ["--out", str(tmp_path), "invariants", "--field", "harmonic-vortex",
                                      "--params", "M=2", "--radius", "5", "--radius", "50"])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(tmp_path / "invariants.csv")
    assert frame["torque"].tolist() == pytest.approx([2.0, 2.0], rel=1e-10)


def test_residual_on_hamel(runner, tmp_path):
    result = runner.invoke(main.cli, ["residual", "--field", "hamel", "--params", "A=1,mu=0", "--op", "stokes",
                                      "--ray", "0.3", "--window", "10,1000", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "residual.csv").exists()
    assert (tmp_path / "residual_samples.csv").exists()


def test_solve_then_analyze_and_plot(runner, tmp_path):
    out = tmp_path / "solve"
    result = runner.invoke(main.cli, ["--out", str(out), "solve", "--c0", "0.3,0", *GRID])
    assert result.exit_code == 0, result.output
    solution = out / "solution.npz"
    assert solution.exists() and (out / "profile.svg").exists()

    result = runner.invoke(main.cli, ["--out", str(tmp_path / "analyze"), "analyze", "--solution", str(solution),
                                      "--window", "2,15"])
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "analyze" / "analysis.json").read_text(encoding="utf-8"))
    assert {"exponent", "mean_angle", "harmonic", "wake"} <= set(summary)

    result = runner.invoke(main.cli, ["--out", str(tmp_path / "plot"), "plot", "--solution", str(solution)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "plot" / "profile.svg").exists()


def test_unconverged_solve_exit_code(runner, tmp_path):
    result = runner.invoke(main.cli, ["--out", str(tmp_path), "solve", "--c0", "2,0", "--max-iter", "1",
                                      "--tol", "1e-14", *GRID])
    assert result.exit_code == main.EXIT_DIVERGENCE
    assert manifest(tmp_path)["status"] == "solver-divergence"
    assert (tmp_path / "solution.npz").exists()


@pytest.mark.parametrize("passed,code", [(True, 0), (False, 4)])
def test_verify_exit_codes(runner, tmp_path, monkeypatch, passed, code):
    def fake_suite(name, seed=0):
        return SuiteReport(name, [CheckResult("stub", passed, 0.0, 1.0)])

    monkeypatch.setattr("src.workflow.executor.run_suite", fake_suite)
    result = runner.invoke(main.cli, ["--out", str(tmp_path), "verify", "oracle"])
    assert result.exit_code == code
    assert (tmp_path / "verify_oracle.json").exists()


def test_run_reads_experiment_file(runner, tmp_path, write_cfg):
    cfg = write_cfg("moments.cfg", EXPERIMENT="moments", FORCE_SPEC="pair:2,1")
    out = tmp_path / "out"
    result = runner.invoke(main.cli, ["run", "--config", str(cfg), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert manifest(out)["config"]["source"] == str(cfg)

    result = runner.invoke(main.cli, ["run", "moments", "--config", str(cfg), "--out", str(out), "--force",
                                      "lift:1,0,0"])
    assert result.exit_code == 0, result.output
    assert manifest(out)["config"]["values"]["FORCE_SPEC"] == "lift:1,0,0"


def test_run_rejects_mismatched_file(runner, tmp_path, write_cfg):
    cfg = write_cfg("eval.cfg", EXPERIMENT="eval", FIELD_KIND="hamel")
    result = runner.invoke(main.cli, ["--config", str(cfg), "moments", "--out", str(tmp_path)])
    assert result.exit_code == main.EXIT_CONFIG
    assert runner.invoke(main.cli, ["run"]).exit_code == main.EXIT_CONFIG
    assert runner.invoke(main.cli, ["run", "dance"]).exit_code == main.EXIT_CONFIG


def test_check_config(runner):
    result = runner.invoke(main.cli, ["check-config"])
    assert result.exit_code == 0, result.output


def test_log_level_option(runner, tmp_path):
    result = runner.invoke(main.cli, ["--log-level", "warning", "--out", str(tmp_path), "moments",
                                      "--force", "pair:2,1"])
    assert result.exit_code == 0, result.output


@pytest.mark.parametrize("args", [
    ["wake", "--force", "1.5"],
    ["residual", "--field", "wake", "--force", "1,2,3"],
])
def test_bad_force_writes_manifest(runner, tmp_path, args):
    result = runner.invoke(main.cli, ["--out", str(tmp_path), *args])
    assert result.exit_code == main.EXIT_CONFIG
    data = manifest(tmp_path)
    assert data["status"] == "config-error"
    assert data["config"]["values"]["FIELD_PARAMS"] == args[-1]


def test_same_config_gives_identical_csvs(runner, tmp_path):
    for name in ("first", "second"):
        result = runner.invoke(main.cli, ["--out", str(tmp_path / name), "--seed", "11", "solve", "--c0", "0.3,0",
                                          *GRID])
        assert result.exit_code == 0, result.output
    names = sorted(p.name for p in (tmp_path / "first").glob("*.csv"))
    assert "profile.csv" in names
    for name in names:
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes(), name
