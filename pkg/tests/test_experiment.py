from pathlib import Path

import numpy as np
import pytest

from src.utils.experiment import ConfigError, ExperimentConfig, load_experiment, parse_floats, parse_range

EXAMPLES = Path(__file__).resolve().parents[1] / "config" / "experiments"


def test_parse_range():
    assert parse_range("0:1:2") == (0.0, 0.5, 1.0)
    assert parse_range("3:9:0") == (3.0,)
    assert parse_range("1,2.5,4") == (1.0, 2.5, 4.0)
    for bad in ("0:1:x", "0:1:-1", "", "a,b"):
        with pytest.raises(ConfigError):
            parse_range(bad)


def test_parse_floats_accepts_separators():
    assert parse_floats("1e2:1e4") == [100.0, 10000.0]
    assert parse_floats("1;2, 3") == [1.0, 2.0, 3.0]


def test_load_experiment(write_cfg):
    path = write_cfg("sweep.cfg", EXPERIMENT="sweep", SWEEP_PARAM1="0:1:4", SWEEP_PARAM2="0,0.5",
                     ANALYSIS_WINDOW="30,300", SEED=7)
    cfg = load_experiment(path)
    assert cfg.experiment == "sweep"
    assert cfg.get_range("SWEEP_PARAM1") == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert cfg.get_window("ANALYSIS_WINDOW", (1.0, 2.0)) == (30.0, 300.0)
    assert cfg.seed == 7
    assert cfg.sweep_order() == "param1-first"
    assert cfg.to_dict()["source"] == str(path)


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_experiment(tmp_path / "absent.cfg")


@pytest.mark.parametrize("values", [
    {},
    {"EXPERIMENT": "transmogrify"},
    {"EXPERIMENT": "eval", "FIELD_KIND": "hamel", "COLOUR": "red"},
    {"EXPERIMENT": "sweep", "SWEEP_PARAM1": "0:1:2"},
    {"EXPERIMENT": "verify"},
])
def test_invalid_mappings(values):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping(values)


def test_typed_getters():
    cfg = ExperimentConfig.from_mapping({"EXPERIMENT": "eval", "FIELD_KIND": "hamel", "NU": "two",
                                         "N_QUAD": "1.5", "WINDOW": "10,1", "BC_C0": "1,2,3"})
    with pytest.raises(ConfigError):
        cfg.get_float("NU")
    with pytest.raises(ConfigError):
        cfg.get_int("N_QUAD")
    with pytest.raises(ConfigError):
        cfg.get_window("WINDOW", (1.0, 2.0))
    with pytest.raises(ConfigError):
        cfg.get_floats("BC_C0", 2)
    with pytest.raises(ConfigError):
        cfg.get("UNKNOWN_KEY")
    assert cfg.get_float("RADIUS", 10.0) == 10.0


@pytest.mark.parametrize("axis,order,expected", [
    ("param2", None, "param2-first"),
    ("param1", "param1-first", "param1-first"),
    (None, "both", "both"),
])
def test_sweep_axis_alias(axis, order, expected):
    values = {"EXPERIMENT": "sweep", "SWEEP_PARAM1": "0", "SWEEP_PARAM2": "0"}
    if axis:
        values["SWEEP_AXIS"] = axis
    if order:
        values["SWEEP_ORDER"] = order
    assert ExperimentConfig.from_mapping(values).sweep_order() == expected


@pytest.mark.parametrize("axis,order", [("param1", "param2-first"), ("theta", None)])
def test_sweep_axis_conflicts(axis, order):
    values = {"EXPERIMENT": "sweep", "SWEEP_PARAM1": "0", "SWEEP_PARAM2": "0", "SWEEP_AXIS": axis}
    if order:
        values["SWEEP_ORDER"] = order
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping(values).sweep_order()


@pytest.mark.parametrize("path", sorted(EXAMPLES.glob("*.cfg")), ids=lambda p: p.stem)
def test_bundled_experiment_files_load(path):
    cfg = load_experiment(path)
    assert cfg.output_dir
    if cfg.experiment == "sweep":
        assert cfg.get_range("SWEEP_PARAM1")


def test_force_torque_sweep_covers_reference_range():
    cfg = load_experiment(EXAMPLES / "fm_sweep.cfg")
    force, torque = cfg.get_range("SWEEP_PARAM1"), cfg.get_range("SWEEP_PARAM2")
    assert len(force) == len(torque) == 11
    assert force[-1] == pytest.approx(4 * np.pi) and torque[-1] == pytest.approx(8 * np.pi)
    assert (cfg.get_int("GRID_N_R"), cfg.get_int("GRID_N_THETA"), cfg.get_float("GRID_R_OUTER")) == (192, 384, 1e3)
