"""
Tests for configuration layering and the experiment settings.
"""

import os
from pathlib import Path

import pytest

from hyperspec.core.exceptions import ConfigurationError
from hyperspec.utils.config import DEFAULT_BAND_GRID, ExperimentConfig, parse_band_counts
from hyperspec.utils.config_manager import ConfigManager


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in list(os.environ):
        if key.startswith("HYPERSPEC_"):
            monkeypatch.delenv(key)


def test_defaults():
    config = ConfigManager().load_config()
    assert config["classifiers"] == "all-paper"
    assert config["levels"] == 256
    assert config["grid_search"] is True
    experiment = ExperimentConfig.from_dict(config)
    assert experiment.out == Path("output")
    assert experiment.band_counts is None


def test_key_value_file_is_typed(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# sweep settings\n"
        "bands = 10,20,30\n"
        "seed=7\n"
        "grid-search = false\n"
        "threshold = 1e-3  # bits\n"
        "classifiers = svm-rbf,knn-3\n"
        "\n"
    )
    config = ConfigManager(str(path)).load_config()
    assert config["seed"] == 7
    assert config["grid_search"] is False
    assert config["threshold"] == pytest.approx(0.001)
    assert config["classifiers"] == "svm-rbf,knn-3"
    experiment = ExperimentConfig.from_dict(config)
    assert experiment.band_counts == (10, 20, 30)
    assert [spec.name for spec in experiment.roster()] == ["SVM-RBF", "KNN-3"]


def test_leading_zero_integers_are_decimal(tmp_path, monkeypatch):
    path = tmp_path / "run.conf"
    path.write_text("seed=010\nworkers=02\nthreshold=-0\n")
    config = ConfigManager(str(path)).load_config()
    assert config["seed"] == 10
    assert config["workers"] == 2
    assert config["threshold"] == 0

    monkeypatch.setenv("HYPERSPEC_LEVELS", "064")
    assert ConfigManager(str(path)).load_config()["levels"] == 64


def test_yaml_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("seed: 3\nclassifiers:\n  - rf\n  - lda-linear\nlevels: 64\n")
    manager = ConfigManager(str(path))
    config = manager.load_config()
    assert config["classifiers"] == "rf,lda-linear"
    assert manager.get_experiment_config().levels == 64


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = tmp_path / "run.conf"
    path.write_text("seed=7\nworkers=2\n")
    monkeypatch.setenv("HYPERSPEC_SEED", "11")
    config = ConfigManager(str(path)).load_config()
    assert config["seed"] == 11
    assert config["workers"] == 2


def test_command_line_wins(tmp_path, monkeypatch):
    path = tmp_path / "run.conf"
    path.write_text("seed=7\n")
    monkeypatch.setenv("HYPERSPEC_SEED", "11")
    config = ConfigManager(str(path)).load_config({"seed": 13, "levels": None})
    assert config["seed"] == 13
    assert config["levels"] == 256


def test_unknown_keys_are_ignored_with_warning(tmp_path, caplog):
    path = tmp_path / "run.conf"
    path.write_text("colour=blue\nseed=1\n")
    with caplog.at_level("WARNING"):
        config = ConfigManager(str(path)).load_config()
    assert "colour" not in config
    assert "colour" in caplog.text


def test_missing_file():
    with pytest.raises(ConfigurationError, match="not found"):
        ConfigManager("/nonexistent/run.conf").load_config()


def test_malformed_line(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("seed 7\n")
    with pytest.raises(ConfigurationError, match="key=value"):
        ConfigManager(str(path)).load_config()


def test_invalid_gest_mode_and_log_level():
    with pytest.raises(ConfigurationError):
        ConfigManager().load_config({"gest_mode": "median"})
    with pytest.raises(ConfigurationError):
        ConfigManager().load_config({"log_level": "chatty"})


def test_log_level_is_normalized():
    manager = ConfigManager()
    manager.load_config({"log_level": "debug", "log_file": "logs/run.log"})
    logging_config = manager.get_logging_config()
    assert logging_config.level == "DEBUG"
    assert logging_config.enable_file


def test_required_fields():
    manager = ConfigManager()
    manager.load_config()
    with pytest.raises(ConfigurationError, match="cube, gt"):
        manager.validate_required_fields(["cube", "gt"])


def test_save_and_reload(tmp_path):
    manager = ConfigManager()
    manager.load_config({"seed": 42, "bands": "5,10"})
    path = tmp_path / "saved.yaml"
    manager.save_config(str(path))
    reloaded = ConfigManager(str(path)).load_config()
    assert reloaded["seed"] == 42
    assert reloaded["bands"] == "5,10"


def test_default_band_grid_is_capped():
    config = ExperimentConfig()
    assert config.resolve_band_counts(200) == DEFAULT_BAND_GRID
    assert config.resolve_band_counts(35) == (10, 20, 30, 35)
    assert config.resolve_band_counts(4) == (4,)
    assert config.selection_config(35).max_bands == 35


def test_explicit_max_bands_wins():
    config = ExperimentConfig(band_counts="5,10", max_bands=3)
    assert config.selection_config(50).max_bands == 3


def test_band_count_validation():
    assert parse_band_counts("10, 20") == (10, 20)
    assert parse_band_counts(5) == (5,)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(band_counts="20,10")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(band_counts="0,10")
    with pytest.raises(ConfigurationError):
        parse_band_counts("ten")


def test_experiment_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(train_fraction=1.0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(cv_folds=1)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(classifiers="svm-rbf,knn-3,svm-rbf")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(classifiers="svm-poly")


def test_full_roster_order():
    names = [spec.name for spec in ExperimentConfig().roster()]
    assert names == [
        "SVM-RBF", "SVM-Linear", "SVM-Sigmoid", "RF", "LDA-Linear",
        "LDA-Diaglinear", "KNN-1", "KNN-3", "KNN-5", "KNN-7",
    ]
