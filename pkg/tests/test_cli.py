"""
Tests for the hyperspec-bench command line.
"""

import logging

import pandas as pd
import pytest
from click.testing import CliRunner

from conftest import make_planted_scene
from hyperspec.core.hsi_data import save_cube, save_ground_truth
from main import cli


@pytest.fixture(autouse=True)
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)


@pytest.fixture
def scene_files(tmp_path):
    cube, gt = make_planted_scene(20, 20, 8, seed=5)
    cube_path = save_cube(cube, tmp_path / "scene.hsib")
    gt_path = save_ground_truth(gt, tmp_path / "scene.gt")
    return str(cube_path), str(gt_path)


def test_run_writes_reports(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    out = tmp_path / "out"
    result = CliRunner().invoke(cli, [
        "run", "--cube", cube_path, "--gt", gt_path, "--bands", "2,3",
        "--classifiers", "knn-1,lda-linear", "--no-grid-search", "--levels", "16",
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert "KNN-1" in result.output
    assert (out / "sweep.csv").exists()
    assert (out / "models" / "lda-linear.json").exists()


def test_select_prints_bands(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    result = CliRunner().invoke(cli, [
        "select", "--cube", cube_path, "--gt", gt_path, "--max-bands", "3",
        "--levels", "16", "--out", str(tmp_path / "sel"),
    ])
    assert result.exit_code == 0, result.output
    assert "Accepted" in result.output
    assert (tmp_path / "sel" / "selection_trace.csv").exists()


def test_render_saved_model(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    out = tmp_path / "out"
    runner = CliRunner()
    runner.invoke(cli, [
        "run", "--cube", cube_path, "--gt", gt_path, "--bands", "2",
        "--classifiers", "knn-3", "--no-grid-search", "--no-render-maps", "--out", str(out),
    ])
    target = tmp_path / "knn.ppm"
    result = runner.invoke(cli, [
        "render", "--cube", cube_path, "--gt", gt_path,
        "--model", str(out / "models" / "knn-3.json"), "--out", str(target),
    ])
    assert result.exit_code == 0, result.output
    assert target.read_bytes().startswith(b"P6\n20 20\n255\n")
    assert (tmp_path / "knn_masked.ppm").exists()


def test_config_file_feeds_the_run(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    config = tmp_path / "run.conf"
    config.write_text(
        f"cube={cube_path}\ngt={gt_path}\nbands=2\nclassifiers=lda-diaglinear\n"
        f"grid_search=false\nout={tmp_path / 'from_file'}\n"
    )
    result = CliRunner().invoke(cli, ["run", "--config", str(config)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "from_file" / "summary.csv").exists()


def test_missing_inputs_fail_with_one_line(tmp_path):
    result = CliRunner().invoke(cli, ["run", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "ERROR: missing required configuration: cube, gt" in result.output


def test_broken_cube_reports_error(tmp_path, scene_files):
    _, gt_path = scene_files
    broken = tmp_path / "broken.hsib"
    broken.write_bytes(b"\x00" * 8)
    result = CliRunner().invoke(cli, ["select", "--cube", str(broken), "--gt", gt_path])
    assert result.exit_code == 1
    assert "ERROR:" in result.output
    assert "sidecar" in result.output


def test_unknown_classifier(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    result = CliRunner().invoke(cli, [
        "run", "--cube", cube_path, "--gt", gt_path, "--classifiers", "svm-poly",
        "--out", str(tmp_path),
    ])
    assert result.exit_code == 1
    assert "Unknown classifier" in result.output


def test_run_accepts_max_bands_and_log_level(tmp_path, scene_files):
    cube_path, gt_path = scene_files
    out = tmp_path / "capped"
    result = CliRunner().invoke(cli, [
        "run", "--cube", cube_path, "--gt", gt_path, "--bands", "2,3", "--max-bands", "1",
        "--classifiers", "knn-1", "--no-grid-search", "--levels", "16",
        "--log-level", "warning", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert logging.getLogger().level == logging.WARNING
    sweep = pd.read_csv(out / "sweep.csv")
    assert sweep["bands_used"].tolist() == [1, 1]
    assert sweep["shortfall"].tolist() == [1, 1]
    trace = pd.read_csv(out / "selection_trace.csv")
    assert trace["accepted"].sum() == 1


def test_unknown_log_level_is_rejected(scene_files):
    cube_path, gt_path = scene_files
    result = CliRunner().invoke(cli, ["select", "--cube", cube_path, "--gt", gt_path, "--log-level", "LOUD"])
    assert result.exit_code == 2
