"""
Tests for stratified folds and cross-validated grid search.
"""

import numpy as np
import pytest

from hyperspec.classifiers.model_selection import grid_search_cv, stratified_kfold
from hyperspec.classifiers.specs import (
    DEFAULT_C_GRID,
    KernelKind,
    KnnSpec,
    LdaSpec,
    RfSpec,
    SvmSpec,
    default_grid,
)
from hyperspec.core.exceptions import TrainingError
from hyperspec.models.hsi_models import LabeledSampleSet


class _ConstantModel:
    def __init__(self, label):
        self.label = label

    def predict(self, X):
        return np.full(len(X), self.label)


def _constant_trainer(spec, samples, standardize):
    """KnnSpec(k) stands for a model that always answers class k."""
    return _ConstantModel(spec.k)


def _refusing_trainer(spec, samples, standardize):
    raise AssertionError("a single candidate must not be trained")


def _labels_only(labels):
    labels = np.asarray(labels)
    return LabeledSampleSet(
        features=np.zeros((labels.size, 1)),
        labels=labels,
        band_ids=(0,),
        num_classes=int(labels.max()),
    )


def test_folds_are_balanced_per_class():
    labels = np.repeat([1, 2, 3], [12, 7, 5])
    assignment = stratified_kfold(labels, folds=5, seed=1)
    for class_id in (1, 2, 3):
        sizes = np.bincount(assignment[labels == class_id], minlength=5)
        assert sizes.max() - sizes.min() <= 1
        assert sizes.sum() == np.sum(labels == class_id)


def test_folds_are_seed_deterministic():
    labels = np.repeat([1, 2], 10)
    np.testing.assert_array_equal(stratified_kfold(labels, 5, seed=7), stratified_kfold(labels, 5, seed=7))


def test_fold_errors():
    with pytest.raises(TrainingError):
        stratified_kfold(np.repeat([1, 2], 5), folds=1)
    with pytest.raises(TrainingError, match="class 2"):
        stratified_kfold(np.array([1, 1, 1, 2, 2]), folds=3)


def test_best_candidate_wins():
    samples = _labels_only(np.repeat([1, 2], [15, 10]))
    chosen = grid_search_cv(samples, [KnnSpec(k=2), KnnSpec(k=1)], folds=5, trainer=_constant_trainer)
    assert chosen == KnnSpec(k=1)


def test_ties_keep_the_first_candidate():
    samples = _labels_only(np.repeat([1, 2], [10, 10]))
    chosen = grid_search_cv(samples, [KnnSpec(k=2), KnnSpec(k=1)], folds=5, trainer=_constant_trainer)
    assert chosen == KnnSpec(k=2)


def test_single_candidate_is_returned_untrained():
    samples = _labels_only(np.repeat([1, 2], 3))
    spec = LdaSpec()
    assert grid_search_cv(samples, [spec], folds=5, trainer=_refusing_trainer) is spec


def test_folds_shrink_to_the_smallest_class(caplog):
    samples = _labels_only(np.repeat([1, 2], [12, 3]))
    with caplog.at_level("WARNING"):
        chosen = grid_search_cv(samples, [KnnSpec(k=2), KnnSpec(k=1)], folds=5, trainer=_constant_trainer)
    assert chosen == KnnSpec(k=1)
    assert "using 3 folds instead of 5" in caplog.text


def test_single_sample_class_skips_cross_validation(caplog):
    samples = _labels_only(np.repeat([1, 2], [12, 1]))
    candidates = [KnnSpec(k=2), KnnSpec(k=1)]
    with caplog.at_level("WARNING"):
        chosen = grid_search_cv(samples, candidates, folds=5, trainer=_refusing_trainer)
    assert chosen is candidates[0]
    assert "without cross-validation" in caplog.text


def test_no_candidates():
    with pytest.raises(TrainingError):
        grid_search_cv(_labels_only(np.repeat([1, 2], 5)), [])


def test_svm_search_on_blobs(blob_set):
    chosen = grid_search_cv(blob_set, default_grid(SvmSpec(kernel=KernelKind.LINEAR)), folds=3, seed=0)
    assert isinstance(chosen, SvmSpec)
    assert chosen.C in DEFAULT_C_GRID


def test_default_grids():
    assert len(default_grid(SvmSpec(kernel=KernelKind.LINEAR))) == 4
    assert len(default_grid(SvmSpec(kernel=KernelKind.RBF))) == 16
    assert len(default_grid(SvmSpec(kernel=KernelKind.SIGMOID))) == 16
    assert default_grid(KnnSpec(k=3)) == [KnnSpec(k=3)]
    assert default_grid(RfSpec()) == [RfSpec()]
