"""
Tests for the brute-force k-nearest-neighbour classifier.
"""

import numpy as np
import pytest

from hyperspec.classifiers.knn import knn_fit, knn_predict, knn_predict_batch
from hyperspec.classifiers.specs import KnnSpec
from hyperspec.core.exceptions import DimensionMismatchError, TrainingError
from hyperspec.models.hsi_models import LabeledSampleSet


def _oracle(train, labels, query, k):
    """Sort by (distance, index), vote, break vote ties by first appearance."""
    distances = [(float(np.sum((row - query) ** 2)), index) for index, row in enumerate(train)]
    nearest = [labels[index] for _, index in sorted(distances)[:k]]
    counts = {}
    for label in nearest:
        counts[label] = counts.get(label, 0) + 1
    top = max(counts.values())
    return next(label for label in nearest if counts[label] == top)


def _sample_set(features, labels):
    features = np.asarray(features, dtype=np.float64)
    return LabeledSampleSet(
        features=features,
        labels=labels,
        band_ids=tuple(range(features.shape[1])),
        num_classes=int(max(labels)),
    )


def test_matches_reference_on_integer_grid():
    rng = np.random.default_rng(8)
    train = rng.integers(0, 5, size=(50, 3)).astype(np.float64)
    labels = rng.integers(1, 5, size=50)
    queries = rng.integers(0, 5, size=(1000, 3)).astype(np.float64)
    for k in (1, 3, 4, 7):
        predicted = knn_predict_batch(train, labels, queries, k)
        expected = [_oracle(train, labels, query, k) for query in queries]
        np.testing.assert_array_equal(predicted, expected)


def test_small_example():
    train = _sample_set([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1, 2, 2])
    assert knn_predict(train, [0.0, 0.4], k=1) == 1
    assert knn_predict(train, [0.0, 0.4], k=3) == 2


def test_distance_tie_goes_to_lower_training_index():
    train = _sample_set([[1.0, 0.0], [-1.0, 0.0]], [3, 1])
    assert knn_predict(train, [0.0, 0.0], k=1) == 3


def test_vote_tie_goes_to_nearest_label():
    train = _sample_set([[0.0, 0.0], [1.0, 0.0]], [2, 1])
    assert knn_predict(train, [0.1, 0.0], k=2) == 2
    assert knn_predict(train, [0.9, 0.0], k=2) == 1


def test_training_order_does_not_matter_without_ties():
    rng = np.random.default_rng(12)
    train = rng.standard_normal((80, 4))
    labels = rng.integers(1, 4, size=80)
    queries = rng.standard_normal((200, 4))
    permutation = rng.permutation(80)
    np.testing.assert_array_equal(
        knn_predict_batch(train, labels, queries, 5),
        knn_predict_batch(train[permutation], labels[permutation], queries, 5),
    )


def test_fitted_model_predicts_training_points(blob_set):
    model = knn_fit(blob_set, KnnSpec(k=1), standardize=True)
    np.testing.assert_array_equal(model.predict(blob_set.features), blob_set.labels)


def test_errors():
    train = _sample_set([[0.0], [1.0]], [1, 2])
    with pytest.raises(TrainingError):
        knn_predict(train, [0.5], k=3)
    with pytest.raises(TrainingError):
        knn_predict_batch(np.empty((0, 1)), np.empty(0), [[0.0]], 1)
    with pytest.raises(DimensionMismatchError):
        knn_predict(train, [0.5, 0.5], k=1)
    with pytest.raises(TrainingError):
        knn_fit(train, KnnSpec(k=5))


def test_three_point_example():
    train = _sample_set([[0.0, 0.0], [0.0, 1.0], [5.0, 5.0]], [1, 1, 2])
    assert knn_predict(train, [0.0, 0.4], k=3) == 1
