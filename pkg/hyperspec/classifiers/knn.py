"""
Brute-force k-nearest-neighbour classifier with Euclidean distance.

Distance ties are broken by training-sample index; vote ties go to the
tied class whose member appears first in the distance ordering.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..core.exceptions import DimensionMismatchError, TrainingError
from ..models.hsi_models import LabeledSampleSet
from .base import Standardizer, TrainedModel, prepare_training_set
from .specs import KnnSpec

logger = logging.getLogger(__name__)

QUERY_CHUNK = 256


def _squared_distances(train: np.ndarray, queries: np.ndarray) -> np.ndarray:
    diff = queries[:, None, :] - train[None, :, :]
    return np.einsum("qnd,qnd->qn", diff, diff)


def _vote(neighbour_labels: np.ndarray) -> int:
    """Majority label; ties resolved by the earliest neighbour among tied labels."""
    values, first_seen, counts = np.unique(
        neighbour_labels, return_index=True, return_counts=True
    )
    tied = counts == counts.max()
    return int(values[tied][np.argmin(first_seen[tied])])


def knn_predict_batch(
    train_features: np.ndarray, train_labels: np.ndarray, queries: np.ndarray, k: int
) -> np.ndarray:
    """
    Classify every row of ``queries`` against the training set.

    Distances are computed from explicit differences in query chunks so
    that exact ties stay exact.
    """
    train_features = np.asarray(train_features, dtype=np.float64)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    n = train_features.shape[0]
    if n == 0:
        raise TrainingError("KNN training set is empty")
    if k > n:
        raise TrainingError(f"k={k} exceeds the {n} training samples")
    if queries.shape[1] != train_features.shape[1]:
        raise DimensionMismatchError(
            f"query has {queries.shape[1]} features, training set has {train_features.shape[1]}"
        )

    chunk = max(1, min(QUERY_CHUNK, (32 * 1024 * 1024) // max(1, n * train_features.shape[1] * 8)))
    predictions = np.empty(queries.shape[0], dtype=np.int64)
    for start in range(0, queries.shape[0], chunk):
        block = queries[start:start + chunk]
        distances = _squared_distances(train_features, block)
        order = np.argsort(distances, axis=1, kind="stable")[:, :k]
        for offset, neighbours in enumerate(order):
            predictions[start + offset] = _vote(train_labels[neighbours])
    return predictions


def knn_predict(train: LabeledSampleSet, query: Sequence[float], k: int) -> int:
    """Label of a single query by majority vote of its k nearest neighbours."""
    query = np.asarray(query, dtype=np.float64).reshape(1, -1)
    return int(knn_predict_batch(train.features, train.labels, query, k)[0])


class KnnModel(TrainedModel):
    """Retains the (optionally standardized) training set."""

    family = "knn"

    def __init__(
        self,
        spec: KnnSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        features: np.ndarray,
        labels: np.ndarray,
        standardizer: Optional[Standardizer] = None,
    ):
        super().__init__(spec, band_ids, classes, standardizer)
        self.features = np.asarray(features, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.int64)

    def _predict_prepared(self, X: np.ndarray) -> np.ndarray:
        return knn_predict_batch(self.features, self.labels, X, self.spec.k)

    def parameters_to_dict(self) -> Dict[str, Any]:
        return {"features": self.features.tolist(), "labels": self.labels.tolist()}

    @classmethod
    def from_parts(cls, spec, band_ids, classes, standardizer, parameters):
        features = np.asarray(parameters["features"], dtype=np.float64).reshape(-1, len(band_ids))
        return cls(spec, band_ids, classes, features, parameters["labels"], standardizer)


def knn_fit(samples: LabeledSampleSet, spec: KnnSpec, standardize: bool = False) -> KnnModel:
    X, labels, scaler = prepare_training_set(samples, standardize)
    if spec.k > len(samples):
        raise TrainingError(f"k={spec.k} exceeds the {len(samples)} training samples")
    logger.debug(f"{spec.name}: retained {len(samples)} training samples")
    return KnnModel(spec, samples.band_ids, np.unique(labels), X, labels, scaler)
