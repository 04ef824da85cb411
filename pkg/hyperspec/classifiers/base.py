"""
Common train/predict contract for the classifiers.

Every trained model remembers the bands it was trained on and, for the
scale-sensitive learners (SVM, KNN, LDA), the per-feature standardization
fitted on the training portion only.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchError, TrainingError
from ..models.hsi_models import LabeledSampleSet
from .specs import ClassifierSpec, spec_to_dict


@dataclass(frozen=True)
class Standardizer:
    """Zero-mean, unit-variance scaling; constant features are only centred."""
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Standardizer":
        return cls(
            mean=np.asarray(data["mean"], dtype=np.float64),
            scale=np.asarray(data["scale"], dtype=np.float64),
        )


def prepare_training_set(
    samples: LabeledSampleSet, standardize: bool
) -> Tuple[np.ndarray, np.ndarray, Optional[Standardizer]]:
    if len(samples) == 0:
        raise TrainingError("training set is empty")
    X = samples.features
    scaler = Standardizer.fit(X) if standardize else None
    if scaler is not None:
        X = scaler.transform(X)
    return X, samples.labels, scaler


class TrainedModel(ABC):
    """
    A fitted classifier.

    Subclasses implement ``_predict_prepared`` on already standardized
    features and the (de)serialization of their parameters.
    """

    family: str = ""

    def __init__(
        self,
        spec: ClassifierSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        standardizer: Optional[Standardizer] = None,
    ):
        self.spec = spec
        self.band_ids = tuple(int(b) for b in band_ids)
        self.classes = np.asarray(classes, dtype=np.int64)
        self.standardizer = standardizer

    @property
    def n_features(self) -> int:
        return len(self.band_ids)

    @property
    def name(self) -> str:
        return self.spec.name

    def _prepare(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise DimensionMismatchError(
                f"{self.name} was trained on {self.n_features} features, got {X.shape[1]}"
            )
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predict class labels for the rows of X."""
        X = self._prepare(X)
        if X.shape[0] == 0:
            return np.empty(0, dtype=np.int64)
        return self._predict_prepared(X)

    def predict_one(self, x: Sequence[float]) -> int:
        return int(self.predict(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

    @abstractmethod
    def _predict_prepared(self, X: np.ndarray) -> np.ndarray:
        """Predict labels for standardized features."""

    @abstractmethod
    def parameters_to_dict(self) -> Dict[str, Any]:
        """JSON-compatible variant parameters."""

    @classmethod
    @abstractmethod
    def from_parts(
        cls,
        spec: ClassifierSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        standardizer: Optional[Standardizer],
        parameters: Dict[str, Any],
    ) -> "TrainedModel":
        """Rebuild a model from its serialized parts."""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "spec": spec_to_dict(self.spec),
            "band_ids": list(self.band_ids),
            "classes": self.classes.tolist(),
            "standardizer": self.standardizer.to_dict() if self.standardizer else None,
            "parameters": self.parameters_to_dict(),
        }
