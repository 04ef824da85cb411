"""
Linear discriminant analysis with a pooled within-class covariance.

Each class is modelled as a Gaussian with its own mean and a covariance
shared by all classes (``linear``) or only its diagonal (``diaglinear``).
A pixel goes to the class with the largest discriminant

    g_c(x) = x·Σ⁻¹μ_c − ½ μ_c·Σ⁻¹μ_c + log prior_c

evaluated through a Cholesky factor of Σ instead of an explicit inverse.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..core.exceptions import TrainingError
from ..models.hsi_models import LabeledSampleSet
from .base import Standardizer, TrainedModel, prepare_training_set
from .specs import LdaMode, LdaSpec

logger = logging.getLogger(__name__)


def pooled_covariance(X: np.ndarray, labels: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Within-class scatter summed over classes, divided by n − C."""
    d = X.shape[1]
    scatter = np.zeros((d, d))
    for c in classes:
        centred = X[labels == c] - X[labels == c].mean(axis=0)
        scatter += centred.T @ centred
    dof = X.shape[0] - classes.size
    return scatter / dof


def _first_failing_dimension(sigma: np.ndarray) -> int:
    """Index of the first dimension whose leading block is not positive definite."""
    for k in range(1, sigma.shape[0] + 1):
        try:
            np.linalg.cholesky(sigma[:k, :k])
        except np.linalg.LinAlgError:
            return k - 1
    return sigma.shape[0] - 1


def _cholesky(sigma: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        dim = _first_failing_dimension(sigma)
        raise TrainingError(
            f"pooled covariance is singular after ridge (dimension {dim})", dimension=dim
        )


class LdaModel(TrainedModel):
    """
    Fitted discriminant.

    Args:
        means: (C, d) class means
        weights: (d, C) Σ⁻¹ μ_cᵀ columns
        intercepts: (C,) −½ μ_c·Σ⁻¹μ_c + log prior_c
        log_priors: (C,) log class frequencies
        covariance: regularized Σ (diagonal matrix in diaglinear mode)
    """

    family = "lda"

    def __init__(
        self,
        spec: LdaSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        means: np.ndarray,
        covariance: np.ndarray,
        log_priors: np.ndarray,
        standardizer: Optional[Standardizer] = None,
    ):
        super().__init__(spec, band_ids, classes, standardizer)
        self.means = np.asarray(means, dtype=np.float64)
        self.covariance = np.asarray(covariance, dtype=np.float64)
        self.log_priors = np.asarray(log_priors, dtype=np.float64)
        factor = _cholesky(self.covariance)
        projected = np.linalg.solve(factor, self.means.T)
        self.weights = np.linalg.solve(factor.T, projected)
        self.intercepts = -0.5 * np.einsum("cd,dc->c", self.means, self.weights) + self.log_priors

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """(n, C) discriminant values for raw feature rows."""
        return self._prepare(X) @ self.weights + self.intercepts

    def _predict_prepared(self, X: np.ndarray) -> np.ndarray:
        scores = X @ self.weights + self.intercepts
        return self.classes[np.argmax(scores, axis=1)]

    def parameters_to_dict(self) -> Dict[str, Any]:
        return {
            "means": self.means.tolist(),
            "covariance": self.covariance.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_parts(cls, spec, band_ids, classes, standardizer, parameters):
        return cls(
            spec,
            band_ids,
            classes,
            parameters["means"],
            parameters["covariance"],
            parameters["log_priors"],
            standardizer,
        )


def lda_fit(
    samples: LabeledSampleSet,
    mode: LdaMode = LdaMode.LINEAR,
    ridge: float = 1e-6,
    standardize: bool = False,
) -> LdaModel:
    """
    Fit class means, the pooled covariance and class priors.

    Raises:
        TrainingError: a class has fewer than two samples, or the covariance
            stays singular after adding ``ridge``·mean(diag) to its diagonal
    """
    spec = LdaSpec(mode=mode, ridge=ridge)
    X, labels, scaler = prepare_training_set(samples, standardize)
    classes, counts = np.unique(labels, return_counts=True)
    small = classes[counts < 2]
    if small.size:
        raise TrainingError(f"LDA needs at least 2 samples per class; class {int(small[0])} has fewer")

    means = np.stack([X[labels == c].mean(axis=0) for c in classes])
    sigma = pooled_covariance(X, labels, classes)
    if spec.mode is LdaMode.DIAGLINEAR:
        sigma = np.diag(np.diag(sigma))
    sigma = sigma + np.eye(sigma.shape[0]) * spec.ridge * np.mean(np.diag(sigma))
    log_priors = np.log(counts / counts.sum())

    model = LdaModel(spec, samples.band_ids, classes, means, sigma, log_priors, scaler)
    logger.debug(f"Fitted {spec.name} on {len(samples)} samples, {classes.size} classes")
    return model
