"""
Cross-validated hyperparameter search on the training portion.
"""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..core.exceptions import TrainingError
from ..models.hsi_models import LabeledSampleSet
from .base import TrainedModel
from .specs import ClassifierSpec

logger = logging.getLogger(__name__)

Trainer = Callable[[ClassifierSpec, LabeledSampleSet, bool], TrainedModel]


def stratified_kfold(labels: np.ndarray, folds: int, seed: int = 0) -> np.ndarray:
    """
    Fold index for every sample.

    Classes are visited in ascending order; the members of each class are
    shuffled with a seeded generator and dealt round-robin to the folds, so
    every fold holds either floor or ceil of n_c/folds samples of class c.

    Raises:
        TrainingError: folds < 2 or some class has fewer samples than folds
    """
    labels = np.asarray(labels)
    if folds < 2:
        raise TrainingError(f"cross-validation needs at least 2 folds, got {folds}")
    rng = np.random.default_rng(seed)
    assignment = np.empty(labels.shape[0], dtype=np.int64)
    for class_id in np.unique(labels):
        members = np.flatnonzero(labels == class_id)
        if members.size < folds:
            raise TrainingError(
                f"class {int(class_id)} has {members.size} training samples, "
                f"fewer than the {folds} folds"
            )
        shuffled = rng.permutation(members)
        assignment[shuffled] = np.arange(shuffled.size) % folds
    return assignment


def cross_val_accuracy(
    samples: LabeledSampleSet,
    spec: ClassifierSpec,
    assignment: np.ndarray,
    folds: int,
    trainer: Trainer,
    standardize: bool,
) -> float:
    """Mean fold overall accuracy of one candidate."""
    scores = []
    for fold in range(folds):
        held_out = assignment == fold
        train = samples.subset(np.flatnonzero(~held_out))
        valid = samples.subset(np.flatnonzero(held_out))
        model = trainer(spec, train, standardize)
        scores.append(float(np.mean(model.predict(valid.features) == valid.labels)))
    return float(np.mean(scores))


def grid_search_cv(
    samples: LabeledSampleSet,
    candidates: Sequence[ClassifierSpec],
    folds: int = 5,
    seed: int = 0,
    standardize: bool = True,
    trainer: Optional[Trainer] = None,
) -> ClassifierSpec:
    """
    Pick the candidate with the best mean fold OA.

    All candidates share one fold assignment. Ties keep the candidate that
    comes first in ``candidates``; a single candidate is returned without
    any training.

    ``folds`` is lowered to the size of the smallest class when that class
    is too small to appear in every fold. A class with a single training
    sample leaves nothing to cross-validate, so the first candidate is
    returned.
    """
    candidates: List[ClassifierSpec] = list(candidates)
    if not candidates:
        raise TrainingError("grid search needs at least one candidate")
    if len(candidates) == 1:
        return candidates[0]
    if trainer is None:
        from .trainer import train_classifier as trainer

    smallest = min(samples.class_counts().values())
    if smallest < 2:
        logger.warning(
            f"A class has only {smallest} training sample; keeping {candidates[0]} without cross-validation"
        )
        return candidates[0]
    if smallest < folds:
        logger.warning(f"Smallest class has {smallest} training samples; using {smallest} folds instead of {folds}")
        folds = smallest

    assignment = stratified_kfold(samples.labels, folds, seed)
    best_spec, best_score = candidates[0], -np.inf
    for spec in candidates:
        score = cross_val_accuracy(samples, spec, assignment, folds, trainer, standardize)
        logger.debug(f"CV {spec}: mean OA {score:.4f}")
        if score > best_score:
            best_spec, best_score = spec, score
    logger.info(f"Grid search chose {best_spec} (mean fold OA {best_score:.4f})")
    return best_spec
