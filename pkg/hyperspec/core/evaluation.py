"""
Classification Metrics

Confusion matrix and the accuracy figures reported for every classifier:
per-class sensitivity, specificity and precision (one-vs-rest), their macro
averages, overall accuracy, Cohen's kappa and wall-clock timing.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..models.hsi_models import LabeledSampleSet
from .exceptions import DimensionMismatchError, EvaluationError

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["sensitivity", "specificity", "precision", "oa", "kappa"]
PER_CLASS_COLUMNS = [
    "class_id", "tp", "tn", "fp", "fn",
    "sensitivity", "specificity", "precision", "degenerate",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes, both 1-based ids."""
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise EvaluationError(f"confusion matrix must be square, got shape {counts.shape}")
        if (counts < 0).any():
            raise EvaluationError("confusion matrix entries must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def num_classes(self) -> int:
        return int(self.counts.shape[0])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def present_classes(self) -> List[int]:
        """Class ids with at least one true sample."""
        return [int(c) + 1 for c in np.flatnonzero(self.counts.sum(axis=1) > 0)]


def confusion_matrix(
    truth: Sequence[int], predicted: Sequence[int], num_classes: int
) -> ConfusionMatrix:
    truth = np.asarray(truth, dtype=np.int64).ravel()
    predicted = np.asarray(predicted, dtype=np.int64).ravel()
    if truth.shape != predicted.shape:
        raise EvaluationError(
            f"{truth.size} true labels but {predicted.size} predictions"
        )
    if truth.size == 0:
        raise EvaluationError("cannot build a confusion matrix from zero samples")
    for name, labels in (("true", truth), ("predicted", predicted)):
        if labels.min() < 1 or labels.max() > num_classes:
            raise EvaluationError(f"{name} labels must lie in [1, {num_classes}]")
    flat = (truth - 1) * num_classes + (predicted - 1)
    counts = np.bincount(flat, minlength=num_classes * num_classes)
    return ConfusionMatrix(counts.reshape(num_classes, num_classes))


def per_class_binary_counts(cm: ConfusionMatrix, class_id: int) -> Tuple[int, int, int, int]:
    """One-vs-rest (TP, TN, FP, FN) for a 1-based class id."""
    if not 1 <= class_id <= cm.num_classes:
        raise EvaluationError(f"class {class_id} outside [1, {cm.num_classes}]")
    c = class_id - 1
    tp = int(cm.counts[c, c])
    fn = int(cm.counts[c, :].sum()) - tp
    fp = int(cm.counts[:, c].sum()) - tp
    tn = cm.total - tp - fn - fp
    return tp, tn, fp, fn


def _ratio(numerator: int, denominator: int) -> Tuple[float, bool]:
    if denominator == 0:
        return 0.0, True
    return numerator / denominator, False


def sensitivity(tp: int, fn: int) -> float:
    return _ratio(tp, tp + fn)[0]


def specificity(tn: int, fp: int) -> float:
    return _ratio(tn, tn + fp)[0]


def precision(tp: int, fp: int) -> float:
    return _ratio(tp, tp + fp)[0]


def overall_accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise EvaluationError("overall accuracy of an empty confusion matrix")
    return float(np.trace(cm.counts)) / cm.total


def chance_agreement(cm: ConfusionMatrix) -> float:
    """p_e = Σ_c row_c·col_c / total²."""
    if cm.total == 0:
        raise EvaluationError("chance agreement of an empty confusion matrix")
    rows = cm.counts.sum(axis=1).astype(np.float64)
    cols = cm.counts.sum(axis=0).astype(np.float64)
    return float(rows @ cols) / float(cm.total) ** 2


def cohen_kappa_details(cm: ConfusionMatrix) -> Tuple[float, bool]:
    """Kappa and whether it fell back to the degenerate p_e = 1 convention."""
    p_o = overall_accuracy(cm)
    p_e = chance_agreement(cm)
    if p_e >= 1.0:
        return (1.0 if p_o >= 1.0 else 0.0), True
    return (p_o - p_e) / (1.0 - p_e), False


def cohen_kappa(cm: ConfusionMatrix) -> float:
    return cohen_kappa_details(cm)[0]


@dataclass(frozen=True)
class ClassMetrics:
    class_id: int
    tp: int
    tn: int
    fp: int
    fn: int
    sensitivity: float
    specificity: float
    precision: float
    degenerate: Tuple[str, ...] = ()

    @classmethod
    def from_matrix(cls, cm: ConfusionMatrix, class_id: int) -> "ClassMetrics":
        tp, tn, fp, fn = per_class_binary_counts(cm, class_id)
        sens, sens_flag = _ratio(tp, tp + fn)
        spec, spec_flag = _ratio(tn, tn + fp)
        prec, prec_flag = _ratio(tp, tp + fp)
        flags = tuple(
            name for name, flagged in
            (("sensitivity", sens_flag), ("specificity", spec_flag), ("precision", prec_flag))
            if flagged
        )
        return cls(class_id, tp, tn, fp, fn, sens, spec, prec, flags)

    def to_row(self) -> Dict[str, Any]:
        return {
            "class_id": self.class_id,
            "tp": self.tp,
            "tn": self.tn,
            "fp": self.fp,
            "fn": self.fn,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "precision": self.precision,
            "degenerate": ";".join(self.degenerate),
        }


@dataclass(frozen=True)
class EvalReport:
    """
    Metrics of one classifier on one test set.

    Macro sensitivity, specificity and precision are unweighted means over
    the classes present in the test set, which are exactly the classes
    listed in ``per_class``.
    """
    confusion: ConfusionMatrix
    per_class: Tuple[ClassMetrics, ...]
    sensitivity: float
    specificity: float
    precision: float
    oa: float
    kappa: float
    kappa_degenerate: bool = False
    train_seconds: float = 0.0
    predict_seconds: float = 0.0
    predictions: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def total_seconds(self) -> float:
        return self.train_seconds + self.predict_seconds

    def to_row(self, include_timing: bool = False) -> Dict[str, Any]:
        row = {
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "precision": self.precision,
            "oa": self.oa,
            "kappa": self.kappa,
        }
        if include_timing:
            row["time"] = self.total_seconds
        return row


def build_report(
    cm: ConfusionMatrix, train_seconds: float = 0.0, predict_seconds: float = 0.0, predictions=None
) -> EvalReport:
    per_class = tuple(ClassMetrics.from_matrix(cm, c) for c in cm.present_classes())
    kappa, kappa_degenerate = cohen_kappa_details(cm)
    for metrics in per_class:
        if metrics.degenerate:
            logger.warning(
                f"Class {metrics.class_id}: zero denominator for {', '.join(metrics.degenerate)}; "
                f"reported as 0"
            )
    if kappa_degenerate:
        logger.warning("Chance agreement is 1; kappa reported by the degenerate convention")
    return EvalReport(
        confusion=cm,
        per_class=per_class,
        sensitivity=float(np.mean([m.sensitivity for m in per_class])),
        specificity=float(np.mean([m.specificity for m in per_class])),
        precision=float(np.mean([m.precision for m in per_class])),
        oa=overall_accuracy(cm),
        kappa=kappa,
        kappa_degenerate=kappa_degenerate,
        train_seconds=train_seconds,
        predict_seconds=predict_seconds,
        predictions=predictions,
    )


def evaluate(model, test: LabeledSampleSet, train_seconds: float = 0.0) -> EvalReport:
    """
    Predict every test sample and compute all metrics.

    Args:
        model: a TrainedModel
        test: held-out samples over the model's bands
        train_seconds: wall-clock training time measured by the caller

    Raises:
        DimensionMismatchError: the test features do not match the model
    """
    if test.n_features != model.n_features:
        raise DimensionMismatchError(
            f"{model.name} expects {model.n_features} features, test set has {test.n_features}"
        )
    start = time.perf_counter()
    predictions = model.predict(test.features)
    predict_seconds = time.perf_counter() - start

    cm = confusion_matrix(test.labels, predictions, test.num_classes)
    report = build_report(cm, train_seconds, predict_seconds, predictions)
    logger.debug(
        f"{model.name}: OA={report.oa:.4f} kappa={report.kappa:.4f} "
        f"(train {train_seconds:.3f}s, predict {predict_seconds:.3f}s)"
    )
    return report
