"""
Train dispatch and JSON persistence for every classifier family.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Type, Union

from ..core.exceptions import ConfigurationError, ReportError
from ..models.hsi_models import LabeledSampleSet
from .base import Standardizer, TrainedModel
from .forest import ForestModel, rf_fit
from .knn import KnnModel, knn_fit
from .lda import LdaModel, lda_fit
from .specs import ClassifierSpec, KnnSpec, LdaSpec, RfSpec, SvmSpec, spec_from_dict
from .svm import SvmModel, svm_train_multiclass

logger = logging.getLogger(__name__)

MODEL_TYPES: Dict[str, Type[TrainedModel]] = {
    cls.family: cls for cls in (SvmModel, KnnModel, LdaModel, ForestModel)
}


def train_classifier(
    spec: ClassifierSpec,
    samples: LabeledSampleSet,
    standardize: bool = True,
    workers: int = 1,
) -> TrainedModel:
    """
    Train the classifier a specification describes.

    ``standardize`` applies to the scale-sensitive families (SVM, KNN,
    LDA); random forests always see raw features.
    """
    if isinstance(spec, SvmSpec):
        return svm_train_multiclass(samples, spec, standardize=standardize, workers=workers)
    if isinstance(spec, KnnSpec):
        return knn_fit(samples, spec, standardize=standardize)
    if isinstance(spec, LdaSpec):
        return lda_fit(samples, spec.mode, spec.ridge, standardize=standardize)
    if isinstance(spec, RfSpec):
        return rf_fit(samples, spec, workers=workers)
    raise ConfigurationError(f"Unsupported classifier specification: {spec!r}")


def model_from_dict(data: Dict) -> TrainedModel:
    family = data.get("family")
    if family not in MODEL_TYPES:
        raise ConfigurationError(f"Unknown model family: {family!r}")
    standardizer = data.get("standardizer")
    return MODEL_TYPES[family].from_parts(
        spec_from_dict(data["spec"]),
        data["band_ids"],
        data["classes"],
        Standardizer.from_dict(standardizer) if standardizer else None,
        data["parameters"],
    )


def save_model(model: TrainedModel, path: Union[str, Path]) -> Path:
    """Write a model as self-describing JSON."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(model.to_dict(), handle)
    except OSError as e:
        logger.error(f"Failed to save model to {path}: {e}")
        raise ReportError(f"cannot write model file {path}: {e}")
    logger.debug(f"Saved {model.name} to {path}")
    return path


def load_model(path: Union[str, Path]) -> TrainedModel:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Failed to load model from {path}: {e}")
        raise ConfigurationError(f"cannot read model file {path}: {e}")
    return model_from_dict(data)
