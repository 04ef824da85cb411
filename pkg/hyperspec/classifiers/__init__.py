"""
Supervised classifiers for labeled hyperspectral pixels.

SVM (SMO, one-vs-one), k-nearest neighbours, linear discriminant analysis
and random forests share the TrainedModel predict contract, cross-validated
grid search and JSON persistence.
"""

from .specs import (
    KernelKind,
    LdaMode,
    SvmSpec,
    KnnSpec,
    LdaSpec,
    RfSpec,
    ClassifierSpec,
    FULL_ROSTER,
    parse_classifier,
    parse_roster,
    default_grid,
    roster_key,
)
from .kernels import KernelParams, kernel_eval, kernel_matrix
from .base import Standardizer, TrainedModel
from .svm import BinarySvm, SvmModel, svm_train_binary, svm_train_multiclass
from .knn import KnnModel, knn_fit, knn_predict
from .lda import LdaModel, lda_fit
from .forest import DecisionTree, ForestModel, best_gini_split, rf_fit, rf_predict
from .model_selection import grid_search_cv, stratified_kfold
from .trainer import load_model, save_model, train_classifier

__all__ = [
    "KernelKind",
    "LdaMode",
    "SvmSpec",
    "KnnSpec",
    "LdaSpec",
    "RfSpec",
    "ClassifierSpec",
    "FULL_ROSTER",
    "parse_classifier",
    "parse_roster",
    "default_grid",
    "roster_key",
    "KernelParams",
    "kernel_eval",
    "kernel_matrix",
    "Standardizer",
    "TrainedModel",
    "BinarySvm",
    "SvmModel",
    "svm_train_binary",
    "svm_train_multiclass",
    "KnnModel",
    "knn_fit",
    "knn_predict",
    "LdaModel",
    "lda_fit",
    "DecisionTree",
    "ForestModel",
    "best_gini_split",
    "rf_fit",
    "rf_predict",
    "grid_search_cv",
    "stratified_kfold",
    "load_model",
    "save_model",
    "train_classifier",
]
