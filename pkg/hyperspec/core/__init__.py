"""
Core components of the hyperspectral benchmark.

This package holds data loading, information-theoretic estimators, the
mutual-information band selector, evaluation metrics and the experiment
driver.
"""

from .exceptions import (
    HyperspecError,
    DataLoadError,
    DimensionMismatchError,
    SplitError,
    SelectionError,
    TrainingError,
    ConfigurationError,
    ReportError,
    EvaluationError,
)

__all__ = [
    "HyperspecError",
    "DataLoadError",
    "DimensionMismatchError",
    "SplitError",
    "SelectionError",
    "TrainingError",
    "ConfigurationError",
    "ReportError",
    "EvaluationError",
]
