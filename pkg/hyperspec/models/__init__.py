"""
Data models for the hyperspectral benchmark.

This package contains the immutable data structures passed between the
loading, selection, classification and evaluation stages.
"""

from .hsi_models import (
    HsiCube,
    GroundTruthMap,
    QuantizedBand,
    LabeledSampleSet,
    SplitSpec,
)

__all__ = [
    "HsiCube",
    "GroundTruthMap",
    "QuantizedBand",
    "LabeledSampleSet",
    "SplitSpec",
]
