"""
Hyperspectral Data Models

This module defines the data structures shared by every stage of the
benchmark: the radiance cube, the ground-truth raster, quantized bands,
labeled sample sets and the train/test split specification.

All models are immutable once constructed; their arrays are marked
read-only so they can be shared freely between worker threads.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class HsiCube:
    """
    H×W×B radiance cube stored band-sequential.

    ``data`` has shape (bands, height, width): band 0's full row-major
    block first, then band 1, and so on. Samples are float32, matching
    the on-disk payload.
    """
    height: int
    width: int
    bands: int
    data: np.ndarray

    def __post_init__(self):
        if self.height < 1 or self.width < 1 or self.bands < 1:
            raise ValueError(
                f"Cube dimensions must be positive, got "
                f"{self.height}x{self.width}x{self.bands}"
            )
        data = np.array(self.data, dtype=np.float32, order="C", copy=True)
        if data.size != self.height * self.width * self.bands:
            raise ValueError(
                f"Cube payload holds {data.size} samples, expected "
                f"{self.height * self.width * self.bands}"
            )
        data = data.reshape(self.bands, self.height, self.width)
        if not np.all(np.isfinite(data)):
            bad = int(np.flatnonzero(~np.isfinite(data.ravel()))[0])
            raise ValueError(f"Cube sample {bad} is not finite")
        object.__setattr__(self, "data", _frozen(data))

    @classmethod
    def from_array(cls, array: np.ndarray, layout: str = "bsq") -> "HsiCube":
        """
        Build a cube from a 3-D array.

        Args:
            array: (bands, height, width) when layout is "bsq",
                (height, width, bands) when layout is "hwb"
            layout: memory layout of ``array``
        """
        array = np.asarray(array)
        if array.ndim != 3:
            raise ValueError(f"Expected a 3-D array, got shape {array.shape}")
        if layout == "hwb":
            array = np.transpose(array, (2, 0, 1))
        elif layout != "bsq":
            raise ValueError(f"Unknown cube layout: {layout}")
        bands, height, width = array.shape
        return cls(height=height, width=width, bands=bands, data=array)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    def band(self, index: int) -> np.ndarray:
        """Return one band as an H×W view."""
        if not 0 <= index < self.bands:
            raise IndexError(f"Band {index} out of range [0, {self.bands})")
        return self.data[index]

    def pixels(self, band_ids: Sequence[int]) -> np.ndarray:
        """Return an (H·W)×len(band_ids) float64 matrix in row-major pixel order."""
        ids = list(band_ids)
        for index in ids:
            if not 0 <= index < self.bands:
                raise IndexError(f"Band {index} out of range [0, {self.bands})")
        return self.data[ids].reshape(len(ids), -1).T.astype(np.float64)


@dataclass(frozen=True)
class GroundTruthMap:
    """
    Per-pixel class raster; label 0 marks unlabeled pixels.

    ``num_classes`` is the largest label present. Labels between 1 and
    ``num_classes`` that never occur are listed in ``empty_classes``.
    """
    height: int
    width: int
    labels: np.ndarray
    num_classes: int = 0
    empty_classes: Tuple[int, ...] = ()

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.size != self.height * self.width:
            raise ValueError(
                f"Ground truth holds {labels.size} labels, expected "
                f"{self.height * self.width}"
            )
        if labels.size and labels.min() < 0:
            raise ValueError("Ground truth contains negative labels")
        labels = labels.astype(np.int64).reshape(self.height, self.width)
        num_classes = int(labels.max()) if labels.size else 0
        present = set(np.unique(labels[labels > 0]).tolist())
        empty = tuple(c for c in range(1, num_classes + 1) if c not in present)
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "num_classes", num_classes)
        object.__setattr__(self, "empty_classes", empty)

    @classmethod
    def from_array(cls, labels: np.ndarray) -> "GroundTruthMap":
        labels = np.asarray(labels)
        if labels.ndim != 2:
            raise ValueError(f"Expected a 2-D label raster, got shape {labels.shape}")
        return cls(height=labels.shape[0], width=labels.shape[1], labels=labels)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def labeled_mask(self) -> np.ndarray:
        return self.labels > 0

    def class_counts(self) -> Dict[int, int]:
        values, counts = np.unique(self.labels[self.labels > 0], return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


@dataclass(frozen=True)
class QuantizedBand:
    """Integer codes in [0, levels-1] for one band."""
    height: int
    width: int
    levels: int
    codes: np.ndarray

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64).reshape(self.height, self.width)
        if codes.size and (codes.min() < 0 or codes.max() >= self.levels):
            raise ValueError(f"Quantized codes fall outside [0, {self.levels - 1}]")
        object.__setattr__(self, "codes", _frozen(codes))


@dataclass(frozen=True)
class LabeledSampleSet:
    """
    Flattened (feature vector, label) pairs over a list of selected bands.

    ``pixel_indices`` records the row-major pixel each sample came from so
    predictions can be placed back on the image grid.
    """
    features: np.ndarray
    labels: np.ndarray
    band_ids: Tuple[int, ...]
    num_classes: int
    pixel_indices: np.ndarray = field(default=None)

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64, copy=True)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        labels = np.array(self.labels, dtype=np.int64, copy=True).ravel()
        band_ids = tuple(int(b) for b in self.band_ids)
        if features.shape[0] != labels.shape[0]:
            raise ValueError(
                f"{features.shape[0]} feature vectors but {labels.shape[0]} labels"
            )
        if features.shape[1] != len(band_ids):
            raise ValueError(
                f"Feature vectors have length {features.shape[1]}, "
                f"expected {len(band_ids)} (one per band id)"
            )
        if labels.size and (labels.min() < 1 or labels.max() > self.num_classes):
            raise ValueError(f"Sample labels must lie in [1, {self.num_classes}]")
        if self.pixel_indices is None:
            pixel_indices = np.arange(labels.shape[0], dtype=np.int64)
        else:
            pixel_indices = np.array(self.pixel_indices, dtype=np.int64, copy=True).ravel()
        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "band_ids", band_ids)
        object.__setattr__(self, "pixel_indices", _frozen(pixel_indices))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_features(self) -> int:
        return len(self.band_ids)

    def classes(self) -> List[int]:
        return [int(c) for c in np.unique(self.labels)]

    def class_counts(self) -> Dict[int, int]:
        values, counts = np.unique(self.labels, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def subset(self, indices: Sequence[int]) -> "LabeledSampleSet":
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledSampleSet(
            features=self.features[indices],
            labels=self.labels[indices],
            band_ids=self.band_ids,
            num_classes=self.num_classes,
            pixel_indices=self.pixel_indices[indices],
        )

    def select_bands(self, band_ids: Sequence[int]) -> "LabeledSampleSet":
        """Restrict the feature columns to a subset of the current bands."""
        positions = [self.band_ids.index(int(b)) for b in band_ids]
        return LabeledSampleSet(
            features=self.features[:, positions],
            labels=self.labels,
            band_ids=tuple(band_ids),
            num_classes=self.num_classes,
            pixel_indices=self.pixel_indices,
        )


@dataclass(frozen=True)
class SplitSpec:
    """Seeded per-class train/test split settings."""
    train_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(
                f"train_fraction must lie strictly between 0 and 1, got {self.train_fraction}"
            )
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
