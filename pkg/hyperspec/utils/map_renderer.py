"""
Classification map rendering to binary PPM (P6) images.

Class 0 is black. Class c ≥ 1 gets the fully saturated, full-value HSV
colour with hue (137.508° · c) mod 360, converted to 8-bit RGB with
round-half-up.
"""

import colorsys
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..core.exceptions import DimensionMismatchError, ReportError
from ..models.hsi_models import GroundTruthMap

logger = logging.getLogger(__name__)

GOLDEN_ANGLE_DEGREES = 137.508


def class_color(class_id: int) -> Tuple[int, int, int]:
    if class_id <= 0:
        return (0, 0, 0)
    hue = (GOLDEN_ANGLE_DEGREES * class_id) % 360.0
    rgb = colorsys.hsv_to_rgb(hue / 360.0, 1.0, 1.0)
    return tuple(int(math.floor(channel * 255.0 + 0.5)) for channel in rgb)


def palette(num_classes: int) -> np.ndarray:
    """(num_classes + 1, 3) uint8 lookup table indexed by class id."""
    return np.array([class_color(c) for c in range(num_classes + 1)], dtype=np.uint8)


@dataclass(frozen=True)
class ClassificationMap:
    """Predicted class per pixel; 0 where nothing is shown."""
    height: int
    width: int
    labels: np.ndarray

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if labels.shape != (self.height, self.width):
            raise DimensionMismatchError(
                f"map labels have shape {labels.shape}, expected {(self.height, self.width)}"
            )
        if labels.size and labels.min() < 0:
            raise ValueError("map labels must be non-negative")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_ground_truth(cls, gt: GroundTruthMap) -> "ClassificationMap":
        return cls(gt.height, gt.width, gt.labels)

    def masked(self, gt: GroundTruthMap) -> "ClassificationMap":
        """Copy with every unlabeled ground-truth pixel set to 0."""
        if gt.shape != (self.height, self.width):
            raise DimensionMismatchError(
                f"ground truth is {gt.shape}, map is {(self.height, self.width)}"
            )
        return ClassificationMap(self.height, self.width, np.where(gt.labeled_mask, self.labels, 0))

    def to_rgb(self) -> np.ndarray:
        top = int(self.labels.max()) if self.labels.size else 0
        return palette(top)[self.labels]

    def to_ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.to_rgb()).tobytes()

    def write_ppm(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(self.to_ppm_bytes())
        except OSError as e:
            logger.error(f"Failed to write map {path}: {e}")
            raise ReportError(f"cannot write map {path}: {e}")
        logger.debug(f"Wrote {self.width}x{self.height} map to {path}")
        return path


def read_ppm(path: Union[str, Path]) -> np.ndarray:
    """Pixels of a P6 image written by ``write_ppm`` as an (H, W, 3) array."""
    data = Path(path).read_bytes()
    magic, dims, maxval, payload = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError(f"{path} is not an 8-bit P6 image")
    width, height = (int(v) for v in dims.split())
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
