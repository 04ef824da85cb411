"""
Hyperspectral Data Access

Loading and saving of band-sequential cubes and ground-truth rasters,
per-band quantization for histogram estimators, labeled-sample extraction
and the seeded stratified train/test split.

On-disk formats:
    <name>.hsib       raw little-endian float32, band-sequential
    <name>.hsib.json  {"height": H, "width": W, "bands": B,
                       "dtype": "f32le", "order": "bsq"}
    <name>.gt         raw little-endian uint16, row-major
    <name>.gt.json    {"height": H, "width": W}
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np

from ..models.hsi_models import (
    GroundTruthMap,
    HsiCube,
    LabeledSampleSet,
    QuantizedBand,
    SplitSpec,
)
from .exceptions import DataLoadError, DimensionMismatchError, SplitError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CUBE_DTYPE = np.dtype("<f4")
GT_DTYPE = np.dtype("<u2")
DEFAULT_LEVELS = 256


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def _read_sidecar(path: Path, required: Sequence[str]) -> Dict[str, Any]:
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        raise DataLoadError("sidecar header not found", path=str(sidecar))
    try:
        header = json.loads(sidecar.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise DataLoadError(f"garbled sidecar header: {e}", path=str(sidecar))
    if not isinstance(header, dict):
        raise DataLoadError("sidecar header must be a JSON object", path=str(sidecar))

    missing = [key for key in required if key not in header]
    if missing:
        raise DataLoadError(f"sidecar header lacks keys {missing}", path=str(sidecar))
    for key in ("height", "width", "bands"):
        if key in required:
            value = header[key]
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise DataLoadError(
                    f"sidecar field '{key}' must be a positive integer, got {value!r}",
                    path=str(sidecar),
                )
    return header


def _read_payload(path: Path, dtype: np.dtype, expected_items: int) -> np.ndarray:
    if not path.exists():
        raise DataLoadError("payload file not found", path=str(path))
    raw = path.read_bytes()
    expected_bytes = expected_items * dtype.itemsize
    if len(raw) != expected_bytes:
        raise DataLoadError(
            f"payload size mismatch: header implies {expected_bytes} bytes, "
            f"file holds {len(raw)}",
            path=str(path),
        )
    return np.frombuffer(raw, dtype=dtype).copy()


def load_cube(path: PathLike) -> HsiCube:
    """
    Load a band-sequential float32 cube and its JSON sidecar.

    Args:
        path: Path to the ``.hsib`` payload; the header is ``<path>.json``

    Returns:
        HsiCube matching the header dimensions

    Raises:
        DataLoadError: missing or garbled header, payload size mismatch,
            or a non-finite sample (the error names its byte offset)
    """
    path = Path(path)
    header = _read_sidecar(path, ("height", "width", "bands"))
    if header.get("dtype", "f32le") != "f32le":
        raise DataLoadError(f"unsupported dtype {header['dtype']!r}", path=str(path))
    if header.get("order", "bsq") != "bsq":
        raise DataLoadError(f"unsupported sample order {header['order']!r}", path=str(path))

    height, width, bands = header["height"], header["width"], header["bands"]
    values = _read_payload(path, CUBE_DTYPE, height * width * bands)

    non_finite = np.flatnonzero(~np.isfinite(values))
    if non_finite.size:
        offset = int(non_finite[0]) * CUBE_DTYPE.itemsize
        raise DataLoadError("non-finite sample", path=str(path), byte_offset=offset)

    cube = HsiCube(height=height, width=width, bands=bands, data=values)
    logger.info(f"Loaded cube {path.name}: {height}x{width} pixels, {bands} bands")
    return cube


def save_cube(cube: HsiCube, path: PathLike) -> Path:
    """Write ``cube`` as a ``.hsib`` payload plus JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(cube.data.astype(CUBE_DTYPE).tobytes(order="C"))
    header = {
        "height": cube.height,
        "width": cube.width,
        "bands": cube.bands,
        "dtype": "f32le",
        "order": "bsq",
    }
    _sidecar_path(path).write_text(json.dumps(header), encoding="utf-8")
    logger.debug(f"Saved cube to {path}")
    return path


def load_ground_truth(path: PathLike, expected_dims: Tuple[int, int] = None) -> GroundTruthMap:
    """
    Load a uint16 ground-truth raster and its JSON sidecar.

    Classes between 1 and the largest label that never occur are reported
    in ``GroundTruthMap.empty_classes`` and logged as warnings.

    Raises:
        DataLoadError: missing or garbled header, payload size mismatch
        DimensionMismatchError: sidecar dimensions differ from ``expected_dims``
    """
    path = Path(path)
    header = _read_sidecar(path, ("height", "width"))
    height, width = header["height"], header["width"]
    if expected_dims is not None and (height, width) != tuple(expected_dims):
        raise DimensionMismatchError(
            f"{path}: ground truth is {height}x{width}, expected "
            f"{expected_dims[0]}x{expected_dims[1]}"
        )

    values = _read_payload(path, GT_DTYPE, height * width)
    gt = GroundTruthMap(height=height, width=width, labels=values.astype(np.int64))

    for class_id in gt.empty_classes:
        logger.warning(f"class {class_id} empty in {path.name}")
    logger.info(f"Loaded ground truth {path.name}: {gt.num_classes} classes")
    logger.debug(f"Labeled pixels per class: {gt.class_counts()}")
    return gt


def save_ground_truth(gt: GroundTruthMap, path: PathLike) -> Path:
    """Write ``gt`` as a uint16 ``.gt`` payload plus JSON sidecar."""
    path = Path(path)
    if gt.num_classes > np.iinfo(GT_DTYPE).max:
        raise ValueError(f"{gt.num_classes} classes do not fit in uint16 labels")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(gt.labels.astype(GT_DTYPE).tobytes(order="C"))
    header = {"height": gt.height, "width": gt.width}
    _sidecar_path(path).write_text(json.dumps(header), encoding="utf-8")
    logger.debug(f"Saved ground truth to {path}")
    return path


def quantize_values(values: np.ndarray, levels: int = DEFAULT_LEVELS) -> np.ndarray:
    """
    Min-max quantize an array to integer codes in [0, levels-1].

    code = floor((v - min) / (max - min) * levels), clamped to the top
    level; a constant array maps to code 0 everywhere.
    """
    if levels < 2:
        raise ValueError(f"levels must be at least 2, got {levels}")
    values = np.asarray(values, dtype=np.float64)
    low = values.min()
    high = values.max()
    if high <= low:
        return np.zeros(values.shape, dtype=np.int64)
    codes = np.floor((values - low) / (high - low) * levels).astype(np.int64)
    return np.clip(codes, 0, levels - 1)


def quantize_band(cube: HsiCube, band: int, levels: int = DEFAULT_LEVELS) -> QuantizedBand:
    """Quantize one band against its own extremes."""
    if not 0 <= band < cube.bands:
        raise IndexError(f"Band {band} out of range [0, {cube.bands})")
    codes = quantize_values(cube.band(band), levels)
    return QuantizedBand(height=cube.height, width=cube.width, levels=levels, codes=codes)


def check_dimensions(cube: HsiCube, gt: GroundTruthMap) -> None:
    if cube.shape != gt.shape:
        raise DimensionMismatchError(
            f"cube is {cube.height}x{cube.width} but ground truth is "
            f"{gt.height}x{gt.width}"
        )


def extract_labeled_samples(
    cube: HsiCube, gt: GroundTruthMap, band_ids: Sequence[int]
) -> LabeledSampleSet:
    """
    Collect one sample per labeled pixel, in row-major pixel order.

    Feature vectors hold the raw (unquantized) values at ``band_ids``.
    """
    band_ids = [int(b) for b in band_ids]
    if not band_ids:
        raise ValueError("band_ids must not be empty")
    if len(set(band_ids)) != len(band_ids):
        raise ValueError(f"band_ids contain duplicates: {band_ids}")
    check_dimensions(cube, gt)

    flat_labels = gt.labels.ravel()
    pixel_indices = np.flatnonzero(gt.labeled_mask.ravel())
    if pixel_indices.size == 0:
        raise SplitError("no labeled pixels")

    features = cube.pixels(band_ids)[pixel_indices]
    samples = LabeledSampleSet(
        features=features,
        labels=flat_labels[pixel_indices],
        band_ids=tuple(band_ids),
        num_classes=gt.num_classes,
        pixel_indices=pixel_indices,
    )
    logger.debug(f"Extracted {len(samples)} labeled samples over {len(band_ids)} bands")
    return samples


def split_indices(labels: np.ndarray, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Seeded per-class partition of sample positions.

    Each class c with n_c samples sends ceil(n_c * train_fraction) of them,
    picked by a seeded shuffle, to the training side. Classes are visited in
    ascending label order so the result depends only on (labels, spec).
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(spec.seed)
    train_parts, test_parts = [], []
    for class_id in np.unique(labels):
        members = np.flatnonzero(labels == class_id)
        if members.size < 2:
            raise SplitError(
                f"class {int(class_id)} has {members.size} sample(s); at least 2 are required",
                class_id=int(class_id),
            )
        n_train = math.ceil(members.size * spec.train_fraction - 1e-9)
        shuffled = rng.permutation(members)
        train_parts.append(shuffled[:n_train])
        test_parts.append(shuffled[n_train:])

    train = np.sort(np.concatenate(train_parts)) if train_parts else np.empty(0, np.int64)
    test = np.sort(np.concatenate(test_parts)) if test_parts else np.empty(0, np.int64)
    return train, test


def stratified_split(
    samples: LabeledSampleSet, spec: SplitSpec
) -> Tuple[LabeledSampleSet, LabeledSampleSet]:
    """Split a sample set into disjoint train and test sets per class."""
    if len(samples) == 0:
        raise SplitError("no labeled pixels")
    train_idx, test_idx = split_indices(samples.labels, spec)
    train, test = samples.subset(train_idx), samples.subset(test_idx)
    logger.info(
        f"Stratified split (fraction={spec.train_fraction}, seed={spec.seed}): "
        f"{len(train)} train / {len(test)} test samples"
    )
    logger.debug(f"Training samples per class: {train.class_counts()}")
    return train, test
