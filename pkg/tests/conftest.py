"""
Shared fixtures: seeded synthetic cubes, ground truths and sample sets.
"""

import numpy as np
import pytest

from hyperspec.models.hsi_models import GroundTruthMap, HsiCube, LabeledSampleSet


def make_blobs(centers, n_per_class=30, spread=0.3, seed=0):
    """Gaussian blobs around ``centers``; class c+1 belongs to centers[c]."""
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=np.float64)
    features = np.concatenate(
        [center + spread * rng.standard_normal((n_per_class, centers.shape[1])) for center in centers]
    )
    labels = np.repeat(np.arange(1, len(centers) + 1), n_per_class)
    return LabeledSampleSet(
        features=features,
        labels=labels,
        band_ids=tuple(range(centers.shape[1])),
        num_classes=len(centers),
    )


@pytest.fixture
def blob_set():
    """Three well separated 2-D blobs, 30 samples each."""
    return make_blobs([[0.0, 0.0], [5.0, 5.0], [0.0, 6.0]], n_per_class=30, spread=0.4, seed=1)


@pytest.fixture
def two_blob_set():
    """Two separated 2-D blobs, 100 samples each."""
    return make_blobs([[0.0, 0.0], [4.0, 4.0]], n_per_class=100, spread=0.5, seed=2)


@pytest.fixture
def gt_copy_cube():
    """
    Three bands over a 4-class, fully labeled 20x20 scene: an exact copy of
    the ground truth, a duplicate of that copy and uniform noise.
    """
    rng = np.random.default_rng(3)
    labels = rng.integers(1, 5, size=(20, 20))
    gt = GroundTruthMap.from_array(labels)
    copy = labels.astype(np.float32)
    noise = rng.random((20, 20)).astype(np.float32) * 4.0
    cube = HsiCube.from_array(np.stack([copy, copy, noise]), layout="bsq")
    return cube, gt


@pytest.fixture
def complementary_cube():
    """
    Two bands that each separate only half of a 4-class scene: band 0 splits
    {1,2} from {3,4}, band 1 splits {1,3} from {2,4}. Their mean separates
    all four classes.
    """
    rng = np.random.default_rng(4)
    labels = rng.integers(1, 5, size=(16, 16))
    band_a = np.where(labels >= 3, 1.0, 0.0)
    band_b = np.where(labels % 2 == 0, 2.0, 0.0)
    cube = HsiCube.from_array(np.stack([band_a, band_b]).astype(np.float32), layout="bsq")
    return cube, GroundTruthMap.from_array(labels)


def make_planted_scene(height=30, width=30, bands=20, seed=7):
    """
    Four classes planted in the image quadrants with some unlabeled pixels.

    Every band carries the class level (0..3) times a band weight plus
    Gaussian noise, so averaging bands sharpens the class signal.
    """
    rng = np.random.default_rng(seed)
    rows, cols = np.mgrid[0:height, 0:width]
    labels = 1 + (rows >= height // 2) * 2 + (cols >= width // 2)
    unlabeled = (rows + cols) % 7 == 0
    weights = 1.0 + 0.5 * rng.random(bands)
    levels = (labels - 1).astype(np.float64)
    data = weights[:, None, None] * levels[None] + 0.25 * rng.standard_normal((bands, height, width))
    gt_labels = np.where(unlabeled, 0, labels)
    return HsiCube.from_array(data.astype(np.float32), layout="bsq"), GroundTruthMap.from_array(gt_labels)


@pytest.fixture
def planted_scene():
    """Seeded 30x30x20 cube with four planted classes."""
    return make_planted_scene()
