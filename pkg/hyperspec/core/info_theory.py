"""
Histogram-based information measures.

Plug-in (maximum-likelihood) estimates of Shannon entropy, joint entropy and
mutual information between discrete symbol sequences, in bits. Bands are
quantized before they get here; ground-truth labels are used as-is.

Sums run over the sorted nonzero counts so that a histogram and its
transpose produce bit-identical entropies.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

NEGATIVE_RESIDUE = -1e-12


@dataclass(frozen=True)
class Histogram1D:
    """Symbol counts of one discrete variable."""
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True).ravel()
        if counts.size and counts.min() < 0:
            raise ValueError("Histogram counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_symbols(cls, symbols: Sequence[int]) -> "Histogram1D":
        _, counts = np.unique(np.asarray(symbols).ravel(), return_counts=True)
        return cls(counts)


@dataclass(frozen=True)
class JointHistogram:
    """Co-occurrence counts indexed (x-symbol, y-symbol)."""
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.ndim != 2:
            raise ValueError(f"Joint histogram must be 2-D, got shape {counts.shape}")
        if counts.size and counts.min() < 0:
            raise ValueError("Histogram counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def marginal_x(self) -> Histogram1D:
        return Histogram1D(self.counts.sum(axis=1))

    def marginal_y(self) -> Histogram1D:
        return Histogram1D(self.counts.sum(axis=0))

    def transpose(self) -> "JointHistogram":
        return JointHistogram(self.counts.T)

    @classmethod
    def from_symbols(cls, x: Sequence[int], y: Sequence[int]) -> "JointHistogram":
        x_codes, y_codes = _paired_codes(x, y)
        nx = int(x_codes.max()) + 1
        ny = int(y_codes.max()) + 1
        flat = np.bincount(x_codes * ny + y_codes, minlength=nx * ny)
        return cls(flat.reshape(nx, ny))


def _paired_codes(x: Sequence[int], y: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"Sequence lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] == 0:
        raise ValueError("Cannot estimate information from empty sequences")
    _, x_codes = np.unique(x, return_inverse=True)
    _, y_codes = np.unique(y, return_inverse=True)
    return x_codes.ravel().astype(np.int64), y_codes.ravel().astype(np.int64)


def _entropy_of_counts(counts: np.ndarray) -> float:
    nonzero = np.sort(counts[counts > 0].ravel())
    total = nonzero.sum()
    if total < 1:
        raise ValueError("Cannot compute the entropy of an empty histogram")
    p = nonzero / total
    return float(-np.sum(p * np.log2(p)) + 0.0)


def entropy(h: Histogram1D) -> float:
    """Shannon entropy -sum p log2 p of a histogram, in bits (0 log 0 := 0)."""
    return _entropy_of_counts(h.counts)


def joint_entropy(j: JointHistogram) -> float:
    """Joint entropy H(X, Y) of a co-occurrence histogram, in bits."""
    return _entropy_of_counts(j.counts)


def mutual_information_from_joint(j: JointHistogram) -> float:
    """I(X, Y) = H(X) + H(Y) - H(X, Y) from a joint histogram."""
    mi = entropy(j.marginal_x()) + entropy(j.marginal_y()) - joint_entropy(j)
    if mi < 0.0:
        if mi < NEGATIVE_RESIDUE:
            logger.warning(f"Mutual information estimate {mi} below the rounding floor")
        mi = 0.0
    return mi


def mutual_information(x: Sequence[int], y: Sequence[int]) -> float:
    """
    Mutual information between two paired symbol sequences, in bits.

    Args:
        x: symbols of the first variable (e.g. quantized band codes)
        y: symbols of the second variable, same length as ``x``

    Raises:
        ValueError: on length mismatch or empty input
    """
    return mutual_information_from_joint(JointHistogram.from_symbols(x, y))


def mutual_information_direct(x: Sequence[int], y: Sequence[int]) -> float:
    """
    Mutual information as the double sum p(x,y) log2(p(x,y) / (p(x) p(y))).

    Independent route to the same quantity as :func:`mutual_information`.
    """
    counts = JointHistogram.from_symbols(x, y).counts.astype(np.float64)
    total = counts.sum()
    p_xy = counts / total
    p_x = p_xy.sum(axis=1, keepdims=True)
    p_y = p_xy.sum(axis=0, keepdims=True)
    mask = p_xy > 0
    ratio = p_xy[mask] / (p_x * p_y)[mask]
    return max(float(np.sum(p_xy[mask] * np.log2(ratio))), 0.0)
