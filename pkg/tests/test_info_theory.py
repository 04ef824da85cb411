"""
Tests for the histogram entropy and mutual information estimators.
"""

import math

import numpy as np
import pytest

from hyperspec.core.info_theory import (
    Histogram1D,
    JointHistogram,
    entropy,
    joint_entropy,
    mutual_information,
    mutual_information_direct,
)


def test_entropy_of_uniform_histogram():
    assert entropy(Histogram1D([5, 5, 5, 5])) == pytest.approx(2.0, abs=1e-12)


def test_entropy_ignores_empty_bins():
    assert entropy(Histogram1D([0, 3, 0, 3])) == pytest.approx(1.0, abs=1e-12)
    assert entropy(Histogram1D([7])) == 0.0


def test_entropy_of_empty_histogram_fails():
    with pytest.raises(ValueError):
        entropy(Histogram1D([0, 0]))


def test_joint_entropy_is_transpose_invariant():
    joint = JointHistogram([[3, 0, 1], [2, 5, 4]])
    assert joint_entropy(joint) == joint_entropy(joint.transpose())


def test_mutual_information_of_identical_sequences_is_entropy():
    x = [0, 0, 1, 2, 2, 2, 3]
    assert mutual_information(x, x) == pytest.approx(entropy(Histogram1D.from_symbols(x)), abs=1e-12)


def test_mutual_information_of_independent_grid_is_zero():
    x = np.repeat([0, 1, 2], 4)
    y = np.tile([0, 1, 2, 3], 3)
    assert mutual_information(x, y) == pytest.approx(0.0, abs=1e-12)


def test_symbols_need_not_be_contiguous():
    assert mutual_information([10, 10, 40, 40], [7, 7, 3, 3]) == pytest.approx(1.0, abs=1e-12)


def test_length_mismatch_and_empty_input():
    with pytest.raises(ValueError):
        mutual_information([1, 2, 3], [1, 2])
    with pytest.raises(ValueError):
        mutual_information([], [])


def test_random_sequences_satisfy_information_identities():
    rng = np.random.default_rng(2024)
    for _ in range(10000):
        n = int(rng.integers(1, 60))
        x = rng.integers(0, int(rng.integers(1, 9)), size=n)
        y = rng.integers(0, int(rng.integers(1, 9)), size=n)

        mi = mutual_information(x, y)
        h_x = entropy(Histogram1D.from_symbols(x))
        h_y = entropy(Histogram1D.from_symbols(y))

        assert mi >= 0.0
        assert mi == mutual_information(y, x)
        assert mi <= min(h_x, h_y) + 1e-12
        assert mutual_information(x, x) == pytest.approx(h_x, abs=1e-12)
        assert mutual_information_direct(x, y) == pytest.approx(mi, abs=1e-12)


def test_mutual_information_bounded_by_log_of_alphabet():
    rng = np.random.default_rng(5)
    x = rng.integers(0, 4, size=500)
    y = rng.integers(0, 16, size=500)
    assert mutual_information(x, y) <= math.log2(4) + 1e-12


def test_hand_computed_values():
    assert entropy(Histogram1D([1, 3])) == pytest.approx(0.811278124459, abs=1e-9)
    joint = JointHistogram([[4, 1], [1, 4]])
    assert joint_entropy(joint) == pytest.approx(1.721928094887, abs=1e-9)
    x = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]
    y = [0, 0, 0, 0, 1, 0, 1, 1, 1, 1]
    assert mutual_information(x, y) == pytest.approx(2.0 - 1.721928094887, abs=1e-9)
    assert mutual_information_direct(x, y) == pytest.approx(mutual_information(x, y), abs=1e-12)


def test_relabeling_never_adds_information():
    rng = np.random.default_rng(99)
    for _ in range(500):
        n = int(rng.integers(1, 80))
        alphabet = int(rng.integers(1, 10))
        x = rng.integers(0, alphabet, size=n)
        y = rng.integers(0, int(rng.integers(1, 10)), size=n)
        relabel = rng.integers(0, int(rng.integers(1, alphabet + 1)), size=alphabet)
        assert mutual_information(relabel[x], y) <= mutual_information(x, y) + 1e-12
