"""
Random forest of CART trees.

Each tree is grown on a bootstrap sample of the training set. At every
node a fresh random subset of features is drawn and the split minimizing
the weighted Gini impurity of the children is taken. The forest predicts
by majority vote over its trees.

Every tree draws from its own generator seeded with (seed, tree index), so
a forest is identical however many workers grow it.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchError
from ..models.hsi_models import LabeledSampleSet
from .base import TrainedModel, prepare_training_set
from .specs import RfSpec

logger = logging.getLogger(__name__)

MIN_IMPURITY_DECREASE = 1e-12
LEAF = -1


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    impurity: float


def gini_impurity(class_counts: np.ndarray) -> float:
    total = class_counts.sum()
    if total == 0:
        return 0.0
    p = class_counts / total
    return float(1.0 - p @ p)


def best_gini_split(
    X: np.ndarray,
    y: np.ndarray,
    features: Sequence[int],
    n_classes: int,
    min_leaf: int = 1,
) -> Optional[SplitCandidate]:
    """
    Best ``x[feature] <= threshold`` split over the given features.

    ``y`` holds class indices in [0, n_classes). The impurity returned is
    the size-weighted mean Gini of the two children. Ties keep the earlier
    feature in ``features`` and then the lower threshold.

    Returns:
        the best candidate, or None when no feature admits a split leaving
        at least ``min_leaf`` samples on each side
    """
    n = y.shape[0]
    one_hot = np.zeros((n, n_classes))
    one_hot[np.arange(n), y] = 1.0
    best: Optional[SplitCandidate] = None

    for feature in features:
        order = np.argsort(X[:, feature], kind="stable")
        values = X[order, feature]
        left_counts = np.cumsum(one_hot[order], axis=0)[:-1]
        right_counts = one_hot.sum(axis=0) - left_counts
        n_left = np.arange(1, n, dtype=np.float64)
        n_right = n - n_left

        valid = (values[:-1] < values[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        weighted = (
            n_left - (left_counts ** 2).sum(axis=1) / n_left
            + n_right - (right_counts ** 2).sum(axis=1) / n_right
        ) / n
        weighted = np.where(valid, weighted, np.inf)
        k = int(np.argmin(weighted))
        if best is None or weighted[k] < best.impurity:
            threshold = (values[k] + values[k + 1]) / 2.0
            if threshold >= values[k + 1]:
                threshold = values[k]
            best = SplitCandidate(int(feature), float(threshold), float(weighted[k]))
    return best


def _majority(class_counts: np.ndarray) -> int:
    return int(np.argmax(class_counts))


@dataclass
class DecisionTree:
    """
    Array-encoded binary tree.

    Node i is a leaf when ``feature[i] == -1``; otherwise samples with
    ``x[feature[i]] <= threshold[i]`` go to ``left[i]``. ``value[i]`` is
    the class index of the node majority.
    """
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.feature.shape[0])

    def leaf_values(self) -> np.ndarray:
        return self.value[self.feature == LEAF]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Class index of the leaf each row of X lands in."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.feature[node] != LEAF)
        while active.size:
            current = node[active]
            goes_left = X[active, self.feature[current]] <= self.threshold[current]
            node[active] = np.where(goes_left, self.left[current], self.right[current])
            active = active[self.feature[node[active]] != LEAF]
        return self.value[node]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DecisionTree":
        return cls(
            feature=np.asarray(data["feature"], dtype=np.int64),
            threshold=np.asarray(data["threshold"], dtype=np.float64),
            left=np.asarray(data["left"], dtype=np.int64),
            right=np.asarray(data["right"], dtype=np.int64),
            value=np.asarray(data["value"], dtype=np.int64),
        )


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    features_per_node: int,
    min_leaf: int,
    rng: np.random.Generator,
) -> DecisionTree:
    """
    Grow one CART tree depth-first.

    A node becomes a leaf when it is pure, holds fewer than 2·min_leaf
    samples, or no drawn feature lowers its Gini impurity.
    """
    n_features = X.shape[1]
    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    value: List[int] = []

    def new_node(indices: np.ndarray) -> int:
        counts = np.bincount(y[indices], minlength=n_classes)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(_majority(counts))
        return len(feature) - 1

    root = np.arange(y.shape[0])
    stack: List[Tuple[int, np.ndarray]] = [(new_node(root), root)]
    while stack:
        node, indices = stack.pop()
        counts = np.bincount(y[indices], minlength=n_classes)
        parent = gini_impurity(counts)
        if parent == 0.0 or indices.size < 2 * min_leaf:
            continue
        candidates = rng.choice(n_features, size=features_per_node, replace=False)
        split = best_gini_split(X[indices], y[indices], candidates, n_classes, min_leaf)
        if split is None or split.impurity > parent - MIN_IMPURITY_DECREASE:
            continue

        goes_left = X[indices, split.feature] <= split.threshold
        left_indices, right_indices = indices[goes_left], indices[~goes_left]
        feature[node] = split.feature
        threshold[node] = split.threshold
        left[node] = new_node(left_indices)
        right[node] = new_node(right_indices)
        stack.append((right[node], right_indices))
        stack.append((left[node], left_indices))

    return DecisionTree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value, dtype=np.int64),
    )


class ForestModel(TrainedModel):
    """Trees vote with their leaf majorities; ties go to the smallest class id."""

    family = "rf"

    def __init__(
        self,
        spec: RfSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        trees: List[DecisionTree],
        standardizer=None,
    ):
        super().__init__(spec, band_ids, classes, standardizer)
        self.trees = trees

    def tree_predictions(self, X: np.ndarray) -> np.ndarray:
        """(num_trees, n) class labels predicted by each tree."""
        X = self._prepare(X)
        return np.stack([self.classes[tree.apply(X)] for tree in self.trees])

    def _predict_prepared(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.classes.size), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            np.add.at(votes, (rows, tree.apply(X)), 1)
        return self.classes[np.argmax(votes, axis=1)]

    def parameters_to_dict(self) -> Dict[str, Any]:
        return {"trees": [tree.to_dict() for tree in self.trees]}

    @classmethod
    def from_parts(cls, spec, band_ids, classes, standardizer, parameters):
        trees = [DecisionTree.from_dict(entry) for entry in parameters["trees"]]
        return cls(spec, band_ids, classes, trees, standardizer)


def rf_fit(samples: LabeledSampleSet, spec: RfSpec, workers: int = 1) -> ForestModel:
    """
    Grow ``spec.num_trees`` trees on seeded bootstrap samples.

    Raises:
        TrainingError: empty training set
    """
    X, labels, _ = prepare_training_set(samples, standardize=False)
    classes, y = np.unique(labels, return_inverse=True)
    n = y.shape[0]
    m = spec.features_per_node(X.shape[1])

    def grow(tree_index: int) -> DecisionTree:
        rng = np.random.default_rng([spec.seed, tree_index])
        bootstrap = rng.integers(0, n, size=n)
        return grow_tree(X[bootstrap], y[bootstrap], classes.size, m, spec.min_leaf, rng)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trees = list(pool.map(grow, range(spec.num_trees)))
    else:
        trees = [grow(index) for index in range(spec.num_trees)]

    logger.debug(
        f"Grew {len(trees)} trees on {n} samples "
        f"(m={m}, mean nodes={np.mean([t.node_count for t in trees]):.1f})"
    )
    return ForestModel(spec, samples.band_ids, classes, trees)


def rf_predict(model: ForestModel, query: Sequence[float]) -> int:
    """Majority vote of the forest for one feature vector."""
    query = np.asarray(query, dtype=np.float64).ravel()
    if query.size != model.n_features:
        raise DimensionMismatchError(
            f"forest was trained on {model.n_features} features, got {query.size}"
        )
    return model.predict_one(query)
