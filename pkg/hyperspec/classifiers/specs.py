"""
Classifier specifications.

A specification names one classifier variant and its hyperparameters. The
benchmark roster is a list of specifications; cross-validated grid search
turns one specification into a family of candidates.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
from dataclasses_json import dataclass_json

from ..core.exceptions import ConfigurationError

DEFAULT_C_GRID = (0.1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA_GRID = (None, 0.01, 0.1, 1.0)


class KernelKind(str, Enum):
    """SVM kernel functions."""
    LINEAR = "linear"
    RBF = "rbf"
    SIGMOID = "sigmoid"


class LdaMode(str, Enum):
    """Covariance structure shared by all classes."""
    LINEAR = "linear"
    DIAGLINEAR = "diaglinear"


@dataclass_json
@dataclass(frozen=True)
class SvmSpec:
    """
    Soft-margin SVM trained by SMO, one-vs-one for multiclass.

    ``gamma=None`` resolves to 1/d at training time, d being the feature
    count. ``max_iter=None`` resolves to max(100000, 100·n).
    """
    kernel: KernelKind = KernelKind.RBF
    C: float = 1.0
    gamma: Optional[float] = None
    coef0: float = 0.0
    tol: float = 1e-3
    max_iter: Optional[int] = None

    family = "svm"

    def __post_init__(self):
        object.__setattr__(self, "kernel", KernelKind(self.kernel))
        if self.C <= 0:
            raise ConfigurationError(f"SVM C must be positive, got {self.C}")
        if self.gamma is not None and self.gamma <= 0:
            raise ConfigurationError(f"SVM gamma must be positive, got {self.gamma}")
        if self.tol <= 0:
            raise ConfigurationError(f"SVM tol must be positive, got {self.tol}")

    @property
    def name(self) -> str:
        return f"SVM-{'RBF' if self.kernel is KernelKind.RBF else self.kernel.value.capitalize()}"


@dataclass_json
@dataclass(frozen=True)
class KnnSpec:
    """Brute-force Euclidean k-nearest-neighbour vote."""
    k: int = 1

    family = "knn"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"KNN k must be at least 1, got {self.k}")

    @property
    def name(self) -> str:
        return f"KNN-{self.k}"


@dataclass_json
@dataclass(frozen=True)
class LdaSpec:
    """Gaussian discriminant with a pooled (or diagonal pooled) covariance."""
    mode: LdaMode = LdaMode.LINEAR
    ridge: float = 1e-6

    family = "lda"

    def __post_init__(self):
        object.__setattr__(self, "mode", LdaMode(self.mode))
        if self.ridge < 0:
            raise ConfigurationError(f"LDA ridge must be non-negative, got {self.ridge}")

    @property
    def name(self) -> str:
        return f"LDA-{self.mode.value.capitalize()}"


@dataclass_json
@dataclass(frozen=True)
class RfSpec:
    """Bagged CART trees with per-node random feature subsets."""
    num_trees: int = 100
    max_features: Union[int, str] = "sqrt"
    min_leaf: int = 1
    seed: int = 0

    family = "rf"

    def __post_init__(self):
        if self.num_trees < 1:
            raise ConfigurationError(f"RF num_trees must be at least 1, got {self.num_trees}")
        if self.min_leaf < 1:
            raise ConfigurationError(f"RF min_leaf must be at least 1, got {self.min_leaf}")
        if isinstance(self.max_features, str):
            if self.max_features != "sqrt":
                raise ConfigurationError(
                    f"RF max_features must be a positive integer or 'sqrt', got {self.max_features!r}"
                )
        elif self.max_features < 1:
            raise ConfigurationError(
                f"RF max_features must be a positive integer, got {self.max_features}"
            )

    @property
    def name(self) -> str:
        return "RF"

    def features_per_node(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            m = int(math.floor(math.sqrt(n_features)))
        else:
            m = int(self.max_features)
        return max(1, min(m, n_features))


ClassifierSpec = Union[SvmSpec, KnnSpec, LdaSpec, RfSpec]

SPEC_TYPES = {cls.family: cls for cls in (SvmSpec, KnnSpec, LdaSpec, RfSpec)}

# Roster keys expanded from "all-paper", in benchmark table column order.
FULL_ROSTER = (
    "svm-rbf",
    "svm-linear",
    "svm-sigmoid",
    "rf",
    "lda-linear",
    "lda-diaglinear",
    "knn-1",
    "knn-3",
    "knn-5",
    "knn-7",
)


def spec_to_dict(spec: ClassifierSpec) -> Dict[str, Any]:
    return {"family": spec.family, **spec.to_dict(encode_json=True)}


def spec_from_dict(data: Dict[str, Any]) -> ClassifierSpec:
    data = dict(data)
    family = data.pop("family", None)
    if family not in SPEC_TYPES:
        raise ConfigurationError(f"Unknown classifier family: {family!r}")
    return SPEC_TYPES[family].from_dict(data)


def roster_key(spec: ClassifierSpec) -> str:
    """Lower-case identifier used in file names and configuration."""
    return spec.name.lower()


def parse_classifier(key: str, seed: int = 0, rf_trees: int = 100) -> ClassifierSpec:
    """
    Build a specification from a roster key such as ``svm-rbf`` or ``knn-5``.
    """
    key = key.strip().lower()
    family, _, variant = key.partition("-")
    if family == "svm" and variant in {k.value for k in KernelKind}:
        return SvmSpec(kernel=KernelKind(variant))
    if family == "knn" and variant.isdigit():
        return KnnSpec(k=int(variant))
    if family == "lda" and variant in {m.value for m in LdaMode}:
        return LdaSpec(mode=LdaMode(variant))
    if family == "rf" and not variant:
        return RfSpec(num_trees=rf_trees, seed=seed)
    raise ConfigurationError(f"Unknown classifier: {key!r}")


def parse_roster(value: Union[str, List[str]], seed: int = 0, rf_trees: int = 100) -> List[ClassifierSpec]:
    """Expand ``all-paper`` or a comma-separated list of roster keys."""
    if isinstance(value, str):
        keys = [part for part in value.split(",") if part.strip()]
    else:
        keys = list(value)
    expanded: List[str] = []
    for key in keys:
        if key.strip().lower() == "all-paper":
            expanded.extend(FULL_ROSTER)
        else:
            expanded.append(key)
    if not expanded:
        raise ConfigurationError("classifier roster is empty")
    return [parse_classifier(key, seed=seed, rf_trees=rf_trees) for key in expanded]


def stream_seed(seed: int, roster_index: int, band_count: int) -> int:
    """Seed of the random stream owned by one roster entry at one band count."""
    state = np.random.SeedSequence([seed, roster_index, band_count]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def seeded_for_sweep(spec: ClassifierSpec, seed: int, roster_index: int, band_count: int) -> ClassifierSpec:
    """Give randomized classifiers their own stream; other specs are returned as is."""
    if isinstance(spec, RfSpec):
        return replace(spec, seed=stream_seed(seed, roster_index, band_count))
    return spec


def default_grid(spec: ClassifierSpec) -> List[ClassifierSpec]:
    """
    Candidate specifications searched by cross-validation.

    SVMs sweep C (and gamma for RBF and sigmoid kernels); gamma ``None``
    stands for 1/d. Other families are used as given.
    """
    if not isinstance(spec, SvmSpec):
        return [spec]
    if spec.kernel is KernelKind.LINEAR:
        return [replace(spec, C=c) for c in DEFAULT_C_GRID]
    return [
        replace(spec, C=c, gamma=gamma, coef0=0.0)
        for c in DEFAULT_C_GRID
        for gamma in DEFAULT_GAMMA_GRID
    ]
