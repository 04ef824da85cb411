"""
Support Vector Machines trained by Sequential Minimal Optimization.

The binary solver works on the soft-margin dual

    max_a  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
    s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0

updating two multipliers per iteration. The pair is the maximal KKT
violator i plus the partner j with the largest second-order gain. The loop
stops once the violation gap drops below ``tol``, which is a direct
certificate that every KKT condition holds within ``tol``.

Multiclass problems are reduced one-vs-one: one binary machine per
unordered class pair, combined by voting.
"""

import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import TrainingError
from ..models.hsi_models import LabeledSampleSet
from .base import Standardizer, TrainedModel, prepare_training_set
from .kernels import KernelParams, kernel_matrix, kernel_row
from .specs import KernelKind, SvmSpec

logger = logging.getLogger(__name__)

TAU = 1e-12
FULL_GRAM_LIMIT = 4000
ROW_CACHE_BYTES = 256 * 1024 * 1024


class _KernelRows:
    """Kernel rows of the training set, precomputed or LRU-cached."""

    def __init__(self, params: KernelParams, X: np.ndarray):
        self.params = params
        self.X = X
        n = X.shape[0]
        self.diag = np.array([
            1.0 if params.kind is KernelKind.RBF else kernel_row(params, X[i:i + 1], X[i])[0]
            for i in range(n)
        ])
        self.gram = kernel_matrix(params, X, X) if n <= FULL_GRAM_LIMIT else None
        self.cache: "OrderedDict[int, np.ndarray]" = OrderedDict()
        self.capacity = max(2, ROW_CACHE_BYTES // max(1, 8 * n))

    def row(self, i: int) -> np.ndarray:
        if self.gram is not None:
            return self.gram[i]
        cached = self.cache.get(i)
        if cached is not None:
            self.cache.move_to_end(i)
            return cached
        values = kernel_row(self.params, self.X, self.X[i])
        self.cache[i] = values
        if len(self.cache) > self.capacity:
            self.cache.popitem(last=False)
        return values


@dataclass
class BinarySvm:
    """
    Decision function f(x) = sum_s dual_coef_s K(sv_s, x) + bias.

    ``alphas`` holds every training multiplier; it is kept in memory for
    inspection but not serialized.
    """
    kernel: KernelParams
    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    C: float = 1.0
    alphas: Optional[np.ndarray] = None
    iterations: int = 0
    converged: bool = True
    objective_trace: List[float] = field(default_factory=list)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        return kernel_matrix(self.kernel, X, self.support_vectors) @ self.dual_coef + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.where(self.decision_function(X) > 0, 1, -1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kernel": {
                "kind": self.kernel.kind.value,
                "gamma": self.kernel.gamma,
                "coef0": self.kernel.coef0,
            },
            "support_vectors": self.support_vectors.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias,
            "C": self.C,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BinarySvm":
        kernel = KernelParams(**data["kernel"])
        support = np.asarray(data["support_vectors"], dtype=np.float64)
        if support.size == 0:
            support = support.reshape(0, 0)
        return cls(
            kernel=kernel,
            support_vectors=support,
            dual_coef=np.asarray(data["dual_coef"], dtype=np.float64),
            bias=float(data["bias"]),
            C=float(data["C"]),
            iterations=int(data.get("iterations", 0)),
            converged=bool(data.get("converged", True)),
        )


def _bias_from_gradient(y: np.ndarray, G: np.ndarray, alpha: np.ndarray, C: float) -> float:
    yG = y * G
    at_upper = alpha >= C
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        rho = yG[free].mean()
    else:
        ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
        lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
        ub = yG[ub_mask].min() if ub_mask.any() else np.inf
        lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
        if np.isfinite(ub) and np.isfinite(lb):
            rho = (ub + lb) / 2.0
        else:
            rho = ub if np.isfinite(ub) else lb
    return float(-rho)


def svm_train_binary(
    X: np.ndarray,
    y: np.ndarray,
    kernel: KernelParams,
    C: float = 1.0,
    tol: float = 1e-3,
    max_iter: Optional[int] = None,
    track_objective: bool = False,
) -> BinarySvm:
    """
    Train a binary soft-margin SVM with SMO.

    There is no count of passes without progress. Training stops once the
    maximal KKT violating pair is closer than ``tol``, and ``max_iter``
    bounds the number of pair updates.

    Args:
        X: (n, d) training features
        y: labels in {-1, +1}
        kernel: kernel parameters
        C: box constraint
        tol: KKT violation tolerance
        max_iter: iteration budget; defaults to max(100000, 100 n)
        track_objective: record the dual objective after every iteration

    Returns:
        BinarySvm; ``converged`` is False when the budget ran out, in which
        case the last iterate is returned

    Raises:
        TrainingError: single-class input or non-positive C
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.shape[0] != y.shape[0]:
        raise TrainingError(f"{X.shape[0]} samples but {y.shape[0]} labels")
    if C <= 0:
        raise TrainingError(f"C must be positive, got {C}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise TrainingError("binary labels must be -1 or +1")
    if not ((y > 0).any() and (y < 0).any()):
        raise TrainingError("binary SVM needs samples of both classes")

    n = X.shape[0]
    max_iter = max_iter or max(100_000, 100 * n)
    rows = _KernelRows(kernel, X)
    alpha = np.zeros(n)
    G = -np.ones(n)
    objective: List[float] = []
    converged = False
    iteration = 0

    for iteration in range(1, max_iter + 1):
        minus_yG = -y * G
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break

        i = int(np.argmax(np.where(up, minus_yG, -np.inf)))
        g_max = minus_yG[i]
        g_min = np.min(minus_yG[low])
        if g_max - g_min < tol:
            converged = True
            break

        K_i = rows.row(i)
        candidates = low & (minus_yG < g_max)
        gap = g_max - minus_yG
        curvature = rows.diag[i] + rows.diag - 2.0 * K_i
        curvature = np.where(curvature > 0, curvature, TAU)
        gain = np.where(candidates, -(gap * gap) / curvature, np.inf)
        j = int(np.argmin(gain))
        K_j = rows.row(j)

        old_i, old_j = alpha[i], alpha[j]
        quad = rows.diag[i] + rows.diag[j] - 2.0 * K_i[j]
        if quad <= 0:
            quad = TAU

        if y[i] != y[j]:
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            elif alpha[j] > C:
                alpha[j] = C
                alpha[i] = C + diff
        else:
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > C:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = total - C
            elif alpha[j] < 0:
                alpha[j] = 0.0
                alpha[i] = total
            if total > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = total - C
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = total

        delta_i = alpha[i] - old_i
        delta_j = alpha[j] - old_j
        G += y * (y[i] * delta_i * K_i + y[j] * delta_j * K_j)

        if track_objective:
            objective.append(float(0.5 * alpha.sum() - 0.5 * alpha @ G))

    if not converged:
        logger.warning(
            f"SMO did not converge within {max_iter} iterations (n={n}, C={C}); "
            f"returning the last iterate"
        )

    support = np.flatnonzero(alpha > 0)
    support_vectors = X[support]
    dual_coef = alpha[support] * y[support]

    # Recompute the gradient exactly before fixing the bias.
    if support.size:
        f_no_bias = kernel_matrix(kernel, X, support_vectors) @ dual_coef
    else:
        f_no_bias = np.zeros(n)
    G = y * f_no_bias - 1.0
    bias = _bias_from_gradient(y, G, alpha, C)

    logger.debug(
        f"SMO finished after {iteration} iterations: {support.size} support vectors, "
        f"bias={bias:.6f}, converged={converged}"
    )
    return BinarySvm(
        kernel=kernel,
        support_vectors=support_vectors,
        dual_coef=dual_coef,
        bias=bias,
        C=C,
        alphas=alpha,
        iterations=iteration,
        converged=converged,
        objective_trace=objective,
    )


def resolve_kernel(spec: SvmSpec, n_features: int) -> KernelParams:
    gamma = spec.gamma if spec.gamma is not None else 1.0 / max(1, n_features)
    return KernelParams(kind=spec.kernel, gamma=gamma, coef0=spec.coef0)


class SvmModel(TrainedModel):
    """One-vs-one ensemble of binary SVMs."""

    family = "svm"

    def __init__(
        self,
        spec: SvmSpec,
        band_ids: Sequence[int],
        classes: Sequence[int],
        machines: List[Tuple[int, int, BinarySvm]],
        standardizer: Optional[Standardizer] = None,
    ):
        super().__init__(spec, band_ids, classes, standardizer)
        self.machines = machines

    @property
    def converged(self) -> bool:
        return all(machine.converged for _, _, machine in self.machines)

    def _predict_prepared(self, X: np.ndarray) -> np.ndarray:
        n = X.shape[0]
        position = {int(c): k for k, c in enumerate(self.classes)}
        votes = np.zeros((n, len(self.classes)), dtype=np.int64)
        magnitude = np.zeros((n, len(self.classes)))
        rows = np.arange(n)
        for class_a, class_b, machine in self.machines:
            f = machine.decision_function(X)
            winner = np.where(f > 0, position[class_a], position[class_b])
            np.add.at(votes, (rows, winner), 1)
            np.add.at(magnitude, (rows, winner), np.abs(f))

        best_votes = votes.max(axis=1, keepdims=True)
        tied = votes == best_votes
        tied_magnitude = np.where(tied, magnitude, -np.inf)
        finalists = tied & (tied_magnitude == tied_magnitude.max(axis=1, keepdims=True))
        return self.classes[np.argmax(finalists, axis=1)]

    def parameters_to_dict(self) -> Dict[str, Any]:
        return {
            "machines": [
                {"positive": a, "negative": b, "svm": machine.to_dict()}
                for a, b, machine in self.machines
            ]
        }

    @classmethod
    def from_parts(cls, spec, band_ids, classes, standardizer, parameters):
        machines = [
            (int(entry["positive"]), int(entry["negative"]), BinarySvm.from_dict(entry["svm"]))
            for entry in parameters["machines"]
        ]
        return cls(spec, band_ids, classes, machines, standardizer)


def svm_train_multiclass(
    samples: LabeledSampleSet,
    spec: SvmSpec,
    standardize: bool = False,
    workers: int = 1,
) -> SvmModel:
    """
    Train one binary SVM per unordered class pair.

    The lower class id of each pair is the positive class. Prediction is a
    pairwise majority vote; ties go to the class with the larger summed
    decision-value magnitude, then to the smallest class id.
    """
    X, labels, scaler = prepare_training_set(samples, standardize)
    classes = np.unique(labels)
    if classes.size < 2:
        raise TrainingError("multiclass SVM needs at least two classes")
    kernel = resolve_kernel(spec, X.shape[1])

    def train_pair(pair: Tuple[int, int]) -> Tuple[int, int, BinarySvm]:
        class_a, class_b = pair
        mask = (labels == class_a) | (labels == class_b)
        y = np.where(labels[mask] == class_a, 1.0, -1.0)
        machine = svm_train_binary(X[mask], y, kernel, spec.C, spec.tol, spec.max_iter)
        return int(class_a), int(class_b), machine

    pairs = list(combinations(classes.tolist(), 2))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            machines = list(pool.map(train_pair, pairs))
    else:
        machines = [train_pair(pair) for pair in pairs]

    model = SvmModel(spec, samples.band_ids, classes, machines, scaler)
    if not model.converged:
        logger.warning(f"{spec.name}: some pairwise machines did not converge")
    logger.debug(f"Trained {spec.name} with {len(machines)} pairwise machines")
    return model
