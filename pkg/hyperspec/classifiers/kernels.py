"""
SVM kernel functions.

    linear   K(u, v) = u·v
    rbf      K(u, v) = exp(-gamma ||u - v||²)
    sigmoid  K(u, v) = tanh(gamma u·v + coef0)
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.exceptions import DimensionMismatchError
from .specs import KernelKind


@dataclass(frozen=True)
class KernelParams:
    kind: KernelKind = KernelKind.RBF
    gamma: float = 1.0
    coef0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.kind is not KernelKind.LINEAR and not self.gamma > 0:
            raise ValueError(f"gamma must be positive for the {self.kind.value} kernel")


def kernel_eval(params: KernelParams, u: Sequence[float], v: Sequence[float]) -> float:
    """Evaluate the kernel on two feature vectors."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape:
        raise DimensionMismatchError(f"Kernel inputs differ in length: {u.size} vs {v.size}")
    if params.kind is KernelKind.LINEAR:
        return float(u @ v)
    if params.kind is KernelKind.RBF:
        diff = u - v
        return float(np.exp(-params.gamma * (diff @ diff)))
    return float(np.tanh(params.gamma * (u @ v) + params.coef0))


def kernel_row(params: KernelParams, X: np.ndarray, x: np.ndarray) -> np.ndarray:
    """K(X[i], x) for every row of X."""
    if params.kind is KernelKind.LINEAR:
        return X @ x
    if params.kind is KernelKind.RBF:
        diff = X - x
        return np.exp(-params.gamma * np.einsum("ij,ij->i", diff, diff))
    return np.tanh(params.gamma * (X @ x) + params.coef0)


def kernel_matrix(params: KernelParams, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram matrix K(A[i], B[j]) of shape (len(A), len(B))."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(
            f"Kernel inputs differ in dimension: {A.shape[1]} vs {B.shape[1]}"
        )
    dots = A @ B.T
    if params.kind is KernelKind.LINEAR:
        return dots
    if params.kind is KernelKind.RBF:
        sq = np.einsum("ij,ij->i", A, A)[:, None] + np.einsum("ij,ij->i", B, B)[None, :] - 2.0 * dots
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-params.gamma * sq)
    return np.tanh(params.gamma * dots + params.coef0)
