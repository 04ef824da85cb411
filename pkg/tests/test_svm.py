"""
Tests for the kernels, the SMO solver and the one-vs-one SVM.
"""

import math

import numpy as np
import pytest

from conftest import make_blobs
from hyperspec.classifiers.kernels import KernelParams, kernel_eval, kernel_matrix
from hyperspec.classifiers.specs import KernelKind, SvmSpec
from hyperspec.classifiers.svm import BinarySvm, SvmModel, svm_train_binary, svm_train_multiclass
from hyperspec.core.exceptions import DimensionMismatchError, TrainingError

LINEAR = KernelParams(KernelKind.LINEAR)


def _kkt_violation(machine, X, y):
    margins = y * machine.decision_function(X)
    alpha = machine.alphas
    C = machine.C
    lower = alpha <= 0
    upper = alpha >= C
    free = ~(lower | upper)
    violations = np.concatenate([
        np.maximum(0.0, 1.0 - margins[lower]),
        np.maximum(0.0, margins[upper] - 1.0),
        np.abs(margins[free] - 1.0),
    ])
    return float(violations.max()) if violations.size else 0.0


# --- kernels ---

def test_kernel_values():
    assert kernel_eval(LINEAR, [1, 2], [3, 4]) == 11.0
    rbf = KernelParams(KernelKind.RBF, gamma=0.5)
    assert kernel_eval(rbf, [0, 0], [1, 1]) == pytest.approx(math.exp(-1.0))
    sigmoid = KernelParams(KernelKind.SIGMOID, gamma=1.0, coef0=0.0)
    assert kernel_eval(sigmoid, [1, 0], [0, 1]) == 0.0
    assert kernel_eval(sigmoid, [1, 1], [1, 1]) == pytest.approx(math.tanh(2.0))


def test_kernel_matrix_matches_pointwise_evaluation():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 3))
    B = rng.standard_normal((4, 3))
    for params in (LINEAR, KernelParams(KernelKind.RBF, gamma=0.3),
                   KernelParams(KernelKind.SIGMOID, gamma=0.2, coef0=-1.0)):
        expected = [[kernel_eval(params, a, b) for b in B] for a in A]
        np.testing.assert_allclose(kernel_matrix(params, A, B), expected, atol=1e-12)


def test_kernel_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        kernel_eval(LINEAR, [1, 2], [1, 2, 3])
    with pytest.raises(DimensionMismatchError):
        kernel_matrix(LINEAR, np.ones((2, 2)), np.ones((2, 3)))


def test_kernel_rejects_non_positive_gamma():
    with pytest.raises(ValueError):
        KernelParams(KernelKind.RBF, gamma=0.0)


# --- binary SMO ---

def test_symmetric_one_dimensional_problem():
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1, 1])
    machine = svm_train_binary(X, y, LINEAR, C=100.0)
    assert machine.converged
    assert machine.decision_function([[0.0]])[0] == pytest.approx(0.0, abs=1e-6)
    np.testing.assert_array_equal(machine.predict(X), y)


def test_four_point_problem_has_unit_margin():
    X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    y = np.array([-1, -1, 1, 1])
    machine = svm_train_binary(X, y, LINEAR, C=10.0)
    assert machine.converged
    assert machine.decision_function([[0.0]])[0] == pytest.approx(0.0, abs=1e-3)
    np.testing.assert_array_equal(machine.predict(X), y)
    assert machine.decision_function([[1.0]])[0] == pytest.approx(1.0, abs=1e-3)


def test_xor_with_rbf_kernel():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([-1, -1, 1, 1])
    machine = svm_train_binary(X, y, KernelParams(KernelKind.RBF, gamma=1.0), C=10.0)
    np.testing.assert_array_equal(machine.predict(X), y)


@pytest.mark.slow
def test_random_problems_satisfy_kkt_conditions():
    rng = np.random.default_rng(42)
    for trial in range(100):
        n = int(rng.integers(10, 201))
        d = int(rng.integers(1, 6))
        X = rng.standard_normal((n, d))
        y = np.where(X[:, 0] + 0.5 * rng.standard_normal(n) > 0, 1, -1)
        y[0], y[1] = 1, -1
        C = float(rng.choice([0.1, 1.0, 10.0]))
        kernel = LINEAR if trial % 2 else KernelParams(KernelKind.RBF, gamma=1.0 / d)

        machine = svm_train_binary(X, y, kernel, C=C, tol=1e-3)
        assert machine.converged
        assert np.all(machine.alphas >= 0) and np.all(machine.alphas <= C)
        assert abs(float(machine.alphas @ y)) < 1e-9
        assert _kkt_violation(machine, X, y) <= 1e-3


def test_dual_objective_never_decreases():
    data = make_blobs([[0.0, 0.0], [1.5, 1.5]], n_per_class=40, spread=0.8, seed=9)
    y = np.where(data.labels == 1, 1, -1)
    machine = svm_train_binary(
        data.features, y, KernelParams(KernelKind.RBF, gamma=0.5), C=1.0, track_objective=True
    )
    trace = np.array(machine.objective_trace)
    assert trace.size == machine.iterations - int(machine.converged)
    assert np.all(np.diff(trace) >= -1e-9)


def test_exhausted_budget_returns_last_iterate(caplog):
    X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    y = np.array([-1, -1, 1, 1])
    with caplog.at_level("WARNING"):
        machine = svm_train_binary(X, y, LINEAR, C=10.0, max_iter=1)
    assert not machine.converged
    assert machine.iterations == 1
    assert "did not converge" in caplog.text


def test_binary_training_errors():
    X = np.zeros((3, 1))
    with pytest.raises(TrainingError):
        svm_train_binary(X, np.array([1, 1, 1]), LINEAR)
    with pytest.raises(TrainingError):
        svm_train_binary(X, np.array([1, -1, 1]), LINEAR, C=0.0)
    with pytest.raises(TrainingError):
        svm_train_binary(X, np.array([1, 0, 1]), LINEAR)
    with pytest.raises(TrainingError):
        svm_train_binary(X, np.array([1, -1]), LINEAR)


# --- one-vs-one ---

def test_two_classes_train_one_machine(two_blob_set):
    model = svm_train_multiclass(two_blob_set, SvmSpec(kernel=KernelKind.LINEAR))
    assert len(model.machines) == 1
    class_a, class_b, _ = model.machines[0]
    assert (class_a, class_b) == (1, 2)


def test_sixteen_classes_train_all_pairs():
    centers = [[float(i % 4) * 3.0, float(i // 4) * 3.0] for i in range(16)]
    data = make_blobs(centers, n_per_class=4, spread=0.2, seed=3)
    model = svm_train_multiclass(data, SvmSpec(kernel=KernelKind.RBF, C=10.0), workers=4)
    assert len(model.machines) == 120
    assert model.converged


def test_separable_blobs_are_learned_exactly(blob_set):
    for kernel in (KernelKind.RBF, KernelKind.LINEAR):
        model = svm_train_multiclass(blob_set, SvmSpec(kernel=kernel, C=10.0), standardize=True)
        np.testing.assert_array_equal(model.predict(blob_set.features), blob_set.labels)


def test_default_gamma_resolves_to_inverse_dimension(blob_set):
    model = svm_train_multiclass(blob_set, SvmSpec())
    assert model.machines[0][2].kernel.gamma == pytest.approx(0.5)


def _constant_machine(bias):
    return BinarySvm(
        kernel=LINEAR,
        support_vectors=np.zeros((0, 2)),
        dual_coef=np.zeros(0),
        bias=bias,
    )


def test_vote_tie_goes_to_larger_decision_magnitude():
    model = SvmModel(SvmSpec(), (0, 1), [1, 2, 3], [
        (1, 2, _constant_machine(1.0)),
        (1, 3, _constant_machine(-2.0)),
        (2, 3, _constant_machine(0.5)),
    ])
    assert model.predict_one([0.0, 0.0]) == 3


def test_full_tie_goes_to_smallest_class():
    model = SvmModel(SvmSpec(), (0, 1), [1, 2, 3], [
        (1, 2, _constant_machine(1.0)),
        (1, 3, _constant_machine(-1.0)),
        (2, 3, _constant_machine(1.0)),
    ])
    assert model.predict_one([0.0, 0.0]) == 1


def test_multiclass_needs_two_classes():
    data = make_blobs([[0.0, 0.0]], n_per_class=5)
    with pytest.raises(TrainingError):
        svm_train_multiclass(data, SvmSpec())


def test_prediction_dimension_mismatch(blob_set):
    model = svm_train_multiclass(blob_set, SvmSpec(kernel=KernelKind.LINEAR))
    with pytest.raises(DimensionMismatchError):
        model.predict(np.zeros((2, 3)))
