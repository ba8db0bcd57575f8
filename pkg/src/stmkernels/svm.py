"""Soft-margin kernel SVM trained by sequential minimal optimization.

The trainer works on a precomputed Gram matrix (kernel evaluations
dominate the cost, so they are cached by the caller and shared across the
regularization grid). Working pairs are chosen as the maximal
KKT-violating pair; the two-variable subproblem is solved analytically
and clipped to the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import kernel_value

MAX_UPDATES = 10_000_000


class ConvergenceError(RuntimeError):
    """Raised when SMO hits the pair-update cap before meeting tolerance."""


@dataclass(eq=False)
class TrainingSet:
    """Samples (dense or decomposed tensors) with labels in {-1, +1}."""

    samples: list
    labels: np.ndarray

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if len(self.samples) != len(self.labels):
            raise ValueError("sample and label counts differ")
        bad = set(np.unique(self.labels)) - {-1.0, 1.0}
        if bad:
            raise ValueError(f"labels must be -1 or +1, found {sorted(bad)}")


@dataclass(eq=False)
class SvmModel:
    """Trained dual classifier: weights, bias, and training references."""

    alphas: np.ndarray
    bias: float
    C: float
    labels: np.ndarray
    samples: list | None = None
    spec: object | None = None
    bias_fallback: bool = False
    dual_objective: float = 0.0
    updates: int = 0
    objective_history: list | None = None

    @property
    def support_indices(self):
        return np.where(self.alphas > 0)[0]


def dual_objective(alphas, labels, gram):
    """Value of the dual objective sum(a) - 1/2 a'Qa with Q = yy' * K."""
    q = gram * np.outer(labels, labels)
    return float(alphas.sum() - 0.5 * alphas @ q @ alphas)


def train(ts, gram, C, tol=1e-3, spec=None, max_updates=MAX_UPDATES,
          record_objective=False):
    """Solve the soft-margin dual on a precomputed Gram matrix.

    Maximizes sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij subject to
    0 <= a_i <= C and sum_i a_i y_i = 0, stopping when the largest KKT
    violation drops below `tol`. Raises ConvergenceError after
    `max_updates` pair updates; raises ValueError for C <= 0, a
    single-class training set, or a non-symmetric Gram matrix.
    """
    if not C > 0:
        raise ValueError("C must be positive")
    y = ts.labels
    n = len(y)
    gram = np.asarray(gram, dtype=np.float64)
    if gram.shape != (n, n):
        raise ValueError(f"gram shape {gram.shape} does not match {n} samples")
    scale = np.max(np.abs(gram)) if gram.size else 1.0
    if not np.allclose(gram, gram.T, rtol=0.0, atol=1e-12 * max(scale, 1.0)):
        raise ValueError("gram matrix is not symmetric")
    if np.all(y > 0) or np.all(y < 0):
        raise ValueError("training set must contain both classes")

    q = gram * np.outer(y, y)
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a)
    history = [0.0] if record_objective else None
    updates = 0
    idx = np.arange(n)

    while True:
        yg = y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
        if not up.any() or not low.any():
            break
        up_idx = idx[up]
        low_idx = idx[low]
        i = up_idx[np.argmax(-yg[up_idx])]
        j = low_idx[np.argmin(-yg[low_idx])]
        violation = (-yg[i]) - (-yg[j])
        if violation <= tol:
            break
        if updates >= max_updates:
            raise ConvergenceError(
                f"KKT violation {violation:.3e} > {tol} after {updates} updates")

        curv = max(gram[i, i] + gram[j, j] - 2.0 * gram[i, j], 1e-12)
        step = violation / curv
        bound_i = (C - alpha[i]) if y[i] > 0 else alpha[i]
        bound_j = alpha[j] if y[j] > 0 else (C - alpha[j])
        step = min(step, bound_i, bound_j)

        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        # land exactly on the box when a bound binds
        if step == bound_i:
            alpha[i] = C if y[i] > 0 else 0.0
        if step == bound_j:
            alpha[j] = 0.0 if y[j] > 0 else C
        grad += (y[i] * step) * q[:, i] - (y[j] * step) * q[:, j]
        updates += 1
        if record_objective:
            history.append(dual_objective(alpha, y, gram))

    f0 = (alpha * y) @ gram
    free = (alpha > 0) & (alpha < C)
    if free.any():
        bias = float(np.mean(y[free] - f0[free]))
        fallback = False
    else:
        bias = float(-0.5 * (np.max(f0[y < 0]) + np.min(f0[y > 0])))
        fallback = True

    return SvmModel(
        alphas=alpha,
        bias=bias,
        C=float(C),
        labels=y.copy(),
        samples=list(ts.samples) if ts.samples is not None else None,
        spec=spec,
        bias_fallback=fallback,
        dual_objective=dual_objective(alpha, y, gram),
        updates=updates,
        objective_history=history,
    )


def decision_value(model, x):
    """sum_i a_i y_i K(X_i, x) + b for a single query sample."""
    if model.spec is None or model.samples is None:
        raise ValueError("model carries no kernel spec; use decision_from_gram")
    total = model.bias
    for i in model.support_indices:
        total += model.alphas[i] * model.labels[i] * kernel_value(
            model.spec, model.samples[i], x)
    return float(total)


def predict(model, x):
    """Predicted label in {-1, +1}; a decision value of exactly 0 maps to +1."""
    return 1 if decision_value(model, x) >= 0 else -1


def decision_from_gram(model, kvec):
    """Decision values from precomputed kernel columns.

    `kvec` holds K(X_i, x) for every training sample i, either as a vector
    (one query) or a matrix with one column per query.
    """
    kvec = np.asarray(kvec, dtype=np.float64)
    return (model.alphas * model.labels) @ kvec + model.bias


def predict_from_gram(model, kvec):
    """Labels in {-1, +1} from precomputed kernel columns."""
    dec = np.atleast_1d(decision_from_gram(model, kvec))
    return np.where(dec >= 0, 1, -1)


__all__ = [
    "MAX_UPDATES",
    "ConvergenceError",
    "TrainingSet",
    "SvmModel",
    "dual_objective",
    "train",
    "decision_value",
    "predict",
    "decision_from_gram",
    "predict_from_gram",
]
