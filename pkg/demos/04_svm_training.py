"""Kernel SVM on a precomputed Gram matrix.

Trains the sequential-minimal-optimization solver on a small separable
problem, inspects the dual solution, and classifies held-out samples.
Run as `python demos/04_svm_training.py`.
"""

import numpy as np

from stmkernels import (
    KernelSpec,
    TrainingSet,
    gram_matrix,
    predict,
    train,
    weighted_hosvd,
)
from stmkernels.svm import decision_from_gram
from stmkernels.kernels import kernel_value

rng = np.random.default_rng(3)

# two clusters of order-3 tensors around distinct centers
centers = [3.0 * rng.standard_normal((10, 10, 10)) for _ in range(2)]
samples, labels = [], []
for label, center in ((-1, centers[0]), (1, centers[1])):
    for _ in range(12):
        dense = center + 0.5 * rng.standard_normal((10, 10, 10))
        samples.append(weighted_hosvd(dense, (2, 2, 2), p=1 / 3))
        labels.append(label)
labels = np.array(labels, dtype=float)

spec = KernelSpec("wsek", g=4.0)
k = gram_matrix(samples, spec)

model = train(TrainingSet(samples, labels), k, C=10.0, tol=1e-6, spec=spec)
print("support vectors:", len(model.support_indices), "of", len(samples))
print("bias:", round(model.bias, 4), " dual objective:",
      round(model.dual_objective, 4))
print("box constraints hold:",
      bool(np.all((model.alphas >= 0) & (model.alphas <= 10.0))))
print("equality constraint |sum(alpha*y)| =",
      f"{abs(np.dot(model.alphas, labels)):.2e}")

# training accuracy via the precomputed Gram
train_pred = np.where(decision_from_gram(model, k) >= 0, 1, -1)
print("training accuracy:", np.mean(train_pred == labels))

# held-out samples evaluated through the kernel spec
correct = 0
for label, center in ((-1, centers[0]), (1, centers[1])):
    for _ in range(5):
        dense = center + 0.5 * rng.standard_normal((10, 10, 10))
        x = weighted_hosvd(dense, (2, 2, 2), p=1 / 3)
        correct += predict(model, x) == label
print("held-out accuracy:", correct / 10)

# the kernel spec fully determines one Gram entry
v = kernel_value(spec, samples[0], samples[1])
print("K(x0, x1) =", round(v, 6), "== gram[0,1]:", v == k[0, 1])
