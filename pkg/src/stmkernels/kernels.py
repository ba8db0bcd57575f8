"""Tensor kernels and Gram-matrix assembly.

Four kernel families over decomposed (or dense) tensors:

* ``gaussian``  - exp(-||X - Y||_F^2 / 2g^2), with the squared distance
  expanded format-natively for Tucker, Kruskal, and TT inputs.
* ``dusk``      - sum over CP column pairs of the product over modes of
  Gaussian scalar kernels on the factor columns.
* ``subspace``  - product over modes of Gaussian kernels on the chordal
  distance between the orthonormal factor column spaces.
* ``wsek``      - product over modes of summed pairwise Gaussian kernels
  on the sigma**p weighted factor columns.

Kernel entries are evaluated in a canonical argument order, so swapping
the two inputs of any kernel function returns a bitwise identical value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tensor
from .decomp import KruskalTensor, TTTensor, TuckerTensor

KINDS = ("gaussian", "dusk", "subspace", "wsek")


@dataclass(frozen=True)
class KernelSpec:
    """Everything needed to evaluate one Gram-matrix entry.

    `ranks` holds the per-mode decomposition ranks (a single integer means
    the same rank in every mode, and the CP rank for `dusk`). `p` is the
    weighting power used when decomposing for `wsek`; None means 1/M.
    """

    kind: str
    g: float
    ranks: tuple | int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not self.g > 0:
            raise ValueError("length scale g must be positive")
        if self.ranks is not None:
            ranks = self.ranks if isinstance(self.ranks, tuple) else (self.ranks,)
            if any(int(r) < 1 for r in ranks):
                raise ValueError("ranks must be positive")

    def mode_ranks(self, order):
        if self.ranks is None:
            raise ValueError("kernel spec carries no ranks")
        if isinstance(self.ranks, int):
            return (self.ranks,) * order
        return tuple(self.ranks)


# ---------------------------------------------------------------------------
# format-native inner products
# ---------------------------------------------------------------------------

def _pair_inner(x, y):
    if isinstance(x, np.ndarray):
        return tensor.inner(x, y)
    if isinstance(x, TuckerTensor):
        z = y.core
        for m in range(x.order):
            z = tensor.mode_product(z, x.factors[m].T @ y.factors[m], m + 1)
        return tensor.inner(x.core, z)
    if isinstance(x, KruskalTensor):
        h = np.outer(x.weights, y.weights)
        for fx, fy in zip(x.factors, y.factors):
            h = h * (fx.T @ fy)
        return float(h.sum())
    if isinstance(x, TTTensor):
        v = np.ones((1, 1))
        for cx, cy in zip(x.cores, y.cores):
            v = np.einsum("ab,aic,bid->cd", v, cx, cy)
        return float(v[0, 0])
    raise TypeError(f"unsupported tensor representation {type(x).__name__}")


def _check_pair(x, y):
    # ndarray and every decomposition type expose mode sizes as .shape
    if type(x) is not type(y):
        raise ValueError(
            f"mixed representations: {type(x).__name__} vs {type(y).__name__}")
    if tuple(x.shape) != tuple(y.shape):
        raise ValueError(f"shape mismatch: {tuple(x.shape)} vs {tuple(y.shape)}")


def _canonical(x, y):
    # Fixed evaluation order: both argument orders run the exact same
    # floating-point computation, making every kernel bitwise symmetric.
    if x is not y and id(y) < id(x):
        return y, x
    return x, y


def _cross_sqdist(a, b):
    """Matrix of squared Euclidean distances between columns of a and b."""
    diff = a[:, :, None] - b[:, None, :]
    return np.einsum("kij,kij->ij", diff, diff)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def scalar_kernel(a, b, g):
    """Gaussian kernel exp(-||a - b||^2 / 2g^2) on two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"vector length mismatch: {a.size} vs {b.size}")
    if not g > 0:
        raise ValueError("length scale g must be positive")
    d2 = float(np.sum((a - b) ** 2))
    return math.exp(-d2 / (2.0 * g * g))


def _gaussian_raw(x, y, g):
    _check_pair(x, y)
    if x is y:
        return 1.0
    if isinstance(x, np.ndarray):
        d2 = float(np.sum((x - y) ** 2))
    else:
        d2 = (_pair_inner(x, x) + _pair_inner(y, y)) - 2.0 * _pair_inner(x, y)
        d2 = max(d2, 0.0)
    return math.exp(-d2 / (2.0 * g * g))


def gaussian_kernel(x, y, g):
    """exp(-||X - Y||_F^2 / 2g^2) for dense or decomposed inputs.

    For decomposed inputs the squared distance is expanded as
    ||X||^2 - 2<X,Y> + ||Y||^2 with format-native contractions.
    """
    x, y = _canonical(x, y)
    return _gaussian_raw(x, y, g)


def _absorbed_columns(kt):
    if np.all(kt.weights == 1.0):
        return kt.factors
    scale = kt.weights ** (1.0 / kt.order)
    return [f * scale[None, :] for f in kt.factors]


def _dusk_raw(x, y, g):
    if not isinstance(x, KruskalTensor) or not isinstance(y, KruskalTensor):
        raise TypeError("dusk kernel requires Kruskal (CP) inputs")
    _check_pair(x, y)
    fx = _absorbed_columns(x)
    fy = _absorbed_columns(y)
    expo = np.zeros((x.rank, y.rank))
    for am, bm in zip(fx, fy):
        expo += _cross_sqdist(am, bm)
    return float(math.fsum(np.exp(-expo / (2.0 * g * g)).ravel()))


def dusk_kernel(x, y, g):
    """Sum over CP column pairs of per-mode Gaussian kernel products."""
    x, y = _canonical(x, y)
    return _dusk_raw(x, y, g)


def _subspace_raw(x, y, g):
    if not isinstance(x, TuckerTensor) or not isinstance(y, TuckerTensor):
        raise TypeError("subspace kernel requires Tucker inputs")
    _check_pair(x, y)
    if x is y:
        return 1.0
    expo = 0.0
    for am, bm in zip(x.unweighted_factors(), y.unweighted_factors()):
        cross = am.T @ bm
        d2 = am.shape[1] + bm.shape[1] - 2.0 * float(np.sum(cross * cross))
        expo += max(d2, 0.0)
    return math.exp(-expo / (2.0 * g * g))


def subspace_kernel(x, y, g):
    """Product over modes of exp(-||P_x - P_y||_F^2 / 2g^2) on the
    orthonormal factor column-space projectors.

    The projector distance is computed as R_x + R_y - 2 ||U_x' U_y||_F^2
    without forming any I_m x I_m projector. Invariant to rotation and
    reflection of the factor columns and to their sigma weighting.
    """
    x, y = _canonical(x, y)
    return _subspace_raw(x, y, g)


def _wsek_raw(x, y, g):
    if not isinstance(x, TuckerTensor) or not isinstance(y, TuckerTensor):
        raise TypeError("wsek kernel requires Tucker inputs")
    _check_pair(x, y)
    if x.p != y.p:
        raise ValueError(f"weighting powers differ: {x.p} vs {y.p}")
    value = 1.0
    for am, bm in zip(x.factors, y.factors):
        d2 = _cross_sqdist(am, bm)
        value *= math.fsum(np.exp(-d2 / (2.0 * g * g)).ravel())
    return float(value)


def wsek_kernel(x, y, g):
    """Product over modes of summed pairwise Gaussian kernels on the
    weighted factor columns (columns scaled by sigma**p)."""
    x, y = _canonical(x, y)
    return _wsek_raw(x, y, g)


_ENTRY_RAW = {
    "gaussian": _gaussian_raw,
    "dusk": _dusk_raw,
    "subspace": _subspace_raw,
    "wsek": _wsek_raw,
}

_ENTRY = {
    "gaussian": gaussian_kernel,
    "dusk": dusk_kernel,
    "subspace": subspace_kernel,
    "wsek": wsek_kernel,
}


def kernel_value(spec, x, y):
    """Evaluate the kernel named by `spec` on one pair of samples."""
    return _ENTRY[spec.kind](x, y, spec.g)


def gram_matrix(samples, spec):
    """Symmetric kernel matrix over a homogeneous sample list.

    Entries are computed for i <= j only in list order and mirrored, which
    keeps repeated runs bitwise reproducible. For `gaussian` and
    `subspace` the diagonal is exactly 1.
    """
    n = len(samples)
    if n == 0:
        raise ValueError("empty sample list")
    first = samples[0]
    for s in samples[1:]:
        _check_pair(first, s)
        if isinstance(s, TuckerTensor) and spec.kind == "wsek" and s.p != first.p:
            raise ValueError("heterogeneous weighting powers in sample list")
    entry = _ENTRY_RAW[spec.kind]
    k = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            v = entry(samples[i], samples[j], spec.g)
            k[i, j] = v
            k[j, i] = v
    return k


__all__ = [
    "KINDS",
    "KernelSpec",
    "scalar_kernel",
    "gaussian_kernel",
    "dusk_kernel",
    "subspace_kernel",
    "wsek_kernel",
    "kernel_value",
    "gram_matrix",
]
