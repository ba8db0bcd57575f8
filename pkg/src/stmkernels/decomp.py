"""Low-rank tensor decompositions and conversions between them.

Provides the singular-value-weighted HOSVD (factors rescaled by sigma**p,
core rescaled inversely), CP via alternating least squares, TT via
sequential SVDs, and the uniqueness-enforced conversions of Tucker and TT
representations into CP form.

Sign convention: every retained left singular vector is flipped so that
its entry of maximum absolute value is positive (ties broken by the
smallest row index). This makes repeated decompositions of the same input
bitwise identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .tensor import frobenius_norm, matricize, mode_product

# Singular values below SIGMA_FLOOR * sigma_max count as numerically zero:
# they keep weight 1 in the factor scaling (the 0**0 = 1 convention) and
# their directions are dropped from the inverse-weighted core projection.
SIGMA_FLOOR = 1e-12


@dataclass(eq=False)
class TuckerTensor:
    """Core tensor plus per-mode weighted factor matrices.

    ``factors[m]`` holds U_hat^(m) * diag(sigma^(m))**p, so the unweighted
    (orthonormal) factors are recovered by dividing the columns by the
    sigma weights. ``sigmas`` may be None for externally constructed
    Tucker representations that never went through an SVD (then p must
    be 0 and the factors themselves are taken as orthonormal).
    """

    core: np.ndarray
    factors: list
    sigmas: list | None = None
    p: float = 0.0

    def __post_init__(self):
        self.core = np.asarray(self.core, dtype=np.float64)
        self.factors = [np.asarray(f, dtype=np.float64) for f in self.factors]
        if self.core.ndim != len(self.factors):
            raise ValueError("one factor matrix per core mode is required")
        for m, f in enumerate(self.factors):
            if f.ndim != 2 or f.shape[1] != self.core.shape[m]:
                raise ValueError(
                    f"factor {m + 1} has {f.shape} but core mode {m + 1} "
                    f"has size {self.core.shape[m]}")
        if self.sigmas is not None:
            self.sigmas = [np.asarray(s, dtype=np.float64) for s in self.sigmas]
            for m, s in enumerate(self.sigmas):
                if len(s) != self.core.shape[m]:
                    raise ValueError(f"sigma vector {m + 1} length mismatch")
                if np.any(np.diff(s) > 0):
                    raise ValueError(f"sigmas of mode {m + 1} are not nonincreasing")
        elif self.p != 0.0:
            raise ValueError("nonzero weighting power requires sigma vectors")

    @property
    def order(self):
        return self.core.ndim

    @property
    def shape(self):
        return tuple(f.shape[0] for f in self.factors)

    @property
    def ranks(self):
        return self.core.shape

    def unweighted_factors(self):
        """Orthonormal factor matrices with the sigma weighting removed."""
        if self.sigmas is None or self.p == 0.0:
            return list(self.factors)
        return [f / _sigma_weights(s, self.p)[None, :]
                for f, s in zip(self.factors, self.sigmas)]


@dataclass(eq=False)
class KruskalTensor:
    """CP representation: per-mode factors sharing one rank dimension."""

    factors: list
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.factors = [np.asarray(f, dtype=np.float64) for f in self.factors]
        rank = self.factors[0].shape[1]
        for m, f in enumerate(self.factors):
            if f.ndim != 2 or f.shape[1] != rank:
                raise ValueError(f"factor {m + 1} does not have rank {rank}")
        if self.weights is None:
            self.weights = np.ones(rank)
        else:
            self.weights = np.asarray(self.weights, dtype=np.float64)
            if self.weights.shape != (rank,):
                raise ValueError("weights length must equal the rank")
            if np.any(self.weights < 0):
                raise ValueError("weights must be nonnegative")

    @property
    def order(self):
        return len(self.factors)

    @property
    def shape(self):
        return tuple(f.shape[0] for f in self.factors)

    @property
    def rank(self):
        return self.factors[0].shape[1]


@dataclass(eq=False)
class TTTensor:
    """Tensor-train representation: a chain of order-3 cores."""

    cores: list = field(default_factory=list)

    def __post_init__(self):
        self.cores = [np.asarray(c, dtype=np.float64) for c in self.cores]
        if not self.cores:
            raise ValueError("at least one core is required")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[2] != 1:
            raise ValueError("boundary ranks must equal 1")
        for k in range(len(self.cores) - 1):
            if self.cores[k].shape[2] != self.cores[k + 1].shape[0]:
                raise ValueError(
                    f"rank mismatch between cores {k + 1} and {k + 2}")

    @property
    def order(self):
        return len(self.cores)

    @property
    def shape(self):
        return tuple(c.shape[1] for c in self.cores)

    @property
    def ranks(self):
        return tuple(c.shape[2] for c in self.cores[:-1])


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _column_signs(u):
    pivot_rows = np.argmax(np.abs(u), axis=0)
    pivots = u[pivot_rows, np.arange(u.shape[1])]
    return np.where(pivots < 0, -1.0, 1.0)


def fix_signs(u):
    """Flip each column of `u` so its max-magnitude entry is positive.

    Ties take the smallest row index; an exactly zero pivot leaves the
    column unchanged. Idempotent and deterministic.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.size == 0:
        return u.copy()
    return u * _column_signs(u)[None, :]


def _tiny_mask(sigmas):
    if sigmas.size == 0:
        return np.zeros(0, dtype=bool)
    return sigmas < SIGMA_FLOOR * sigmas[0]


def _sigma_weights(sigmas, p):
    """sigma**p with numerically zero singular values mapped to weight 1."""
    w = np.ones_like(sigmas)
    keep = ~_tiny_mask(sigmas)
    w[keep] = sigmas[keep] ** p
    return w


def khatri_rao(mats):
    """Columnwise Kronecker product; the first listed matrix varies fastest."""
    out = mats[0]
    for a in mats[1:]:
        out = (a[:, None, :] * out[None, :, :]).reshape(-1, out.shape[1])
    return out


# ---------------------------------------------------------------------------
# weighted HOSVD
# ---------------------------------------------------------------------------

def weighted_hosvd(t, ranks, p=None):
    """Sequentially truncated HOSVD with sigma**p weighted factors.

    Mode by mode, the leading `ranks[m]` left singular vectors of the
    partially projected tensor are extracted, sign-fixed, and recorded
    together with their singular values; the tensor is then projected onto
    that subspace. Afterwards each factor is scaled by diag(sigma**p) and
    the core inversely, so that the contraction of core and factors equals
    the rank-(R_1,...,R_M) sequential truncation of `t` for every p. The
    retained subspaces do not depend on p. Default p is 1/M.

    Requested ranks are additionally capped by the column count of each
    unfolding (directions beyond it carry zero singular values).
    """
    t = np.asarray(t, dtype=np.float64)
    order = t.ndim
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != order:
        raise ValueError(f"expected {order} ranks, got {len(ranks)}")
    for m, r in enumerate(ranks):
        if r < 1 or r > t.shape[m]:
            raise ValueError(
                f"rank {r} invalid for mode {m + 1} of size {t.shape[m]}")
    if p is None:
        p = 1.0 / order
    if frobenius_norm(t) == 0.0:
        raise ValueError("cannot decompose an all-zero tensor")

    g = t
    basis = []
    sigmas = []
    for m in range(order):
        u, s, _ = np.linalg.svd(matricize(g, m + 1), full_matrices=False)
        r = min(ranks[m], u.shape[1])
        u = fix_signs(u[:, :r])
        basis.append(u)
        sigmas.append(s[:r])
        g = mode_product(g, u.T, m + 1)

    factors = []
    for m in range(order):
        w = _sigma_weights(sigmas[m], p)
        factors.append(basis[m] * w[None, :])
        inv = np.where(_tiny_mask(sigmas[m]), 0.0, 1.0 / w)
        bshape = [1] * order
        bshape[m] = len(inv)
        g = g * inv.reshape(bshape)
    return TuckerTensor(core=g, factors=factors, sigmas=sigmas, p=float(p))


def tucker_reconstruct(tt):
    """Contract core and factors back into a dense tensor."""
    out = tt.core
    for m, f in enumerate(tt.factors):
        out = mode_product(out, f, m + 1)
    return out


def reweight(tt, p):
    """Move a Tucker representation to a different weighting power.

    Pure rescaling of factors and core; the represented tensor and the
    underlying subspaces are unchanged. Requires sigma vectors.
    """
    if tt.sigmas is None:
        if p == tt.p:
            return tt
        raise ValueError("cannot reweight without sigma vectors")
    core = tt.core
    factors = []
    for m, (f, s) in enumerate(zip(tt.factors, tt.sigmas)):
        w_old = _sigma_weights(s, tt.p)
        w_new = _sigma_weights(s, p)
        factors.append(f * (w_new / w_old)[None, :])
        bshape = [1] * tt.order
        bshape[m] = len(s)
        core = core * (w_old / w_new).reshape(bshape)
    return TuckerTensor(core=core, factors=factors,
                        sigmas=[s.copy() for s in tt.sigmas], p=float(p))


# ---------------------------------------------------------------------------
# CP via alternating least squares
# ---------------------------------------------------------------------------

def cp_als(t, rank, max_iters=200, tol=1e-8):
    """CP decomposition by alternating least squares.

    Factors are initialized from the leading left singular vectors of each
    unfolding, padded with draws from a fixed generator when the requested
    rank exceeds what an unfolding provides. Sweeps stop when the relative
    reconstruction error changes by less than `tol` or after `max_iters`.
    The returned representation is sign-fixed and norm-equilibrated.

    Returns (KruskalTensor, info) where info records the iteration count,
    final relative error, error history, convergence flag, and a
    `degenerate` flag set when a rank-deficient least-squares system was
    met (the last healthy iterate is returned in that case).
    """
    t = np.asarray(t, dtype=np.float64)
    if rank < 1:
        raise ValueError("rank must be a positive integer")
    order = t.ndim
    norm_t = frobenius_norm(t)

    pad_rng = np.random.default_rng(8191)
    factors = []
    for m in range(order):
        u = np.linalg.svd(matricize(t, m + 1), full_matrices=False)[0]
        have = min(rank, u.shape[1])
        f = u[:, :have]
        if have < rank:
            f = np.hstack([f, pad_rng.standard_normal((t.shape[m], rank - have))])
        factors.append(f)

    grams = [f.T @ f for f in factors]
    history = []
    degenerate = False
    converged = False
    prev_err = None
    iterations = 0

    for _ in range(max_iters):
        snapshot = [f.copy() for f in factors]
        inner_tb = None
        for m in range(order):
            others = [k for k in range(order) if k != m]
            v = np.ones((rank, rank))
            for k in others:
                v = v * grams[k]
            kr = khatri_rao([factors[k] for k in others])
            b = matricize(t, m + 1) @ kr
            if np.linalg.cond(v) > 1e12:
                degenerate = True
                break
            factors[m] = np.linalg.solve(v, b.T).T
            grams[m] = factors[m].T @ factors[m]
            inner_tb = float(np.sum(factors[m] * b))
        if degenerate:
            factors = snapshot
            warnings.warn("rank-deficient least-squares system in CP sweep; "
                          "returning the last healthy iterate")
            break
        iterations += 1
        norm_m2 = float(np.sum(np.prod([g for g in grams], axis=0)))
        resid2 = max(norm_t ** 2 + norm_m2 - 2.0 * inner_tb, 0.0)
        err = np.sqrt(resid2) / norm_t if norm_t > 0 else np.sqrt(resid2)
        history.append(err)
        if prev_err is not None and abs(prev_err - err) < tol:
            converged = True
            break
        prev_err = err

    kt = equilibrate(KruskalTensor(factors), fix_column_signs=True)
    info = {
        "iterations": iterations,
        "rel_error": history[-1] if history else np.nan,
        "error_history": history,
        "converged": converged,
        "degenerate": degenerate,
    }
    return kt, info


def kruskal_reconstruct(kt):
    """Dense tensor represented by a Kruskal form (sum of outer products)."""
    out = np.zeros(kt.shape)
    for r in range(kt.rank):
        term = kt.factors[0][:, r]
        for f in kt.factors[1:]:
            term = np.multiply.outer(term, f[:, r])
        out += kt.weights[r] * term
    return out


def equilibrate(kt, fix_column_signs=False):
    """Redistribute magnitudes so all modes carry equal column norms.

    Each rank-one term's total scalar (its weight times the product of the
    per-mode column norms) is split as the M-th root over all modes; a
    negative total sign lands on the mode-1 column. Terms with any zero
    column become all-zero columns and are retained. Weights come back as
    ones. Applying the operation twice is a fixed point.
    """
    order = kt.order
    factors = [f.copy() for f in kt.factors]
    signs_total = np.ones(kt.rank)
    if fix_column_signs:
        for m in range(order):
            signs = _column_signs(factors[m])
            signs_total *= signs
            factors[m] = factors[m] * signs[None, :]
    norms = np.array([np.linalg.norm(f, axis=0) for f in factors])
    total = kt.weights * np.prod(norms, axis=0) * signs_total
    target = np.abs(total) ** (1.0 / order)
    for m in range(order):
        safe = np.where(norms[m] > 0, norms[m], 1.0)
        scale = np.where(total != 0, target / safe, 0.0)
        factors[m] = factors[m] * scale[None, :]
    factors[0] = factors[0] * np.where(total < 0, -1.0, 1.0)[None, :]
    return KruskalTensor(factors, np.ones(kt.rank))


# ---------------------------------------------------------------------------
# tensor train
# ---------------------------------------------------------------------------

def tt_svd(t, ranks):
    """TT decomposition by sequential SVDs with sign-fixed cores.

    `ranks` lists the M-1 interior ranks. Ranks larger than an unfolding
    allows are clipped to the feasible maximum (with a warning); the
    resulting cores are left-orthogonal and the full contraction equals
    the sequential-SVD truncation of `t`.
    """
    t = np.asarray(t, dtype=np.float64)
    order = t.ndim
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != order - 1:
        raise ValueError(f"expected {order - 1} interior ranks, got {len(ranks)}")
    if any(r < 1 for r in ranks):
        raise ValueError("interior ranks must be positive")

    cores = []
    r_prev = 1
    w = t.reshape(t.shape[0], -1, order="F")
    for m in range(order - 1):
        w = w.reshape(r_prev * t.shape[m], -1, order="F")
        u, s, vt = np.linalg.svd(w, full_matrices=False)
        r = min(ranks[m], u.shape[1])
        if r < ranks[m]:
            warnings.warn(
                f"interior rank {ranks[m]} clipped to {r} at position {m + 1}")
        u = u[:, :r]
        signs = _column_signs(u)
        u = u * signs[None, :]
        cores.append(u.reshape(r_prev, t.shape[m], r, order="F"))
        w = (s[:r, None] * vt[:r]) * signs[:, None]
        r_prev = r
    cores.append(w.reshape(r_prev, t.shape[-1], 1, order="F"))
    return TTTensor(cores)


def tt_reconstruct(tt):
    """Contract a TT representation back into a dense tensor."""
    acc = tt.cores[0][0]
    for c in tt.cores[1:]:
        acc = np.einsum("pa,aiq->piq", acc, c)
        acc = acc.reshape(-1, c.shape[2], order="F")
    return acc.reshape(tt.shape, order="F")


# ---------------------------------------------------------------------------
# conversions to CP
# ---------------------------------------------------------------------------

def tucker_to_cp(tt):
    """Expand a Tucker representation into CP with prod(R_m) rank-one terms.

    Term (r_1,...,r_M) pairs the corresponding factor columns; the core
    entry is distributed as |g|**(1/M) over every mode with its sign on
    the mode-1 column. Zero core entries yield zero columns, which are
    retained. The contraction equals tucker_reconstruct(tt).
    """
    order = tt.order
    core_shape = tt.core.shape
    rank = int(np.prod(core_shape))
    g = tt.core.reshape(-1, order="F")
    idx = np.unravel_index(np.arange(rank), core_shape, order="F")
    scale = np.abs(g) ** (1.0 / order)
    sign = np.where(g < 0, -1.0, 1.0)
    factors = []
    for m in range(order):
        a = tt.factors[m][:, idx[m]] * scale[None, :]
        if m == 0:
            a = a * sign[None, :]
        factors.append(a)
    return KruskalTensor(factors, np.ones(rank))


def tt_to_cp(tt):
    """Expand a TT representation into CP with prod(interior ranks) terms.

    Columns are slices of the cores along their rank links, then the
    column norms are equilibrated across modes (the represented tensor is
    unchanged).
    """
    interior = tt.ranks
    rank = int(np.prod(interior)) if interior else 1
    idx = np.unravel_index(np.arange(rank), interior, order="F") if interior else ()
    factors = [tt.cores[0][0][:, idx[0]] if interior else tt.cores[0][0]]
    for m in range(1, tt.order - 1):
        factors.append(tt.cores[m][idx[m - 1], :, idx[m]].T)
    if tt.order > 1:
        factors.append(tt.cores[-1][idx[-1], :, 0].T if interior
                       else tt.cores[-1][:, :, 0].T)
    return equilibrate(KruskalTensor(factors, np.ones(rank)))


__all__ = [
    "SIGMA_FLOOR",
    "TuckerTensor",
    "KruskalTensor",
    "TTTensor",
    "fix_signs",
    "khatri_rao",
    "weighted_hosvd",
    "tucker_reconstruct",
    "reweight",
    "cp_als",
    "kruskal_reconstruct",
    "equilibrate",
    "tt_svd",
    "tt_reconstruct",
    "tucker_to_cp",
    "tt_to_cp",
]
