"""Low-rank decompositions: weighted HOSVD, CP-ALS, TT-SVD, and the
conversions into CP form.

Run as `python demos/02_decompositions.py`.
"""

import numpy as np

from stmkernels import (
    cp_als,
    kruskal_reconstruct,
    reweight,
    tt_reconstruct,
    tt_svd,
    tt_to_cp,
    tucker_reconstruct,
    tucker_to_cp,
    weighted_hosvd,
)
from stmkernels.tensor import frobenius_norm, mode_product

rng = np.random.default_rng(42)


def low_rank_tensor(shape, ranks):
    t = rng.standard_normal(ranks)
    for m, (i, r) in enumerate(zip(shape, ranks)):
        q, _ = np.linalg.qr(rng.standard_normal((i, r)))
        t = mode_product(t, q, m + 1)
    return t


# --- weighted HOSVD -------------------------------------------------------
t = low_rank_tensor((20, 20, 20), (3, 3, 3)) \
    + 0.001 * rng.standard_normal((20, 20, 20))

tk = weighted_hosvd(t, (3, 3, 3), p=1 / 3)
rel = frobenius_norm(tucker_reconstruct(tk) - t) / frobenius_norm(t)
print("rank-(3,3,3) weighted HOSVD, relative error:", f"{rel:.2e}")
print("mode-1 singular values:", np.round(tk.sigmas[0], 3))

# each weighted factor column has norm sigma**p; the orthonormal factors
# are recovered by dividing the weights back out
norms = np.linalg.norm(tk.factors[0], axis=0)
print("column norms == sigma**p:", np.allclose(norms, tk.sigmas[0] ** tk.p))

# changing the weighting power only rescales factors and core
tk0 = reweight(tk, 0.0)
print("p=0 form reconstructs identically:",
      np.allclose(tucker_reconstruct(tk0), tucker_reconstruct(tk)))

# --- conversions into CP --------------------------------------------------
kt = tucker_to_cp(tk)
err = frobenius_norm(kruskal_reconstruct(kt) - tucker_reconstruct(tk))
print(f"\ntucker_to_cp gives rank {kt.rank}, contraction error {err:.2e}")

tt = tt_svd(t, (3, 3))
print("TT ranks:", tt.ranks, " reconstruction error:",
      f"{frobenius_norm(tt_reconstruct(tt) - t) / frobenius_norm(t):.2e}")
kt2 = tt_to_cp(tt)
col_norms = np.array([np.linalg.norm(f, axis=0) for f in kt2.factors])
print("tt_to_cp column norms equilibrated across modes:",
      np.allclose(col_norms.max(0), col_norms.min(0)))

# --- CP by alternating least squares --------------------------------------
# recover an exact rank-4 sum of outer products
true_factors = [rng.standard_normal((15, 4)) for _ in range(3)]
x = np.zeros((15, 15, 15))
for r in range(4):
    x += np.multiply.outer(np.multiply.outer(
        true_factors[0][:, r], true_factors[1][:, r]), true_factors[2][:, r])

cp, info = cp_als(x, rank=4, max_iters=200, tol=1e-12)
err = frobenius_norm(kruskal_reconstruct(cp) - x) / frobenius_norm(x)
print(f"\ncp_als on an exact rank-4 tensor: {info['iterations']} sweeps, "
      f"relative error {err:.2e}, converged={info['converged']}")
