"""Dense tensor algebra: unfoldings, mode products, and the container.

Walks through the basic operations every later demo builds on. Run as
`python demos/01_tensor_basics.py`.
"""

import tempfile

import numpy as np

from stmkernels import (
    fold,
    frobenius_norm,
    inner,
    load_tensor,
    matricize,
    mode_product,
    save_tensor,
)

rng = np.random.default_rng(0)

# an order-3 tensor whose flat layout puts mode 1 fastest
t = np.arange(1.0, 25.0).reshape((2, 3, 4), order="F")
print("tensor shape:", t.shape)
print("entry (2,1,1) =", t[1, 0, 0], " entry (1,2,1) =", t[0, 1, 0])

# mode-2 unfolding: 3 rows, 8 columns (modes 1 and 3 fused)
m2 = matricize(t, 2)
print("\nmode-2 unfolding has shape", m2.shape)
print(m2)

# folding back is exact
assert np.array_equal(fold(m2, 2, t.shape), t)
print("fold(matricize(t, 2), 2) restores t exactly")

# mode products contract a matrix into one mode
a = rng.standard_normal((5, 3))
ta = mode_product(t, a, 2)
print("\nafter a 5x3 matrix acts on mode 2:", ta.shape)

# products along distinct modes commute
b = rng.standard_normal((6, 4))
lhs = mode_product(mode_product(t, a, 2), b, 3)
rhs = mode_product(mode_product(t, b, 3), a, 2)
print("distinct-mode products commute:",
      np.allclose(lhs, rhs, rtol=1e-12))

# inner products and norms
print("\n<t, t> =", inner(t, t))
print("||t||  =", frobenius_norm(t))

# binary container round trip
with tempfile.NamedTemporaryFile(suffix=".tnsr") as fh:
    save_tensor(fh.name, t)
    back = load_tensor(fh.name)
    print("\ncontainer round trip bitwise equal:", np.array_equal(back, t))
