"""
Long chains: where forming the transfer matrix breaks down
==========================================================

The product of transfer factors grows exponentially along the chain, and
once it is formed its small eigenvalues are lost to rounding.  Anything
that needs ``det(T - zI)`` for moderate ``|z|`` (or ``det T`` itself)
then degrades.  Evaluating the same determinant by eliminating the
factor chain keeps the error at the level of a single factor.
"""

import time

import numpy as np

import btdet
from btdet.core import rel_err

rng = np.random.default_rng(1)

print(" m   n   formed T      factor chain")
for m, n in [(1, 3), (1, 6), (2, 4), (2, 8), (4, 12)]:
    spec = btdet.random_spec(rng, n, m, corners=True)
    exact = btdet.transfer_det_product(spec)
    formed = rel_err(btdet.transfer_det(spec, method="product").value(), exact)
    chain = rel_err(btdet.transfer_det(spec).value(), exact)
    print(f"{m:2d} {n:3d}   {formed:.2e}      {chain:.2e}")

# The determinant of M(z) itself inherits the same behaviour
spec = btdet.random_spec(rng, 12, 4, corners=True)
z = np.exp(0.7j)
dense = btdet.det_dense(spec, z)
print("det M(z), factor chain:", rel_err(btdet.det_corners(spec, z), dense))
print("det M(z), formed T:    ", rel_err(btdet.det_corners(spec, z, method="product"), dense))

# Without corners the Schur-complement recursion is cheap and, kept in
# log form, far outside double range without overflow
spec = btdet.random_spec(rng, 200, 8)
t0 = time.perf_counter()
d = btdet.det_salkuyeh(spec)
print(f"n=200, m=8: log10|det| = {d.log10_abs:.1f} in {time.perf_counter() - t0:.3f}s")
