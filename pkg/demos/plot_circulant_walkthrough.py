"""
A three-site ring, by hand and by transfer matrix
=================================================

The smallest cornered example: three sites with zero on-site terms and unit
hopping, closed into a ring whose wrap-around bonds carry the boundary
parameter ``z``.  Its determinant is ``z + 1/z``, which makes every step
easy to check.
"""

import numpy as np

import btdet
from btdet.instances import circulant3

spec = circulant3()

# The dense matrix at z = 2: the corners hold C_0 / z and z B_n
print(btdet.assemble_dense(spec, 2.0).real)

# Each transfer factor is [[0, -1], [1, 0]], so three of them give
# [[0, 1], [-1, 0]], a rotation with det 1
T = btdet.build_transfer(spec)
print(np.round(T.matrix.real, 12))

# The determinant through the transfer matrix agrees with z + 1/z
for z in (1.0, 2.0, 1j, np.exp(0.3j)):
    print(z, btdet.det_corners(spec, z), z + 1 / z)

# Eigenvalue <-> boundary parameter: at lambda = 0 the ring is singular
# exactly where z + 1/z = 0
print("z with 0 in the spectrum:", np.round(btdet.dual_roots(spec, 0.0), 12))

# ...and at z = 1 the characteristic polynomial is lambda^3 - 3 lambda - 2
p = btdet.charpoly(spec, 1.0)
print("charpoly coefficients (ascending):", np.round(p.coeffs.real, 12))

# A null vector for the top eigenvalue 2 is the uniform state
cert = btdet.null_vector(spec, 1.0, 2.0)
psi = cert.as_vector()
print("psi / psi_1 =", np.round(psi / psi[0], 10), "residual", cert.residual)
