"""Brute-force referee: dense assembly plus LU.

Nothing here touches transfer matrices, so agreement with the transfer
routes is an independent check.
"""

from __future__ import annotations

import numpy as np

from .core import BlockTridiagSpec, lu_det
from .errors import ZeroBoundaryParameter


def assemble_dense(spec: BlockTridiagSpec, z: complex = 1.0) -> np.ndarray:
    """The full ``nm x nm`` matrix, corners scaled as ``C_0/z`` and ``z B_n``."""
    n, m = spec.n, spec.m
    z = complex(z)
    if spec.has_corners and z == 0:
        raise ZeroBoundaryParameter()
    M = np.zeros((n * m, n * m), dtype=np.complex128)

    def put(r, c, block):
        M[(r - 1) * m : r * m, (c - 1) * m : c * m] = block

    for i in range(1, n + 1):
        put(i, i, spec.a(i))
    for i in range(1, n):
        put(i, i + 1, spec.b(i))
        put(i + 1, i, spec.c(i))
    if spec.has_corners:
        put(1, n, spec.c(0) / z)
        put(n, 1, z * spec.b(n))
    return M


def det_dense(spec: BlockTridiagSpec, z: complex = 1.0) -> complex:
    return lu_det(assemble_dense(spec, z))


def charpoly_dense(spec: BlockTridiagSpec, z: complex, lam: complex) -> complex:
    """``det(lam I - M(z))`` straight from the dense matrix."""
    M = assemble_dense(spec, z)
    return lu_det(complex(lam) * np.eye(M.shape[0]) - M)


def extract_block(M: np.ndarray, m: int, r: int, c: int) -> np.ndarray:
    return M[(r - 1) * m : r * m, (c - 1) * m : c * m]
