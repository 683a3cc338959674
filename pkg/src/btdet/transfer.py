"""Transfer matrices of block-tridiagonal matrices.

Each factor is a ``2m x 2m`` companion-like matrix that maps the pair
``(psi_k, psi_{k-1})`` to ``(psi_{k+1}, psi_k)``.  Products are accumulated
right to left, so the ``i = 1`` factor is applied first.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .core import BlockTridiagSpec, LogDet, lu_logdet, lu_solve
from .errors import UsageError


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    matrix: np.ndarray
    origin: str  # "cornered" or "corner_free"
    lambda_shift: Optional[complex] = None
    factors: tuple = field(default=(), repr=False)  # applied order, F_1 first

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.dim // 2

    def block(self, r: int, c: int) -> np.ndarray:
        """1-based ``m x m`` block, e.g. ``block(1, 1)`` is the upper-left one."""
        m = self.m
        return self.matrix[(r - 1) * m : r * m, (c - 1) * m : c * m]

    @property
    def t11(self) -> np.ndarray:
        return self.block(1, 1)

    def shifted_logdet(self, z: complex, method: str = "cyclic") -> LogDet:
        """``det(T - z I)``.

        ``method="product"`` factors the formed matrix; ``"cyclic"`` works on
        the factor sequence (see :func:`product_shift_logdet`).
        """
        if method == "product" or not self.factors:
            return lu_logdet(self.matrix - complex(z) * np.eye(self.dim))
        if method != "cyclic":
            raise UsageError(f"unknown method {method!r}")
        return product_shift_logdet(self.factors, z)


def _factor(top_left: np.ndarray, top_right: np.ndarray) -> np.ndarray:
    m = top_left.shape[0]
    F = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    F[:m, :m] = top_left
    F[:m, m:] = top_right
    F[m:, :m] = np.eye(m)
    return F


def _shifted_a(spec: BlockTridiagSpec, i: int, lam: complex) -> np.ndarray:
    a = spec.a(i)
    return a - lam * np.eye(spec.m) if lam else a


def _scaled_pair(spec, i, lam, right):
    """``-B_i^{-1} [A_i - lam, right]`` in one solve."""
    m = spec.m
    X = lu_solve(spec.b(i), np.hstack([_shifted_a(spec, i, lam), right]), index=i)
    return -X[:, :m], -X[:, m:]


def cornered_factors(spec: BlockTridiagSpec, lam: complex = 0.0) -> list:
    """Factors ``i = 1..n`` of the cornered transfer matrix (applied order)."""
    if not spec.has_corners:
        raise UsageError("cornered transfer matrix needs a spec with corners")
    return [_factor(*_scaled_pair(spec, i, lam, spec.c(i - 1))) for i in range(1, spec.n + 1)]


def corner_free_factor(spec: BlockTridiagSpec, k: int, lam: complex = 0.0) -> np.ndarray:
    """The ``k``-th factor of the corner-free transfer matrix.

    ``k = n`` carries no inverse; ``k = 1`` has ``-B_1^{-1}`` in its
    upper-right block (it only ever multiplies the vanishing ``psi_0``).
    """
    n, m = spec.n, spec.m
    if k == n:
        return _factor(-_shifted_a(spec, n, lam), -spec.c(n - 1))
    right = np.eye(m) if k == 1 else spec.c(k - 1)
    return _factor(*_scaled_pair(spec, k, lam, right))


def _product(factors, m) -> np.ndarray:
    T = np.eye(2 * m, dtype=np.complex128)
    for F in factors:
        T = F @ T
    return T


def build_transfer(spec: BlockTridiagSpec, lam: complex = 0.0) -> TransferMatrix:
    """Cornered transfer matrix ``T(lam) = F_n ... F_1``."""
    lam = complex(lam)
    factors = tuple(cornered_factors(spec, lam))
    return TransferMatrix(_product(factors, spec.m), "cornered", lam, factors)


def product_shift_logdet(factors, z: complex) -> LogDet:
    """``det(F_n ... F_1 - z I)`` without forming the product.

    The determinant equals that of the block-cyclic system

        -F_i x_i + x_{i+1} = 0   (i < n),     F_n x_n - z x_1 = 0,

    which is eliminated block column by block column with partial pivoting
    over the two block rows that are nonzero in that column (the current row
    and the fill row carried along from the ``-z I`` corner).  Long products
    lose their small and mid-size eigenvalues to rounding when formed
    explicitly; this route keeps the backward error at the factor level.
    """
    z = complex(z)
    n = len(factors)
    d = factors[0].shape[0]
    eye = np.eye(d, dtype=np.complex128)
    if n == 1:
        return lu_logdet(factors[0] - z * eye)
    acc = LogDet()
    zero = np.zeros((d, d), dtype=np.complex128)
    # fill row: its block in the current pivot column, and in the last column
    fill_cur = -z * eye
    fill_last = np.array(factors[-1], dtype=np.complex128)
    for j in range(n - 1):
        last = j + 1 == n - 1
        # row j: col j -> -F_j, col j+1 -> I (which is the last column when last)
        panel = np.empty((2 * d, d), dtype=np.complex128)
        panel[:d] = -factors[j]
        panel[d:] = fill_cur
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            lu, piv = sla.lu_factor(panel, check_finite=False, overwrite_a=True)
        u = np.diagonal(lu)[:d]
        if np.any(u == 0):
            return LogDet(1.0 + 0.0j, -math.inf)
        perm = np.arange(2 * d)
        swaps = 0
        for i, p in enumerate(piv):
            if p != i:
                perm[i], perm[p] = perm[p], perm[i]
                swaps += 1
        mag = np.abs(u)
        ph = complex(np.prod(u / mag)) * (-1 if swaps % 2 else 1)
        acc = acc * LogDet(ph / abs(ph), float(np.sum(np.log(mag))))
        L1 = lu[:d]
        L2 = lu[d:]
        # right-hand sides: [last column | next column], top rows then fill rows
        W = np.empty((2 * d, 2 * d if not last else d), dtype=np.complex128)
        if last:
            W[:d] = eye
            W[d:] = fill_last
        else:
            W[:d, :d] = zero
            W[d:, :d] = fill_last
            W[:d, d:] = eye
            W[d:, d:] = zero
        W = W[perm]
        top = sla.solve_triangular(L1, W[:d], lower=True, unit_diagonal=True, check_finite=False)
        R = W[d:] - L2 @ top
        fill_last = R[:, :d]
        fill_cur = None if last else R[:, d:]
    return acc * lu_logdet(fill_last)


def build_transfer_inverse(spec: BlockTridiagSpec, lam: complex = 0.0) -> TransferMatrix:
    """``T(lam)^{-1} = F_1^{-1} ... F_n^{-1}`` from the exact factor inverses.

    ``F_i^{-1} = [[0, I], [-C_{i-1}^{-1} B_i, -C_{i-1}^{-1}(A_i - lam)]]``, so
    every ``C_{i-1}`` must pass the guard.  Inverting the formed product
    instead loses the small eigenvalues of long chains.
    """
    if not spec.has_corners:
        raise UsageError("cornered transfer matrix needs a spec with corners")
    lam = complex(lam)
    m = spec.m
    inv_factors = []
    for i in range(spec.n, 0, -1):
        rhs = np.hstack([spec.b(i), _shifted_a(spec, i, lam)])
        X = lu_solve(spec.c(i - 1), rhs, index=i - 1, label="C")
        G = np.zeros((2 * m, 2 * m), dtype=np.complex128)
        G[:m, m:] = np.eye(m)
        G[m:, :m] = -X[:, :m]
        G[m:, m:] = -X[:, m:]
        inv_factors.append(G)
    return TransferMatrix(_product(inv_factors, m), "cornered", lam, tuple(inv_factors))


def build_transfer_no_corners(spec: BlockTridiagSpec, lam: complex = 0.0) -> TransferMatrix:
    if spec.has_corners:
        raise UsageError("corner-free transfer matrix needs a spec without corners")
    if spec.n < 2:
        raise UsageError("corner-free transfer matrix needs n >= 2")
    return partial_transfer(spec, spec.n, lam)


def partial_transfer(spec: BlockTridiagSpec, k: int, lam: complex = 0.0) -> TransferMatrix:
    """Partial product ``T(k) = F_k ... F_1`` of the corner-free factors.

    ``T(0)`` is the identity; ``T(n)`` is the full corner-free transfer matrix.
    """
    if spec.has_corners:
        raise UsageError("partial transfer products are defined for corner-free specs")
    if not 0 <= k <= spec.n:
        raise UsageError(f"k={k} out of range 0..{spec.n}")
    if k >= 1 and spec.n < 2:
        raise UsageError("corner-free transfer factors need n >= 2")
    lam = complex(lam)
    factors = tuple(corner_free_factor(spec, j, lam) for j in range(1, k + 1))
    return TransferMatrix(_product(factors, spec.m), "corner_free", lam, factors)


def partial_t11_sequence(spec: BlockTridiagSpec, lam: complex = 0.0) -> list:
    """``[T(0)_11, T(1)_11, ..., T(n)_11]`` from a single running product."""
    m = spec.m
    T = np.eye(2 * m, dtype=np.complex128)
    out = [T[:m, :m].copy()]
    for k in range(1, spec.n + 1):
        T = corner_free_factor(spec, k, lam) @ T
        out.append(T[:m, :m].copy())
    return out
