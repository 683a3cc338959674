"""Seeded random test instances and small hand-checkable fixtures."""

from __future__ import annotations

import numpy as np

from .core import BlockTridiagSpec


def unit_disk(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. complex samples uniform on the closed unit disk."""
    r = np.sqrt(rng.uniform(0.0, 1.0, size=shape))
    theta = rng.uniform(0.0, 2 * np.pi, size=shape)
    return r * np.exp(1j * theta)


def random_spec(
    rng: np.random.Generator,
    n: int,
    m: int,
    corners: bool = False,
    zero_c: bool = False,
) -> BlockTridiagSpec:
    """Well-conditioned instance: unit-disk entries, diagonal blocks shifted by ``4m I``.

    Corner blocks are drawn like the other off-diagonal blocks.  With
    ``zero_c`` every C block is zero (only meaningful without corners).
    """
    shift = 4 * m * np.eye(m)
    A = [unit_disk(rng, (m, m)) + shift for _ in range(n)]
    nb = n if corners else n - 1
    B = [unit_disk(rng, (m, m)) for _ in range(nb)]
    if zero_c:
        C = [np.zeros((m, m)) for _ in range(nb)]
    else:
        C = [unit_disk(rng, (m, m)) for _ in range(nb)]
    return BlockTridiagSpec(tuple(A), tuple(B), tuple(C), corners)


def scalar_spec(a, b, c, corners: bool = False) -> BlockTridiagSpec:
    """``m = 1`` spec from scalar lists (``b``, ``c`` in storage order)."""
    blk = lambda v: np.array([[v]], dtype=np.complex128)
    return BlockTridiagSpec(tuple(map(blk, a)), tuple(map(blk, b)), tuple(map(blk, c)), corners)


def circulant3() -> BlockTridiagSpec:
    """The 3x3 cornered spec a = 0, b = c = 1; its determinant is ``z + 1/z``."""
    return scalar_spec([0, 0, 0], [1, 1, 1], [1, 1, 1], corners=True)
