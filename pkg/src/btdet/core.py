"""Domain types and dense kernels shared by every other module.

Blocks are plain ``complex128`` numpy arrays of shape ``(m, m)``.  The LU
kernels sit on LAPACK ``getrf``/``getrs`` through :mod:`scipy.linalg`; the
polynomial toolkit (Newton interpolation, Durand-Kerner roots) is local.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    InterpolationDegenerate,
    InvariantViolation,
    NoConvergence,
    SingularOffDiagonal,
    UsageError,
)

PIVOT_RTOL = 1e-13

# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------


def as_block(x, m: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite square complex block (read-only copy)."""
    a = np.array(x, dtype=np.complex128, copy=True)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvariantViolation(f"block must be square with dim >= 1, got shape {a.shape}")
    if m is not None and a.shape[0] != m:
        raise InvariantViolation(f"block has dim {a.shape[0]}, expected {m}")
    if not np.all(np.isfinite(a)):
        raise InvariantViolation("block entries must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BlockTridiagSpec:
    """Compressed block-tridiagonal matrix, optionally with corner blocks.

    Lists are stored in the natural index order:

    * ``A = (A_1, ..., A_n)``
    * corner-free: ``B = (B_1, ..., B_{n-1})``, ``C = (C_1, ..., C_{n-1})``
    * cornered: ``B = (B_1, ..., B_n)``, ``C = (C_0, ..., C_{n-1})``

    ``B_i`` sits at block (i, i+1), ``C_i`` at block (i+1, i).  With corners
    ``C_0`` goes to block (1, n) scaled by ``1/z`` and ``B_n`` to block
    (n, 1) scaled by ``z``.  Use :meth:`b` and :meth:`c` for index-safe access.
    """

    A: tuple
    B: tuple
    C: tuple
    has_corners: bool = False

    def __post_init__(self):
        if len(self.A) < 1:
            raise InvariantViolation("need at least one diagonal block")
        A = tuple(as_block(a) for a in self.A)
        m = A[0].shape[0]
        A = tuple(as_block(a, m) for a in A)
        B = tuple(as_block(b, m) for b in self.B)
        C = tuple(as_block(c, m) for c in self.C)
        n = len(A)
        want = n if self.has_corners else n - 1
        if self.has_corners and n < 3:
            raise InvariantViolation(f"cornered matrices need n >= 3, got n={n}")
        if len(B) != want:
            raise InvariantViolation(f"expected {want} B blocks, got {len(B)}")
        if len(C) != want:
            raise InvariantViolation(f"expected {want} C blocks, got {len(C)}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "has_corners", bool(self.has_corners))

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return self.A[0].shape[0]

    def a(self, i: int) -> np.ndarray:
        return self.A[i - 1]

    def b(self, i: int) -> np.ndarray:
        return self.B[i - 1]

    def c(self, i: int) -> np.ndarray:
        return self.C[i] if self.has_corners else self.C[i - 1]

    def shifted(self, lam: complex) -> "BlockTridiagSpec":
        """Same matrix with every ``A_i`` replaced by ``A_i - lam*I``."""
        eye = np.eye(self.m)
        return BlockTridiagSpec(tuple(a - lam * eye for a in self.A), self.B, self.C, self.has_corners)

    def __eq__(self, other):
        if not isinstance(other, BlockTridiagSpec):
            return NotImplemented
        if (self.has_corners, self.n, self.m, len(self.B)) != (
            other.has_corners,
            other.n,
            other.m,
            len(other.B),
        ):
            return False
        pairs = zip(self.A + self.B + self.C, other.A + other.B + other.C)
        return all(np.array_equal(p, q) for p, q in pairs)

    __hash__ = None


# ---------------------------------------------------------------------------
# log-determinants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogDet:
    """A complex number stored as ``phase * exp(log_magnitude)``.

    Zero is ``LogDet(1, -inf)``.
    """

    phase: complex = 1.0 + 0.0j
    log_magnitude: float = 0.0

    @classmethod
    def from_value(cls, value: complex) -> "LogDet":
        value = complex(value)
        if value == 0:
            return cls(1.0 + 0.0j, -math.inf)
        r = abs(value)
        return cls(value / r, math.log(r))

    def __mul__(self, other):
        if not isinstance(other, LogDet):
            other = LogDet.from_value(other)
        ph = self.phase * other.phase
        ph /= abs(ph)
        return LogDet(ph, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def inverse(self) -> "LogDet":
        return LogDet(self.phase.conjugate(), -self.log_magnitude)

    def value(self) -> complex:
        """Materialize; overflows to ``inf`` outside double range."""
        if self.log_magnitude == -math.inf:
            return 0j
        with np.errstate(over="ignore"):
            return complex(self.phase * np.exp(self.log_magnitude))

    def __complex__(self):
        return self.value()

    @property
    def log10_abs(self) -> float:
        return self.log_magnitude / math.log(10.0)


def logdet_product(factors: Iterable) -> LogDet:
    acc = LogDet()
    for f in factors:
        acc = acc * f
    return acc


# ---------------------------------------------------------------------------
# dense LU kernels
# ---------------------------------------------------------------------------


def _lu(M: np.ndarray):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {M.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        return sla.lu_factor(M, check_finite=False)


def _perm_sign(piv: np.ndarray) -> int:
    return -1 if np.count_nonzero(piv != np.arange(piv.size)) % 2 else 1


def lu_logdet(M) -> LogDet:
    """Overflow-safe determinant from the pivoted LU factors."""
    lu, piv = _lu(M)
    d = np.diagonal(lu)
    if np.any(d == 0):
        return LogDet(1.0 + 0.0j, -math.inf)
    mag = np.abs(d)
    phase = complex(np.prod(d / mag)) * _perm_sign(piv)
    return LogDet(phase / abs(phase), float(np.sum(np.log(mag))))


def lu_det(M) -> complex:
    """Determinant by partially pivoted LU, permutation sign folded in."""
    lu, piv = _lu(M)
    return complex(np.prod(np.diagonal(lu))) * _perm_sign(piv)


def _guard_ok(M, lu) -> bool:
    norm = np.max(np.sum(np.abs(M), axis=1))
    return bool(np.min(np.abs(np.diagonal(lu))) > PIVOT_RTOL * (1.0 + norm))


def singularity_guard(M) -> bool:
    """True iff the smallest LU pivot clears ``1e-13 * (1 + ||M||_inf)``."""
    M = np.asarray(M, dtype=np.complex128)
    lu, _ = _lu(M)
    return _guard_ok(M, lu)


def lu_solve(M, RHS, *, index=None, label="B") -> np.ndarray:
    """Solve ``M X = RHS`` without forming ``M^-1``.

    Raises :class:`SingularOffDiagonal` (tagged with ``index``/``label``)
    when ``M`` fails :func:`singularity_guard`.
    """
    M = np.asarray(M, dtype=np.complex128)
    factors = _lu(M)
    if not _guard_ok(M, factors[0]):
        raise SingularOffDiagonal(index, label)
    return sla.lu_solve(factors, np.asarray(RHS, dtype=np.complex128), check_finite=False)


def mat_mul(P, Q) -> np.ndarray:
    P = np.asarray(P)
    Q = np.asarray(Q)
    if P.ndim != 2 or Q.ndim != 2 or P.shape[1] != Q.shape[0]:
        raise UsageError(f"cannot multiply shapes {P.shape} and {Q.shape}")
    return P @ Q


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial, coefficients in ascending powers."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise UsageError("polynomial needs at least one coefficient")
        if c[-1] == 0 and c.size > 1:
            raise UsageError("leading coefficient must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        acc = np.zeros_like(x)
        for ck in self.coeffs[::-1]:
            acc = acc * x + ck
        return acc if acc.ndim else complex(acc)

    def monic(self) -> "Polynomial":
        return Polynomial(self.coeffs / self.coeffs[-1])

    def taylor_shift(self, a: complex) -> "Polynomial":
        """The polynomial ``x -> p(x + a)``."""
        c = self.coeffs.copy()
        d = self.degree
        for k in range(d):
            for j in range(d - 1, k - 1, -1):
                c[j] += a * c[j + 1]
        return Polynomial(c)

    def cauchy_bound(self) -> float:
        if self.degree == 0:
            return 0.0
        return 1.0 + float(np.max(np.abs(self.coeffs[:-1] / self.coeffs[-1])))

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=6)})"


def poly_interpolate(nodes: Sequence[tuple]) -> Polynomial:
    """Interpolating polynomial through ``(x, y)`` pairs.

    Newton divided differences, then a nested expansion to ascending
    coefficients.  Nodes are processed in Leja order, which keeps the
    divided-difference table well scaled for nodes on a circle.
    """
    pts = [(complex(x), complex(y)) for x, y in nodes]
    if not pts:
        raise UsageError("need at least one node")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    d = xs.size - 1
    if d > 0:
        gaps = np.abs(xs[:, None] - xs[None, :])
        np.fill_diagonal(gaps, np.inf)
        if np.min(gaps) == 0:
            raise InterpolationDegenerate("interpolation nodes must be distinct")

    order = _leja_order(xs)
    xs, ys = xs[order], ys[order]

    dd = ys.copy()
    for j in range(1, d + 1):
        dd[j:] = (dd[j:] - dd[j - 1 : -1]) / (xs[j:] - xs[: d + 1 - j])

    coeffs = np.zeros(d + 1, dtype=np.complex128)
    coeffs[0] = dd[d]
    # p <- p * (x - x_k) + dd[k], with p held in coeffs[:deg+1]
    for k in range(d - 1, -1, -1):
        deg = d - 1 - k
        shifted = np.zeros(deg + 2, dtype=np.complex128)
        shifted[1:] = coeffs[: deg + 1]
        shifted[:-1] -= xs[k] * coeffs[: deg + 1]
        shifted[0] += dd[k]
        coeffs[: deg + 2] = shifted
    if d > 0 and coeffs[-1] == 0:
        # exact lower-degree data; trim to the true degree
        nz = np.flatnonzero(coeffs)
        coeffs = coeffs[: (nz[-1] + 1 if nz.size else 1)]
    return Polynomial(coeffs)


def _leja_order(xs: np.ndarray) -> np.ndarray:
    n = xs.size
    if n <= 2:
        return np.arange(n)
    order = [int(np.argmax(np.abs(xs)))]
    logprod = np.zeros(n)
    used = np.zeros(n, dtype=bool)
    used[order[0]] = True
    for _ in range(n - 1):
        with np.errstate(divide="ignore"):
            logprod += np.log(np.abs(xs - xs[order[-1]]))
        cand = np.where(used, -np.inf, logprod)
        k = int(np.argmax(cand))
        order.append(k)
        used[k] = True
    return np.array(order)


ROOT_TOL = 1e-12
ROOT_MAXITER = 1000
_START_PERTURB = 1e-3 * cmath.exp(0.4j)


def poly_roots(
    p: Polynomial,
    *,
    tol: float = ROOT_TOL,
    maxiter: int = ROOT_MAXITER,
    start: np.ndarray | None = None,
) -> np.ndarray:
    """All roots of ``p`` with multiplicity, by Durand-Kerner iteration.

    By default starts from roots of unity scaled by the Cauchy bound and
    nudged by a fixed perturbation; ``start`` overrides the initial iterate.
    Stops when every update is below ``tol * (1 + |root|)``, or when every
    residual sits at the rounding floor of Horner evaluation (clustered
    roots stall the update test).
    """
    if p.degree < 1:
        raise UsageError("root finding needs degree >= 1")
    c = p.coeffs / p.coeffs[-1]
    d = p.degree
    if d == 1:
        return np.array([-c[0]])
    if start is not None:
        z = np.array(start, dtype=np.complex128)
        if z.shape != (d,):
            raise UsageError(f"start needs {d} points")
    else:
        R = p.cauchy_bound()
        z = R * (np.exp(2j * np.pi * np.arange(d) / d) + _START_PERTURB)
    absc = np.abs(c)
    eps = np.finfo(float).eps
    offdiag = ~np.eye(d, dtype=bool)
    with np.errstate(all="ignore"):
        for it in range(1, maxiter + 1):
            pz = _horner(c, z)
            diffs = z[:, None] - z[None, :]
            denom = np.prod(np.where(offdiag, diffs, 1.0), axis=1)
            step = pz / denom
            if not np.all(np.isfinite(step)):
                break
            z = z - step
            if np.all(np.abs(step) < tol * (1.0 + np.abs(z))):
                return z
            floor = 8 * d * eps * _horner(absc, np.abs(z)).real
            if np.all(np.abs(_horner(c, z)) <= floor):
                return z
        resid = np.abs(_horner(c, z))
    raise NoConvergence(z, resid.tolist(), maxiter)


def newton_polygon_moduli(log_abs: np.ndarray) -> np.ndarray:
    """Root-modulus estimates from the upper convex hull of ``(k, log|c_k|)``.

    ``log_abs`` holds ``log|c_k|`` in ascending order (``-inf`` for zero
    coefficients).  Each hull edge of slope ``s`` and width ``w`` yields
    ``w`` copies of ``exp(-s)``.
    """
    pts = [(k, v) for k, v in enumerate(log_abs) if np.isfinite(v)]
    hull = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (q[0] - x1) <= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    out = []
    if hull and hull[0][0] > 0:
        out += [0.0] * hull[0][0]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out += [math.exp(-(y2 - y1) / (x2 - x1))] * (x2 - x1)
    return np.array(out)


def polygon_start(log_abs: np.ndarray) -> np.ndarray:
    """Durand-Kerner start points on the Newton-polygon moduli, angles spread."""
    r = newton_polygon_moduli(log_abs)
    d = r.size
    ang = 2 * np.pi * np.arange(d) / d + 0.4
    return r * np.exp(1j * ang) + _START_PERTURB * np.where(r > 0, r, 1.0)


def _horner(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x, dtype=np.complex128)
    for ck in c[::-1]:
        acc = acc * x + ck
    return acc


def rel_err(computed, expected) -> float:
    """Relative error measured against ``max(|expected|, |computed|, 1e-300)``."""
    computed = np.asarray(computed, dtype=np.complex128)
    expected = np.asarray(expected, dtype=np.complex128)
    scale = max(float(np.max(np.abs(expected), initial=0.0)), float(np.max(np.abs(computed), initial=0.0)), 1e-300)
    return float(np.max(np.abs(computed - expected), initial=0.0)) / scale
