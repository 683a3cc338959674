"""Determinants and characteristic polynomials through transfer matrices.

Cornered matrices ``M(z)``::

    det M(z)          = (-1)^{nm} (-z)^{-m} det(T - z I) det(B_1 ... B_n)
    det(lam I - M(z)) = (-z)^{-m} det(T(lam) - z I) det(B_1 ... B_n)

Corner-free matrices ``M0``::

    det M0 = (-1)^{nm} det(T0_11) det(B_1 ... B_{n-1})
    det M0 = prod_k det L_k,   L_k = A_k - C_{k-1} L_{k-1}^{-1} B_{k-1},  L_1 = A_1

Products of block determinants are accumulated as :class:`LogDet`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core import (
    BlockTridiagSpec,
    LogDet,
    Polynomial,
    lu_logdet,
    lu_solve,
    newton_polygon_moduli,
    poly_interpolate,
    polygon_start,
    poly_roots,
    singularity_guard,
)
from .errors import (
    NoConvergence,
    DegenerateEigenvector,
    NotAnEigenpair,
    SingularLeadingBlock,
    SingularPartialBlock,
    UsageError,
    ZeroBoundaryParameter,
)
from .transfer import (
    build_transfer,
    build_transfer_inverse,
    build_transfer_no_corners,
    partial_t11_sequence,
)

# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _require_corners(spec, z):
    if not spec.has_corners:
        raise UsageError("this operation needs a cornered spec")
    z = complex(z)
    if z == 0:
        raise ZeroBoundaryParameter()
    return z


def _require_corner_free(spec):
    if spec.has_corners:
        raise UsageError("this operation needs a corner-free spec")


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _prod_det_b(spec, count) -> LogDet:
    acc = LogDet()
    for i in range(1, count + 1):
        acc = acc * lu_logdet(spec.b(i))
    return acc


def _shift_det(T: np.ndarray, z: complex) -> LogDet:
    return lu_logdet(T - z * np.eye(T.shape[0]))


def _neg_z_pow(z: complex, m: int) -> LogDet:
    return LogDet.from_value((-z) ** m)


# ---------------------------------------------------------------------------
# cornered: transfer-matrix determinants and the duality relation
# ---------------------------------------------------------------------------


def det_corners_logdet(spec: BlockTridiagSpec, z: complex = 1.0, method: str = "cyclic") -> LogDet:
    z = _require_corners(spec, z)
    T = build_transfer(spec)
    val = T.shifted_logdet(z, method) * _prod_det_b(spec, spec.n) * _neg_z_pow(z, spec.m).inverse()
    return val * _sign(spec.n * spec.m)


def det_corners(spec: BlockTridiagSpec, z: complex = 1.0, method: str = "cyclic") -> complex:
    """``det M(z)`` from the cornered transfer matrix (never assembles ``M``).

    ``method`` selects how ``det(T - zI)`` is evaluated: ``"cyclic"`` (default)
    eliminates over the factor sequence, ``"product"`` factors the formed
    ``T`` and degrades as the chain grows.
    """
    return det_corners_logdet(spec, z, method).value()


def charpoly_eval_logdet(spec: BlockTridiagSpec, z: complex, lam: complex, method: str = "cyclic") -> LogDet:
    z = _require_corners(spec, z)
    T = build_transfer(spec, lam)
    return T.shifted_logdet(z, method) * _prod_det_b(spec, spec.n) * _neg_z_pow(z, spec.m).inverse()


def charpoly_eval(spec: BlockTridiagSpec, z: complex, lam: complex, method: str = "cyclic") -> complex:
    """``det(lam I - M(z))`` through the duality relation."""
    return charpoly_eval_logdet(spec, z, lam, method).value()


def dense_row_norm_bound(spec: BlockTridiagSpec, z: complex = 1.0) -> float:
    """Max row-sum norm of ``M(z)``, read off the blocks."""
    rows = []
    absrow = lambda X: np.sum(np.abs(X), axis=1)
    for i in range(1, spec.n + 1):
        r = absrow(spec.a(i))
        if i < spec.n:
            r = r + absrow(spec.b(i))
        if i > 1:
            r = r + absrow(spec.c(i - 1))
        if spec.has_corners and i == 1:
            r = r + absrow(spec.c(0)) / abs(z)
        if spec.has_corners and i == spec.n:
            r = r + abs(z) * absrow(spec.b(spec.n))
        rows.append(r)
    return float(np.max(np.concatenate(rows)))


def circle_nodes(count: int, radius: float, center: complex = 0.0) -> np.ndarray:
    return center + radius * np.exp(2j * np.pi * np.arange(count) / count)


def _centered_fit(spec, z):
    """``(center, radius, q)`` with ``q(w) ~ det((c + Rw) I - M(z)) / R^nm``."""
    n, m = spec.n, spec.m
    N = n * m
    center = complex(sum(np.trace(spec.a(i)) for i in range(1, n + 1))) / N
    centered = spec.shifted(center)
    radius = 1.0 + dense_row_norm_bound(centered, z)
    w_nodes = circle_nodes(N + 1, 1.0)
    log_r = math.log(radius)
    values = []
    for w in w_nodes:
        ld = charpoly_eval_logdet(centered, z, radius * w)
        ok = np.isfinite(ld.log_magnitude)
        values.append(ld.phase * math.exp(ld.log_magnitude - N * log_r) if ok else 0.0)
    q = poly_interpolate(list(zip(w_nodes, values)))
    if q.degree != N:
        raise UsageError(f"interpolated degree {q.degree} != nm = {N}")
    return center, radius, q


def charpoly(spec: BlockTridiagSpec, z: complex = 1.0, *, full_output: bool = False):
    """Monic ``lam -> det(lam I - M(z))`` of degree ``nm``.

    Sampled with :func:`charpoly_eval` at ``nm + 1`` equispaced points on a
    circle around the mean eigenvalue ``c = tr M / nm``, of radius
    ``R = 1 + ||M(z) - c I||_inf``.  The fit is done in ``w = (lam - c) / R``,
    where the nodes are roots of unity, then scaled and shifted back.  With
    ``full_output`` the pre-normalization deviation ``|leading - 1|`` is
    returned alongside.
    """
    z = _require_corners(spec, z)
    center, radius, q = _centered_fit(spec, z)
    N = q.degree
    with np.errstate(over="ignore"):
        scale = np.exp((N - np.arange(N + 1)) * math.log(radius))
    p = Polynomial(q.coeffs * scale / q.leading).taylor_shift(-center)
    deviation = abs(q.leading - 1.0)
    return (p, deviation) if full_output else p


def charpoly_roots(spec: BlockTridiagSpec, z: complex = 1.0, *, polish: int = 300) -> np.ndarray:
    """Eigenvalues of ``M(z)`` as roots of the sampled characteristic polynomial.

    Durand-Kerner runs on the centred, scaled fit of :func:`charpoly`, which
    only locates clustered roots roughly (when it fails, its Newton-polygon
    start points are used instead); Weierstrass sweeps against
    :func:`charpoly_eval` itself then refine them (up to ``polish`` sweeps,
    stopping once the updates reach rounding level).
    """
    z = _require_corners(spec, z)
    center, radius, q = _centered_fit(spec, z)
    start = polygon_start(_log_abs(q.coeffs))
    try:
        w = poly_roots(q.monic(), start=start)
    except NoConvergence:
        w = start
    # the spectrum lies inside |w| <= 1; anything outside is a failed fit
    if not np.all(np.abs(w) <= 1.0):
        w = start
    roots = center + radius * w
    f = lambda lam: charpoly_eval_logdet(spec, z, lam)
    roots = _weierstrass_polish(f, roots, polish)
    if not np.all(np.isfinite(roots)):
        raise NoConvergence(list(roots), [np.inf], polish)
    return roots


@dataclass(frozen=True)
class DualRoots:
    roots: np.ndarray
    polynomial: Polynomial  # monic det(T(lam) - zI) in z
    scales: np.ndarray  # per root: max |charpoly_eval| sampled on |w| = |root|
    residuals: np.ndarray  # per root: |charpoly_eval(root)| / scale
    radii: tuple  # sampling circles used for the coefficients


def _circle_fit(T, m, radius):
    """Coefficients of ``z -> det(T - zI)`` seen from one sampling circle.

    Returns ``(coeffs, log_err, samples)``.  Interpolation on the circle
    ``|z| = r`` recovers ``c_k`` with absolute error about ``eps S / r^k``,
    ``S`` the largest sample modulus; ``log_err[k]`` is ``log(S / r^k)``.
    """
    w_nodes = circle_nodes(2 * m + 1, 1.0) * cmath.exp(0.5j * np.pi / (2 * m + 1))
    samples = [T.shifted_logdet(radius * w) for w in w_nodes]
    ref = max(s.log_magnitude for s in samples)
    if not np.isfinite(ref):
        return None, None, samples
    scaled = [s.phase * np.exp(s.log_magnitude - ref) for s in samples]
    d = poly_interpolate(list(zip(w_nodes, scaled))).coeffs
    d = np.concatenate([d, np.zeros(2 * m + 1 - d.size)])
    log_err = ref - np.arange(2 * m + 1) * np.log(radius)
    with np.errstate(over="ignore"):
        coeffs = np.where(d == 0, 0.0, d * np.exp(np.minimum(log_err, 700.0)))
    return coeffs, log_err, samples


def _log_abs(coeffs):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(coeffs))


def dual_roots(
    spec: BlockTridiagSpec,
    lam: complex = 0.0,
    *,
    max_rounds: int = 12,
    polish: int = 30,
    full_output: bool = False,
):
    """The ``2m`` boundary parameters ``z`` for which ``lam`` is an eigenvalue of ``M(z)``.

    These are the eigenvalues of ``T(lam)``, i.e. the roots of the monic
    ``z -> det(T(lam) - zI)``.  The function is sampled on ``2m + 1`` nodes
    of the circle ``|z| = |det T(lam)|^{1/2m}`` and interpolated.  Roots of a
    long chain spread over many decades and one circle only resolves the
    coefficients that dominate on it, so each coefficient is re-estimated
    from further circles placed at the Newton-polygon root moduli, keeping
    the estimate with the smallest predicted error.  Durand-Kerner then runs
    from the polygon moduli, followed by a few Weierstrass sweeps on the
    transfer-evaluated determinant itself.
    """
    if not spec.has_corners:
        raise UsageError("dual roots need a cornered spec")
    lam = complex(lam)
    m = spec.m
    T = build_transfer(spec, lam)
    radius = float(np.exp(transfer_det_logdet(spec).log_magnitude / (2 * m)))
    if not np.isfinite(radius) or radius == 0:
        radius = 1.0
    coeffs, log_err, _ = _circle_fit(T, m, radius)
    if coeffs is None:
        raise DegenerateEigenvector("det(T - zI) vanished on the whole sampling circle")
    coeffs[-1] = 1.0
    log_err[-1] = -np.inf
    used = [radius]
    for _ in range(max_rounds):
        moduli = newton_polygon_moduli(_log_abs(coeffs))
        fresh = []
        for rr in moduli[moduli > 0]:
            if all(abs(np.log10(rr / u)) > 0.25 for u in used + fresh):
                fresh.append(float(rr))
        if not fresh:
            break
        for rr in fresh:
            c2, e2, _ = _circle_fit(T, m, rr)
            if c2 is None:
                continue
            better = e2 < log_err
            coeffs = np.where(better, c2, coeffs)
            log_err = np.where(better, e2, log_err)
        used += fresh
    p = Polynomial(coeffs)
    roots = poly_roots(p, start=polygon_start(_log_abs(coeffs)))
    roots = _weierstrass_polish(T.shifted_logdet, roots, polish)
    if not full_output:
        return roots
    scales, resid = dual_root_residuals(spec, lam, roots, T)
    return DualRoots(roots, p, scales, resid, tuple(used))


def local_scale(spec: BlockTridiagSpec, z: complex, lam: complex, T=None) -> float:
    """Max ``|det(lam I - M(w))|`` over ``2m + 1`` nodes of the circle ``|w| = |z|``."""
    m = spec.m
    if T is None:
        T = build_transfer(spec, lam)
    bprod = _prod_det_b(spec, spec.n)
    nodes = abs(z) * circle_nodes(2 * m + 1, 1.0) * cmath.exp(0.5j * np.pi / (2 * m + 1))
    return max(abs((T.shifted_logdet(w) * bprod * _neg_z_pow(w, m).inverse()).value()) for w in nodes)


def dual_root_residuals(spec: BlockTridiagSpec, lam: complex, roots, T=None):
    """``(scales, residuals)`` with ``residual = |charpoly_eval(root)| / local_scale``."""
    if T is None:
        T = build_transfer(spec, lam)
    bprod = _prod_det_b(spec, spec.n)
    scales, resid = [], []
    for z in roots:
        sc = local_scale(spec, z, lam, T)
        here = abs((T.shifted_logdet(z) * bprod * _neg_z_pow(z, spec.m).inverse()).value())
        scales.append(sc)
        resid.append(here / sc if sc > 0 else np.inf)
    return np.array(scales), np.array(resid)


def _weierstrass_polish(f, roots, sweeps):
    """Weierstrass sweeps for the monic polynomial evaluated by ``f`` (a LogDet).

    A root is frozen once its update drops to rounding level.
    """
    roots = np.array(roots, dtype=np.complex128)
    k = roots.size
    active = np.ones(k, dtype=bool)
    for _ in range(sweeps):
        if not active.any():
            break
        for i in np.flatnonzero(active):
            diffs = roots[i] - np.delete(roots, i)
            if np.any(diffs == 0):
                continue
            # log of prod(diffs) kept as phase plus magnitude against overflow
            logs = np.log(diffs)
            denom = LogDet(complex(np.exp(1j * np.sum(logs.imag))), float(np.sum(logs.real)))
            step = (f(roots[i]) * denom.inverse()).value()
            if not np.isfinite(step):
                continue
            roots[i] -= step
            if abs(step) <= 1e-14 * abs(roots[i]):
                active[i] = False
    return roots


def det_corners_variant_inverse(spec: BlockTridiagSpec, z: complex = 1.0) -> complex:
    """``det M(z)`` via ``(-1)^{nm} (-z)^m det(T^{-1} - I/z) det(C_0 ... C_{n-1})``."""
    z = _require_corners(spec, z)
    Tinv = build_transfer_inverse(spec)
    cprod = LogDet()
    for i in range(spec.n):
        cprod = cprod * lu_logdet(spec.c(i))
    val = Tinv.shifted_logdet(1.0 / z) * cprod * _neg_z_pow(z, spec.m) * _sign(spec.n * spec.m)
    return val.value()


def det_corners_product_variant(spec: BlockTridiagSpec, z: complex = 1.0) -> complex:
    """``det M(z) det M(1/z)`` via ``det(T + T^{-1} - (z + 1/z) I) prod det(B_i C_{i-1})``."""
    z = _require_corners(spec, z)
    T = build_transfer(spec).matrix
    Tinv = build_transfer_inverse(spec)
    acc = _shift_det(T + Tinv.matrix, z + 1.0 / z)
    for i in range(1, spec.n + 1):
        acc = acc * lu_logdet(spec.b(i) @ spec.c(i - 1))
    return acc.value()


def transfer_det_logdet(spec: BlockTridiagSpec) -> LogDet:
    acc = LogDet()
    for i in range(1, spec.n + 1):
        acc = acc * lu_logdet(spec.c(i - 1)) * lu_logdet(spec.b(i)).inverse()
    return acc


def transfer_det(spec: BlockTridiagSpec, lam: complex = 0.0, method: str = "cyclic") -> LogDet:
    """``det T(lam)`` read off the transfer matrix itself.

    ``"cyclic"`` eliminates the block-cyclic factor system at ``z = 0``;
    ``"product"`` factors the formed ``2m x 2m`` product, which is only
    trustworthy for short chains.  Compare with :func:`transfer_det_product`.
    """
    if method not in ("cyclic", "product"):
        raise UsageError(f"unknown method {method!r}")
    return build_transfer(spec, lam).shifted_logdet(0.0, method)


def transfer_det_product(spec: BlockTridiagSpec) -> complex:
    """``prod_i det(B_i^{-1} C_{i-1})``, the determinant of any ``T(lam)``."""
    return transfer_det_logdet(spec).value()


# ---------------------------------------------------------------------------
# corner-free
# ---------------------------------------------------------------------------


def det_no_corners_logdet(spec: BlockTridiagSpec) -> LogDet:
    _require_corner_free(spec)
    if spec.n == 1:
        return lu_logdet(spec.a(1))
    T = build_transfer_no_corners(spec)
    return lu_logdet(T.t11) * _prod_det_b(spec, spec.n - 1) * _sign(spec.n * spec.m)


def det_no_corners(spec: BlockTridiagSpec) -> complex:
    """``det M0`` from the upper-left block of the corner-free transfer matrix."""
    return det_no_corners_logdet(spec).value()


def salkuyeh_lambdas(spec: BlockTridiagSpec) -> list:
    """The recursion blocks ``[L_1, ..., L_n]``.

    Only ``L_1 .. L_{n-1}`` are inverted, so only those are guarded; a
    singular ``L_n`` just means ``det M0 = 0``.
    """
    _require_corner_free(spec)
    lams = [np.array(spec.a(1))]
    for k in range(2, spec.n + 1):
        prev = lams[-1]
        if not singularity_guard(prev):
            raise SingularLeadingBlock(k - 1)
        lams.append(spec.a(k) - spec.c(k - 1) @ lu_solve(prev, spec.b(k - 1)))
    return lams


def det_salkuyeh(spec: BlockTridiagSpec) -> LogDet:
    acc = LogDet()
    for L in salkuyeh_lambdas(spec):
        acc = acc * lu_logdet(L)
    return acc


def salkuyeh_lambda_from_transfer(spec: BlockTridiagSpec, k: int) -> np.ndarray:
    """``L_k = -B_k T(k)_11 T(k-1)_11^{-1}`` from partial transfer products."""
    _require_corner_free(spec)
    if not 1 <= k <= spec.n - 1:
        raise UsageError(f"k={k} out of range 1..{spec.n - 1}")
    t11 = partial_t11_sequence(spec)[: k + 1]
    prev, cur = t11[k - 1], t11[k]
    if not singularity_guard(prev):
        raise SingularPartialBlock(k - 1)
    # X W^{-1} = (W^T \ X^T)^T
    right = lu_solve(prev.T, (spec.b(k) @ cur).T, index=k - 1, label="T11").T
    return -right


# ---------------------------------------------------------------------------
# scalar (m = 1) closed forms, division free
# ---------------------------------------------------------------------------


def _scalars(blocks):
    return [complex(x[0, 0]) for x in blocks]


def _two_by_two(a, off):
    return np.array([[a, off], [1.0, 0.0]], dtype=np.complex128)


def det_scalar_corners(spec: BlockTridiagSpec) -> complex:
    """Cornered scalar determinant at ``z = 1`` from a trace of 2x2 products."""
    if spec.m != 1 or not spec.has_corners:
        raise UsageError("det_scalar_corners needs a cornered m=1 spec")
    n = spec.n
    a = _scalars(spec.A)
    b = _scalars(spec.B)  # b_1..b_n
    c = _scalars(spec.C)  # c_0..c_{n-1}
    P = _two_by_two(a[0], -b[n - 1] * c[0])
    for k in range(2, n + 1):
        P = _two_by_two(a[k - 1], -b[k - 2] * c[k - 1]) @ P
    return _sign(n + 1) * (np.prod(b) + np.prod(c)) + complex(np.trace(P))


def det_scalar(spec: BlockTridiagSpec) -> complex:
    """Corner-free scalar determinant (continuant) from 2x2 products."""
    if spec.m != 1 or spec.has_corners:
        raise UsageError("det_scalar needs a corner-free m=1 spec")
    a = _scalars(spec.A)
    b = _scalars(spec.B)
    c = _scalars(spec.C)
    P = np.array([[a[0], 0.0], [1.0, 0.0]], dtype=np.complex128)
    for k in range(2, spec.n + 1):
        P = _two_by_two(a[k - 1], -b[k - 2] * c[k - 2]) @ P
    return complex(P[0, 0])


# ---------------------------------------------------------------------------
# null vectors
# ---------------------------------------------------------------------------

NULL_RESIDUAL_TOL = 1e-7
EIGENPAIR_RTOL = 1e-6


@dataclass(frozen=True)
class NullVectorCertificate:
    psi: list  # n vectors of length m
    residual: float

    @property
    def valid(self) -> bool:
        return self.residual <= NULL_RESIDUAL_TOL

    def as_vector(self) -> np.ndarray:
        return np.concatenate(self.psi)


def _apply_shifted(spec, z, lam, psi):
    """Block rows of ``(M(z) - lam I) Psi``; blocks may be vectors or matrices."""
    n = spec.n
    shift = lam * np.eye(spec.m)
    rows = []
    for k in range(1, n + 1):
        r = (spec.a(k) - shift) @ psi[k - 1]
        if k < n:
            r = r + spec.b(k) @ psi[k]
        if k > 1:
            r = r + spec.c(k - 1) @ psi[k - 2]
        if k == 1:
            r = r + spec.c(0) @ psi[n - 1] / z
        if k == n:
            r = r + z * spec.b(n) @ psi[0]
        rows.append(r)
    return rows


def null_vector_residual(spec: BlockTridiagSpec, z: complex, lam: complex, psi) -> float:
    """Largest block-row norm of ``(M(z) - lam I) Psi`` over ``||Psi||``."""
    rows = _apply_shifted(spec, z, lam, psi)
    return float(max(np.linalg.norm(r) for r in rows) / np.linalg.norm(np.concatenate(psi)))


def _propagate(spec, z, lam, v):
    """Run the three-term recursion from ``psi_1`` and ``psi_0 = psi_n / z``."""
    m, n = spec.m, spec.n
    shift = lam * np.eye(m)
    psi = [v[:m]]
    prev = v[m:]
    for k in range(1, n):
        rhs = (spec.a(k) - shift) @ psi[-1] + spec.c(k - 1) @ prev
        prev = psi[-1]
        psi.append(-lu_solve(spec.b(k), rhs, index=k))
    return psi


def null_vector(
    spec: BlockTridiagSpec,
    z: complex,
    lam: complex,
    *,
    iterations: int = 8,
    seed: int = 0,
) -> NullVectorCertificate:
    """Null vector of ``M(z) - lam I`` rebuilt from an eigenvector of ``T(lam)``.

    The eigenvector ``[psi_1; psi_n / z]`` for eigenvalue ``z`` comes from
    inverse iteration on ``T(lam) - z I`` started from the unit vectors and a
    few seeded random vectors; each candidate is propagated along the chain
    and the one with the smallest residual is kept.
    """
    z = _require_corners(spec, z)
    lam = complex(lam)
    m = spec.m
    Tm = build_transfer(spec, lam)
    T = Tm.matrix
    scale = local_scale(spec, z, lam, Tm)
    here = abs(charpoly_eval(spec, z, lam))
    if not here <= EIGENPAIR_RTOL * scale:
        raise NotAnEigenpair(f"|det(lam I - M(z))| = {here:.3e} exceeds {EIGENPAIR_RTOL:g} * {scale:.3e}")

    S = T - z * np.eye(2 * m)
    # nudge off the exact eigenvalue so the shifted solve stays defined
    eps_shift = 1e-13 * (1.0 + np.linalg.norm(T, ord=np.inf))
    S_reg = S - eps_shift * np.eye(2 * m)
    rng = np.random.default_rng(seed)
    starts = list(np.eye(2 * m, dtype=np.complex128))
    starts += [rng.standard_normal(2 * m) + 1j * rng.standard_normal(2 * m) for _ in range(2)]

    best = None
    with np.errstate(all="ignore"):
        for v in starts:
            v = v / np.linalg.norm(v)
            for _ in range(iterations):
                w = np.linalg.solve(S_reg, v)
                nw = np.linalg.norm(w)
                if not np.isfinite(nw) or nw == 0:
                    break
                v = w / nw
            else:
                psi = _propagate(spec, z, lam, v)
                res = null_vector_residual(spec, z, lam, psi)
                if np.isfinite(res) and (best is None or res < best.residual):
                    best = NullVectorCertificate(psi, res)
    # Psi is linear in the start vector, so the residual-minimizing start over
    # all of C^{2m} is one more candidate
    with np.errstate(all="ignore"):
        P = _propagate(spec, z, lam, np.eye(2 * m, dtype=np.complex128))
        if all(np.all(np.isfinite(blk)) for blk in P):
            Q, Rf = np.linalg.qr(np.vstack(P))
            R = np.vstack(_apply_shifted(spec, z, lam, P))
            if np.all(np.abs(np.diagonal(Rf)) > 0):
                K = sla.solve_triangular(Rf.T, R.T, lower=True).T
                y = np.linalg.svd(K)[2][-1].conj()
                v = sla.solve_triangular(Rf, y)
                if np.all(np.isfinite(v)):
                    psi = _propagate(spec, z, lam, v / np.linalg.norm(v))
                    res = null_vector_residual(spec, z, lam, psi)
                    if np.isfinite(res) and (best is None or res < best.residual):
                        best = NullVectorCertificate(psi, res)
    if best is None:
        raise DegenerateEigenvector("inverse iteration on T(lam) - zI produced no usable vector")
    return best


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

BACKENDS = ("auto", "lemma1", "theorem2", "salkuyeh", "scalar", "dense")


def det(spec: BlockTridiagSpec, z: complex = 1.0, backend: str = "auto") -> LogDet:
    """Determinant of ``M(z)`` (``z`` ignored without corners) as a :class:`LogDet`.

    ``auto`` picks the scalar closed form for ``m = 1`` (cornered only at
    ``z = 1``), otherwise Salkuyeh for corner-free specs (falling back to
    the transfer route on recursion breakdown) and the transfer route for
    cornered ones.
    """
    from .oracle import det_dense

    z = complex(z)
    if backend not in BACKENDS:
        raise UsageError(f"unknown backend {backend!r}")
    if backend == "auto":
        if spec.m == 1 and (not spec.has_corners or z == 1):
            backend = "scalar"
        elif spec.has_corners:
            backend = "lemma1"
        else:
            try:
                return det_salkuyeh(spec)
            except SingularLeadingBlock:
                backend = "theorem2"
    check_backend(spec, backend, z)
    if backend == "lemma1":
        return det_corners_logdet(spec, z)
    if backend == "theorem2":
        return det_no_corners_logdet(spec)
    if backend == "salkuyeh":
        return det_salkuyeh(spec)
    if backend == "scalar":
        val = det_scalar_corners(spec) if spec.has_corners else det_scalar(spec)
        return LogDet.from_value(val)
    return LogDet.from_value(det_dense(spec, z))


def check_backend(spec: BlockTridiagSpec, backend: str, z: complex = 1.0) -> None:
    """Raise :class:`UsageError` if ``backend`` cannot handle ``spec``."""
    if backend == "lemma1" and not spec.has_corners:
        raise UsageError("backend lemma1 needs a cornered spec")
    if backend in ("theorem2", "salkuyeh") and spec.has_corners:
        raise UsageError(f"backend {backend} needs a corner-free spec")
    if backend == "scalar":
        if spec.m != 1:
            raise UsageError("backend scalar needs m = 1")
        if spec.has_corners and complex(z) != 1:
            raise UsageError("backend scalar handles cornered specs only at z = 1")
    if spec.has_corners and complex(z) == 0:
        raise ZeroBoundaryParameter()


__all__ = [
    "BACKENDS",
    "DualRoots",
    "NullVectorCertificate",
    "charpoly",
    "charpoly_roots",
    "charpoly_eval",
    "check_backend",
    "det",
    "det_corners",
    "det_corners_product_variant",
    "det_corners_variant_inverse",
    "det_no_corners",
    "det_salkuyeh",
    "det_scalar",
    "det_scalar_corners",
    "dual_roots",
    "null_vector",
    "salkuyeh_lambda_from_transfer",
    "salkuyeh_lambdas",
    "transfer_det",
    "transfer_det_product",
]
