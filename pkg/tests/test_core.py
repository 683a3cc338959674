import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdet import (
    BlockTridiagSpec,
    InterpolationDegenerate,
    InvariantViolation,
    LogDet,
    NoConvergence,
    Polynomial,
    SingularOffDiagonal,
    UsageError,
    lu_det,
    lu_solve,
    mat_mul,
    poly_interpolate,
    poly_roots,
    singularity_guard,
)
from btdet.core import logdet_product, newton_polygon_moduli, rel_err
from btdet.instances import unit_disk


def well_conditioned(rng, m):
    return unit_disk(rng, (m, m)) + 2 * m * np.eye(m)


def match_roots(found, expected):
    """Greedy nearest matching; fine for well-separated test roots."""
    remaining = list(expected)
    worst = 0.0
    for r in found:
        j = int(np.argmin([abs(r - e) for e in remaining]))
        worst = max(worst, abs(r - remaining.pop(j)))
    return worst


# lu_det / lu_solve / mat_mul / guard


def test_lu_det_examples():
    assert lu_det(np.eye(3)) == 1
    assert lu_det(np.array([[2, 5], [0, 3j]])) == pytest.approx(6j)
    assert lu_det(np.array([[1.0, 2.0], [3.0, 4.0]])) == pytest.approx(-2.0)


def test_lu_det_zero_column_gives_exact_zero():
    assert lu_det(np.array([[0.0, 1.0], [0.0, 2.0]])) == 0


def test_lu_solve_examples(rng):
    R = rng.standard_normal((3, 2))
    np.testing.assert_array_equal(lu_solve(np.eye(3), R), R)
    np.testing.assert_allclose(lu_solve(2 * np.eye(2), np.eye(2)), 0.5 * np.eye(2))
    M = well_conditioned(rng, 4)
    rhs = unit_disk(rng, (4, 3))
    X = lu_solve(M, rhs)
    assert np.max(np.abs(M @ X - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_lu_solve_singular_names_block():
    with pytest.raises(SingularOffDiagonal, match="B_4"):
        lu_solve(np.zeros((2, 2)), np.eye(2), index=4)


def test_mat_mul_examples(rng):
    P = rng.standard_normal((3, 3))
    np.testing.assert_array_equal(mat_mul(P, np.eye(3)), P)
    X = np.array([[0, 1], [1, 0]])
    np.testing.assert_array_equal(mat_mul(X, X), np.eye(2))
    Q, R = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
    np.testing.assert_allclose(mat_mul(mat_mul(P, Q), R), mat_mul(P, mat_mul(Q, R)), atol=1e-12)
    with pytest.raises(UsageError):
        mat_mul(np.eye(2), np.eye(3))


def test_singularity_guard_examples():
    assert singularity_guard(np.eye(3))
    assert not singularity_guard(np.zeros((2, 2)))
    assert not singularity_guard(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_lu_det_inverse_property(rng):
    for m in range(1, 6):
        M = well_conditioned(rng, m)
        Minv = lu_solve(M, np.eye(m))
        assert abs(lu_det(M) * lu_det(Minv) - 1) <= 1e-9


def test_det_multiplicativity(rng):
    for _ in range(20):
        P, Q = well_conditioned(rng, 4), well_conditioned(rng, 4)
        assert rel_err(lu_det(P @ Q), lu_det(P) * lu_det(Q)) <= 1e-9


# spec validation


def test_spec_invariants():
    I = np.eye(2)
    with pytest.raises(InvariantViolation):
        BlockTridiagSpec((I, I), (I, I), (I, I), has_corners=True)  # n < 3
    with pytest.raises(InvariantViolation):
        BlockTridiagSpec((I, I), (I, I), (I,), has_corners=False)
    with pytest.raises(InvariantViolation):
        BlockTridiagSpec((I, np.eye(3)), (I,), (I,), has_corners=False)
    with pytest.raises(InvariantViolation):
        BlockTridiagSpec((np.full((2, 2), np.nan),), (), (), has_corners=False)


def test_spec_indexing_and_immutability():
    A = tuple(np.eye(1) * k for k in (1, 2, 3))
    B = tuple(np.eye(1) * k for k in (10, 20, 30))
    C = tuple(np.eye(1) * k for k in (100, 101, 102))
    s = BlockTridiagSpec(A, B, C, has_corners=True)
    assert (s.n, s.m) == (3, 1)
    assert s.a(3)[0, 0] == 3 and s.b(3)[0, 0] == 30 and s.c(0)[0, 0] == 100
    with pytest.raises(ValueError):
        s.A[0][0, 0] = 5


# LogDet


def test_logdet_roundtrip_and_zero():
    for v in (3.5, -2j, 1e-200 + 1e-200j, -7.25):
        assert complex(LogDet.from_value(v)) == pytest.approx(v, rel=1e-14)
    z = LogDet.from_value(0)
    assert z.value() == 0 and z.log_magnitude == -math.inf


def test_logdet_product_does_not_overflow():
    acc = logdet_product([1e200] * 10)
    assert acc.log10_abs == pytest.approx(2000.0)
    assert abs(acc.phase) == pytest.approx(1.0, abs=1e-12)
    assert math.isinf(acc.value().real)


@given(st.lists(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3), min_size=1, max_size=8))
def test_logdet_product_matches_plain_product(values):
    acc = logdet_product(values)
    assert rel_err(acc.value(), complex(np.prod(values))) <= 1e-12
    assert abs(abs(acc.phase) - 1) <= 1e-12


# polynomials


def test_interpolate_examples():
    p = poly_interpolate([(0, -1), (1, 0), (2, 3)])
    np.testing.assert_allclose(p.coeffs, [-1, 0, 1], atol=1e-14)
    q = poly_interpolate([(5, 7)])
    assert q.degree == 0 and q.coeffs[0] == 7


def test_interpolate_recovers_random_polynomial(rng):
    coeffs = np.append(unit_disk(rng, 11), 1.0)
    nodes = np.exp(2j * np.pi * np.arange(12) / 12)
    p = poly_interpolate([(x, Polynomial(coeffs)(x)) for x in nodes])
    assert rel_err(p.coeffs, coeffs) <= 1e-8


def test_interpolate_duplicate_nodes():
    with pytest.raises(InterpolationDegenerate):
        poly_interpolate([(1, 2), (1, 3)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.integers(0, 2**32 - 1))
def test_interpolate_sample_roundtrip(degree, seed):
    rng = np.random.default_rng(seed)
    coeffs = np.append(unit_disk(rng, degree), 1.0)
    nodes = 1.5 * np.exp(2j * np.pi * (np.arange(degree + 1) + 0.25) / (degree + 1))
    p = poly_interpolate([(x, Polynomial(coeffs)(x)) for x in nodes])
    assert p.degree == degree
    assert np.max(np.abs(p.coeffs - coeffs)) <= 1e-8 * np.max(np.abs(coeffs))


def test_polynomial_rejects_zero_leading():
    with pytest.raises(UsageError):
        Polynomial([1.0, 0.0])


def test_taylor_shift(rng):
    p = Polynomial(unit_disk(rng, 5))
    a = 0.3 - 0.7j
    shifted = p.taylor_shift(a)
    for x in unit_disk(rng, 4):
        assert shifted(x) == pytest.approx(p(x + a), rel=1e-12)


def test_roots_examples():
    r = poly_roots(Polynomial([-1, 0, 1]))
    assert match_roots(r, [1, -1]) <= 1e-12
    r = poly_roots(Polynomial([-3j, 1]))
    assert abs(r[0] - 3j) <= 1e-12


def test_roots_random_degree_six(rng):
    roots = unit_disk(rng, 6) * 3
    p = Polynomial(np.polynomial.polynomial.polyfromroots(roots))
    assert match_roots(poly_roots(p), roots) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_roots_residual_bound(degree, seed):
    rng = np.random.default_rng(seed)
    p = Polynomial(np.append(unit_disk(rng, degree), 1.0))
    bound = 1e-8 * (1 + p.cauchy_bound()) ** degree
    for r in poly_roots(p):
        assert abs(p(r)) <= bound


def test_roots_iteration_cap_reports_iterate():
    with pytest.raises(NoConvergence) as info:
        poly_roots(Polynomial([1, 0, 0, 1]), maxiter=1)
    assert len(info.value.roots) == 3


def test_roots_of_wide_spread_polynomial():
    roots = np.array([1e-6, 2e-3 * cmath.exp(1j), 1.5, 4e4j])
    p = Polynomial(np.polynomial.polynomial.polyfromroots(roots))
    start_moduli = newton_polygon_moduli(np.log(np.abs(p.coeffs)))
    np.testing.assert_allclose(np.sort(start_moduli), np.sort(np.abs(roots)), rtol=0.5)
