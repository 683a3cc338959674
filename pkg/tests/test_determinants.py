import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdet import (
    BlockTridiagSpec,
    NotAnEigenpair,
    SingularLeadingBlock,
    SingularPartialBlock,
    UsageError,
    ZeroBoundaryParameter,
    charpoly,
    charpoly_eval,
    charpoly_roots,
    det,
    det_corners,
    det_corners_product_variant,
    det_corners_variant_inverse,
    det_dense,
    det_no_corners,
    det_salkuyeh,
    det_scalar,
    det_scalar_corners,
    dual_roots,
    null_vector,
    random_spec,
    salkuyeh_lambda_from_transfer,
    salkuyeh_lambdas,
    scalar_spec,
    transfer_det_product,
)
from btdet.core import rel_err
from btdet.determinants import BACKENDS, dual_root_residuals
from btdet.instances import circulant3
from btdet.oracle import assemble_dense, charpoly_dense


def sorted_roots(values):
    return sorted(np.asarray(values), key=lambda v: (round(v.real, 8), round(v.imag, 8)))


# cornered determinant


@pytest.mark.parametrize("z, expected", [(1, 2), (2, 2.5), (0.5, 2.5), (1j, 0)])
def test_circulant_det(z, expected):
    assert abs(det_corners(circulant3(), z) - expected) <= 1e-12


def test_det_corners_matches_dense(rng):
    for _ in range(10):
        s = random_spec(rng, 5, 2, corners=True)
        for z in (np.exp(1j * rng.uniform(0, 2 * np.pi)), 0.5, 2.0):
            assert rel_err(det_corners(s, z), det_dense(s, z)) <= 1e-8


def test_det_corners_rejects_bad_inputs(corner_free, cornered):
    with pytest.raises(ZeroBoundaryParameter):
        det_corners(cornered, 0)
    with pytest.raises(UsageError):
        det_corners(corner_free, 1)


def test_singular_c_corners_match_dense(rng):
    # C blocks never inverted in this route; the identity survives singular C
    s = random_spec(rng, 6, 2, corners=True)
    C = list(s.C)
    C[0] = np.zeros((2, 2))
    C[3] = np.array([[1.0, 1.0], [1.0, 1.0]])
    s = BlockTridiagSpec(s.A, s.B, tuple(C), has_corners=True)
    for z in (1.0, 0.5, np.exp(2j)):
        assert rel_err(det_corners(s, z), det_dense(s, z)) <= 1e-8


# duality


def test_charpoly_eval_examples(cornered):
    z = 0.6 + 0.8j
    sign = (-1) ** (cornered.n * cornered.m)
    assert rel_err(charpoly_eval(cornered, z, 0), sign * det_corners(cornered, z)) <= 1e-12
    assert abs(charpoly_eval(circulant3(), 1, 2)) <= 1e-12


def test_charpoly_eval_matches_dense(rng):
    s = random_spec(rng, 7, 3, corners=True)
    for _ in range(10):
        lam = complex(*rng.uniform(-15, 15, 2))
        z = np.exp(1j * rng.uniform(0, 2 * np.pi)) * rng.uniform(0.5, 2)
        assert rel_err(charpoly_eval(s, z, lam), charpoly_dense(s, z, lam)) <= 1e-8


def test_charpoly_circulant():
    p = charpoly(circulant3(), 1)
    np.testing.assert_allclose(p.coeffs, [-2, -3, 0, 1], atol=1e-12)


def test_charpoly_trace_and_constant_terms(rng):
    a = rng.standard_normal(3)
    s = scalar_spec(a, [1, 1, 1], [1, 1, 1], corners=True)
    p = charpoly(s, 1)
    assert p.coeffs[2] == pytest.approx(-a.sum(), abs=1e-12)
    sp = random_spec(rng, 4, 2, corners=True)
    z = 1.2 - 0.3j
    q = charpoly(sp, z)
    assert rel_err(q.coeffs[0], det_dense(sp, z)) <= 1e-8  # (-1)^{nm} with nm even


def test_charpoly_monic_and_symmetric(rng):
    s = random_spec(rng, 9, 4, corners=True)
    p, deviation = charpoly(s, 1.0, full_output=True)
    assert p.leading == 1 and deviation <= 1e-6
    for _ in range(10):
        lam = 16 + complex(*rng.uniform(-4, 4, 2))
        value = charpoly_eval(s, 1.0, lam)
        # the monomial form at a clustered spectrum cancels; compare on its own scale
        scale = np.sum(np.abs(p.coeffs) * abs(lam) ** np.arange(p.degree + 1))
        assert abs(p(lam) - value) <= 1e-7 * max(abs(value), scale * 1e-9)


def test_charpoly_matches_eval_relative(rng):
    s = random_spec(rng, 4, 2, corners=True)
    p = charpoly(s, np.exp(0.3j))
    for _ in range(10):
        lam = complex(*rng.uniform(-20, 20, 2))
        assert rel_err(p(lam), charpoly_eval(s, np.exp(0.3j), lam)) <= 1e-7


def test_dual_roots_circulant():
    roots = dual_roots(circulant3(), 0)
    np.testing.assert_allclose(sorted_roots(roots), sorted_roots([-1j, 1j]), atol=1e-10)


def test_dual_roots_closure(rng):
    for m, n in [(1, 9), (2, 6), (3, 12), (4, 10)]:
        s = random_spec(rng, n, m, corners=True)
        for lam in (0, 4 * m, 4 * m + 1j):
            r = dual_roots(s, lam, full_output=True)
            assert r.roots.size == 2 * m
            assert np.max(r.residuals) <= 1e-6
            assert rel_err(np.prod(r.roots), transfer_det_product(s)) <= 1e-7


def test_dual_root_residuals_of_circulant_roots():
    _, resid = dual_root_residuals(circulant3(), 0, [1j, -1j])
    assert np.max(resid) <= 1e-12


# variants


def test_variant_identities(rng):
    for m, n in [(1, 3), (2, 7), (4, 12)]:
        s = random_spec(rng, n, m, corners=True)
        for z in (1.3, np.exp(1j), 0.5j):
            d = det_dense(s, z)
            assert rel_err(det_corners_variant_inverse(s, z), d) <= 1e-7
            assert rel_err(det_corners_product_variant(s, z), d * det_dense(s, 1 / z)) <= 1e-7


# corner-free routes


def test_corner_free_transfer_examples():
    assert det_no_corners(scalar_spec([2, 3], [1], [1])) == pytest.approx(5)
    assert det_no_corners(scalar_spec([2, 3, 4], [1, 1], [0, 0])) == pytest.approx(24)
    assert det_no_corners(scalar_spec([7], [], [])) == pytest.approx(7)


def test_corner_free_transfer_matches_dense(rng):
    s = random_spec(rng, 6, 3)
    assert rel_err(det_no_corners(s), det_dense(s)) <= 1e-8


def test_salkuyeh_examples(rng):
    assert det_salkuyeh(scalar_spec([7], [], [])).value() == pytest.approx(7)
    s = random_spec(rng, 5, 2, zero_c=True)
    expected = np.prod([np.linalg.det(s.a(k)) for k in range(1, 6)])
    assert rel_err(det_salkuyeh(s).value(), expected) <= 1e-12
    s = random_spec(rng, 8, 2)
    d = det_dense(s)
    assert rel_err(det_salkuyeh(s).value(), d) <= 1e-8
    assert rel_err(det_no_corners(s), d) <= 1e-8


def test_salkuyeh_breakdown_surfaces():
    s = scalar_spec([0, 1, 1], [1, 1], [1, 1])
    with pytest.raises(SingularLeadingBlock):
        det_salkuyeh(s)
    # the dispatcher falls back to the transfer route
    assert det(s).value() == pytest.approx(det_dense(s))


def test_lambda_bridge(rng):
    s = random_spec(rng, 6, 2)
    L = salkuyeh_lambdas(s)
    np.testing.assert_allclose(salkuyeh_lambda_from_transfer(s, 1), s.a(1), rtol=1e-12)
    direct2 = s.a(2) - s.c(1) @ np.linalg.solve(s.a(1), s.b(1))
    assert rel_err(salkuyeh_lambda_from_transfer(s, 2), direct2) <= 1e-9
    for k in range(1, s.n):
        assert rel_err(salkuyeh_lambda_from_transfer(s, k), L[k - 1]) <= 1e-8


def test_lambda_bridge_range_and_breakdown(rng):
    s = random_spec(rng, 4, 2)
    with pytest.raises(UsageError):
        salkuyeh_lambda_from_transfer(s, 4)
    z = scalar_spec([0, 1, 1], [1, 1], [1, 1])
    with pytest.raises(SingularPartialBlock):
        salkuyeh_lambda_from_transfer(z, 2)


# scalar forms


def test_scalar_corner_examples():
    assert det_scalar_corners(circulant3()) == pytest.approx(2)
    ones = scalar_spec([1, 1, 1], [1, 1, 1], [1, 1, 1], corners=True)
    assert abs(det_scalar_corners(ones)) <= 1e-14
    assert det_scalar(scalar_spec([7], [], [])) == 7
    assert det_scalar(scalar_spec([2, 3], [1], [1])) == 5


def test_scalar_forms_tolerate_zero_offdiagonal(rng):
    s = scalar_spec(rng.standard_normal(5), [1, 0, 2, 1, 0], rng.standard_normal(5), corners=True)
    assert rel_err(det_scalar_corners(s), det_dense(s, 1)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 2**32 - 1))
def test_scalar_reductions(n, seed):
    rng = np.random.default_rng(seed)
    s = random_spec(rng, n, 1, corners=True)
    assert rel_err(det_scalar_corners(s), det_corners(s, 1)) <= 1e-9
    f = random_spec(rng, n, 1)
    assert rel_err(det_scalar(f), det_no_corners(f)) <= 1e-9
    assert rel_err(det_scalar(f), det_dense(f)) <= 1e-10


# null vectors


def test_null_vector_circulant_top_eigenvalue():
    cert = null_vector(circulant3(), 1, 2)
    psi = cert.as_vector()
    np.testing.assert_allclose(psi / psi[0], [1, 1, 1], atol=1e-8)
    assert cert.residual <= 1e-8 and cert.valid


def test_null_vector_circulant_at_i():
    s = circulant3()
    cert = null_vector(s, 1j, 0)
    psi = cert.as_vector()
    assert np.linalg.norm(assemble_dense(s, 1j) @ psi) <= 1e-7 * np.linalg.norm(psi)


def test_null_vector_from_charpoly_root(rng):
    s = random_spec(rng, 5, 2, corners=True)
    lam = charpoly_roots(s, 1.0)[3]
    assert np.min(np.abs(np.linalg.eigvals(assemble_dense(s, 1.0)) - lam)) <= 1e-10
    assert null_vector(s, 1.0, lam).residual <= 1e-6


def test_null_vector_rejects_non_eigenvalue(cornered):
    with pytest.raises(NotAnEigenpair):
        null_vector(cornered, 1.0, 123.0)


# dispatch


def test_det_dispatch_all_backends(rng):
    f = random_spec(rng, 5, 1)
    c = random_spec(rng, 5, 1, corners=True)
    for backend in BACKENDS:
        for s in (f, c):
            try:
                val = det(s, 1.0, backend).value()
            except UsageError:
                assert (backend, s.has_corners) in {("lemma1", False), ("theorem2", True), ("salkuyeh", True)}
                continue
            assert rel_err(val, det_dense(s, 1.0)) <= 1e-9


def test_det_unknown_backend(cornered):
    with pytest.raises(UsageError):
        det(cornered, 1.0, "qr")


def test_det_scalar_backend_needs_z_one():
    with pytest.raises(UsageError):
        det(circulant3(), 2.0, "scalar")
    assert det(circulant3(), 2.0).value() == pytest.approx(2.5)


def test_salkuyeh_long_chain_logdet(rng):
    s = random_spec(rng, 200, 8)
    d = det_salkuyeh(s)
    assert np.isfinite(d.log_magnitude) and d.log10_abs > 300  # beyond double range
