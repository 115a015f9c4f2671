"""Property-based checks of the numerical-range and product-set invariants."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fovprod import geometry as geo
from fovprod import numrange as nr
from fovprod.classify import is_psd_multiple
from fovprod.matcore import eigvals, match_multisets, random_unitary, rank_one, unitary_conjugate
from fovprod.productset import ProductSet

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(0, 2**31 - 1)
dims = st.integers(2, 5)


def cmat(seed, n):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@SETTINGS
@given(seeds, dims, st.floats(0, 2 * np.pi))
def test_support_subadditive(seed, n, t):
    A, B = cmat(seed, n), cmat(seed + 1, n)
    lhs = nr.support_value(A + B, t)[0]
    assert lhs <= nr.support_value(A, t)[0] + nr.support_value(B, t)[0] + 1e-9


@SETTINGS
@given(seeds, dims, st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_rotation_equivariance(seed, n, t, phi):
    A = cmat(seed, n)
    assert abs(nr.support_value(np.exp(1j * phi) * A, t)[0] - nr.support_value(A, t - phi)[0]) <= 1e-9


@SETTINGS
@given(seeds, dims)
def test_normal_range_is_hull_of_spectrum(seed, n):
    rng = np.random.default_rng(seed)
    ev = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    A = unitary_conjugate(np.diag(ev), random_unitary(n, rng))
    R = nr.compute_range(A, 720)
    bound = 10 * np.linalg.norm(A, 2) / 720 ** 2
    assert geo.hausdorff(R.outer_polygon, geo.convex_hull(ev)) <= bound


@SETTINGS
@given(seeds, dims)
def test_spectrum_never_out_of_range(seed, n):
    A = cmat(seed, n)
    R = nr.compute_range(A, 256)
    for lam in eigvals(A):
        assert nr.contains_point(R, lam, 1e-9) != nr.Verdict.OUT


@SETTINGS
@given(seeds, dims)
def test_radii_chain(seed, n):
    r = nr.radii(cmat(seed, n), 128)
    assert r.r <= r.w + 1e-9 * r.norm
    assert r.norm / 2 - 1e-9 * r.norm <= r.w <= r.norm + 1e-9 * r.norm


@SETTINGS
@given(seeds, dims)
def test_rank_one_product_eigenvalue(seed, n):
    rng = np.random.default_rng(seed)
    A = cmat(seed, n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
    B = rank_one(x, y)
    lam = np.vdot(y, A @ x)
    ev = eigvals(A @ B)
    tol = 1e-9 * max(1.0, np.linalg.norm(A, 2) * np.linalg.norm(B, 2))
    # one eigenvalue <Ax, y>, the rest zero
    assert match_multisets(ev, np.concatenate([[lam], np.zeros(n - 1)]), 1e-6 * max(1.0, abs(lam)))[0]
    assert abs(np.trace(A @ B) - lam) <= tol


@SETTINGS
@given(seeds, dims)
def test_psd_times_anything_is_contained(seed, n):
    rng = np.random.default_rng(seed)
    G = cmat(seed, n)
    A = np.exp(1j * rng.uniform(0, 2 * np.pi)) * (G @ G.conj().T)
    assert is_psd_multiple(A)[0]
    B = cmat(seed + 7, n)
    ps = ProductSet(A, B, 360)
    for lam in eigvals(A @ B):
        assert ps.membership(lam, 1e-6).verdict == nr.Verdict.IN


@SETTINGS
@given(seeds, dims, st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_verdict_invariants(seed, n, lam):
    A, B = cmat(seed, n), cmat(seed + 3, n)
    v = ProductSet(A, B, 256).membership(lam, 1e-6, 64)
    if v.verdict == nr.Verdict.IN:
        z, b = v.witness_pair
        assert abs(z * b - lam) <= 1e-6
    elif v.verdict == nr.Verdict.OUT:
        assert v.certificate_margin > 0
        assert v.certificate_margin <= v.distance_estimate + 1e-9
