import numpy as np
import pytest

from fovprod import classify as cl
from fovprod.errors import NotRadialoid, PeakNotAttained
from fovprod.matcore import direct_sum, random_unitary, unitary_conjugate

JORDAN2 = np.array([[0, 2], [0, 0]], dtype=complex)


def test_psd_multiple_examples():
    ok, phase = cl.is_psd_multiple(np.diag([2, 1, 0]))
    assert ok and phase == pytest.approx(0)
    ok, phase = cl.is_psd_multiple(1j * np.diag([2, 1]))
    assert ok and phase == pytest.approx(np.pi / 2)
    assert not cl.is_psd_multiple(np.diag([1, -1]))[0]
    assert not cl.is_psd_multiple(JORDAN2)[0]
    assert cl.is_psd_multiple(np.zeros((2, 2)))[0]


def test_psd_multiple_after_unitary_change():
    rng = np.random.default_rng(0)
    U = random_unitary(4, rng)
    A = unitary_conjugate(np.exp(0.4j) * np.diag([3, 1, 0.5, 0]), U)
    assert cl.is_psd_multiple(A)[0]
    assert not cl.is_psd_multiple(A + 1e-3 * np.diag([0, 1j, 0, 0]))[0]


def test_radialoid_check():
    assert not cl.radialoid_check(JORDAN2).radialoid
    assert cl.radialoid_check(direct_sum(np.eye(1), 0.5 * JORDAN2)).radialoid


def test_decompose_at_peak_reassembles():
    rng = np.random.default_rng(1)
    U = random_unitary(4, rng)
    A = unitary_conjugate(np.diag([1, np.exp(2j * np.pi / 3), 0.3, -0.2j]), U)
    dec = cl.decompose_at_peak(A)
    assert dec.mu == pytest.approx(1)
    assert dec.k == 1 and dec.A1.shape == (3, 3)
    assert np.linalg.norm(dec.reassemble() - A) <= 1e-9
    assert dec.offblock_residual <= 1e-9


def test_decompose_reducing_nonnormal_remainder():
    A = direct_sum(np.eye(1), 0.5 * JORDAN2)
    dec = cl.decompose_at_peak(A)
    assert dec.k == 1
    assert np.allclose(np.abs(np.linalg.eigvals(dec.A1)), 0, atol=1e-9)


def test_peak_tie_break_smallest_argument():
    A = np.diag([np.exp(2j * np.pi / 3), 1 - 1e-17j, -1])
    assert cl.decompose_at_peak(A).mu == pytest.approx(1)
    assert cl.decompose_at_peak(np.diag([-1, 1j])).mu == pytest.approx(1j)


def test_decompose_errors():
    with pytest.raises(NotRadialoid):
        cl.decompose_at_peak(JORDAN2)
    with pytest.raises((NotRadialoid, PeakNotAttained)):
        cl.decompose_at_peak(np.array([[1, 1], [0, 1]]))


def test_lemma_disk_check():
    ok, slack = cl.check_lemma_disk(np.diag([np.exp(2j * np.pi / 3)]), 1.0, 1.0)
    assert not ok and slack == pytest.approx(np.sqrt(3) - 1, abs=1e-9)
    ok, slack = cl.check_lemma_disk(np.diag([0.5 + 0.4j]), 1.0, 1.0)
    assert ok and slack == pytest.approx(np.sqrt(0.41) - 1, abs=1e-9)


def test_hypotheses_triangle():
    rep = cl.theorem_hypotheses(np.diag([1, 1j, -1]))
    assert rep.corner_hypothesis == "Holds"
    assert rep.polygon_case
    # the eigenvalue at distance w from the origin is isolated from the rest
    assert rep.isolated_peak_case
    assert not rep.is_psd_multiple


def test_hypotheses_jordan():
    rep = cl.theorem_hypotheses(JORDAN2)
    assert rep.rank_one_containment_excluded
    assert not rep.polygon_case
    assert rep.corner_hypothesis in ("Fails", "Borderline")


def test_hypotheses_point_and_disk():
    # W = conv({1} u disk(0, 1/2)): a corner at 1
    rep = cl.theorem_hypotheses(direct_sum(np.eye(1), 0.5 * JORDAN2))
    assert rep.corner_hypothesis == "Holds"
    assert rep.w_attaining_mu == pytest.approx(1)
    rep = cl.theorem_hypotheses(JORDAN2 / 2 + np.eye(2) * 0.5)
    assert rep.corner_hypothesis in ("Fails", "Borderline")


def test_corner_holds_for_normal_implies_radialoid():
    rng = np.random.default_rng(2)
    for _ in range(5):
        n = int(rng.integers(2, 5))
        U = random_unitary(n, rng)
        ev = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        rep = cl.theorem_hypotheses(unitary_conjugate(np.diag(ev), U), m=256)
        if rep.corner_hypothesis == "Holds":
            assert rep.radii.radialoid


def test_report_json():
    import json
    d = cl.theorem_hypotheses(np.diag([1, -1])).to_dict()
    json.dumps(d)
    assert d["corner_hypothesis"] == "Holds"
    assert d["rank_one_containment_excluded"] is False


def test_psd_verdict_invariant_under_gamma_u_and_adjoint():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        P = G @ G.conj().T
        N = np.diag(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        U = random_unitary(n, rng)
        g = complex(rng.standard_normal(), rng.standard_normal())
        for A, want in ((P, True), (N, False)):
            assert cl.is_psd_multiple(g * unitary_conjugate(A, U))[0] == want
            assert cl.is_psd_multiple(A.conj().T)[0] == want


def test_psd_multiple_contains_rank_one_products():
    from fovprod.matcore import rank_one
    from fovprod.productset import containment_check
    rng = np.random.default_rng(4)
    for _ in range(5):
        n = int(rng.integers(2, 5))
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = 1j * G @ G.conj().T
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        B = rank_one(x / np.linalg.norm(x), y / np.linalg.norm(y))
        assert containment_check(A, B, 1e-6).overall == "Contained"
