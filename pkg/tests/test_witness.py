import math

import numpy as np
import pytest

from fovprod import witness as wt
from fovprod.errors import HypothesisNotMet, NotNormalized
from fovprod.matcore import random_unitary, unitary_conjugate
from fovprod.numrange import Verdict

from oracles import brute_force_distance

JORDAN2 = np.array([[0, 2], [0, 0]], dtype=complex)


def check_cert(A, cert):
    B = cert.B
    assert np.linalg.matrix_rank(B, tol=1e-9 * np.linalg.norm(B)) == 1
    assert cert.lam == pytest.approx(np.trace(A @ B), abs=1e-9 * max(1, abs(cert.lam)))
    assert cert.verdict.verdict == Verdict.OUT
    assert cert.margin > 0


def test_lemma_disk_cube_root():
    A = np.diag([1, np.exp(2j * np.pi / 3)])
    cert = wt.witness_lemma_disk(A)
    assert cert.construction == "LemmaDisk"
    check_cert(A, cert)
    nu = cert.parameters["nu"]
    assert cert.lam == pytest.approx(1 - nu, abs=1e-12)


def test_lemma_disk_none_when_disk_condition_holds():
    assert wt.witness_lemma_disk(np.diag([1, 0.5 + 0.4j])) is None


def test_lemma_disk_requires_normalized():
    with pytest.raises(NotNormalized):
        wt.witness_lemma_disk(np.diag([2, -2]))


def test_corner_closed_form():
    A = np.diag([1, 0.5 + 0.4j])
    cert = wt.witness_corner(A)
    p = cert.parameters
    assert p["alpha1"] == pytest.approx(math.pi - math.atan(0.8), abs=1e-12)
    assert p["r1"] == pytest.approx(math.sqrt(0.41), abs=1e-12)
    assert p["theta"] == pytest.approx(math.atan(p["r1"] * math.sin(p["alpha1"])), abs=1e-12)
    a1, r1, th = p["alpha1"], p["r1"], p["theta"]
    closed = complex(2 * math.sin(a1) * math.cos(th) + r1 * math.sin(th),
                     2 * math.cos(a1) * math.cos(th) + r1 * math.cos(th))
    assert abs(cert.lam - closed) <= 1e-9
    assert abs(p["trace_lambda"] - closed) <= 1e-9
    assert p["theta_gap"] > 0
    check_cert(A, cert)


def test_corner_blocks_trace_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a1 = rng.uniform(math.pi / 2, math.pi)
        r1 = rng.uniform(0.05, 1)
        th = min(math.pi / 4, math.atan(r1 * math.sin(a1)))
        B0, U0 = wt.corner_blocks(a1, th)
        A0 = np.diag([1, 1 + r1 * np.exp(1j * a1)])
        lam = np.trace(U0 @ A0 @ U0.conj().T @ B0)
        assert lam == pytest.approx(wt.corner_lambda(a1, r1, th), abs=1e-12)
        assert wt.theta_inequality(a1, r1, th) > 0


def test_corner_adjoint_flip():
    A = np.diag([1, 0.5 - 0.4j])
    cert = wt.witness_corner(A)
    assert cert.parameters["adjoint_flip"]
    check_cert(A, cert)


def test_corner_hypothesis_not_met_on_smooth_peak():
    A = np.diag([1, 1, 1])
    with pytest.raises(HypothesisNotMet):
        wt.corner_construction(A)


def test_random_search_non_radialoid():
    cert = wt.random_rank_one_search(JORDAN2, trials=200, seed=0)
    assert cert is not None and cert.construction == "RandomSearch"
    assert cert.lam == pytest.approx(2)
    check_cert(JORDAN2, cert)


def test_random_search_rejects_zero_trials():
    with pytest.raises(ValueError):
        wt.random_rank_one_search(JORDAN2, trials=0)


def test_falsify_psd_returns_none():
    assert wt.falsify(np.diag([3.0, 1.0])) is None
    assert wt.falsify(1j * np.eye(2)) is None


def test_falsify_original_scale():
    rng = np.random.default_rng(1)
    U = random_unitary(3, rng)
    A = unitary_conjugate(2.5 * np.exp(0.7j) * np.diag([1, np.exp(2j * np.pi / 3), 0.2]), U)
    cert = wt.falsify(A)
    check_cert(A, cert)
    assert brute_force_distance(A, cert.B, cert.lam, 256) > 0


def test_falsify_hermitian_indefinite():
    A = np.diag([1.0, -1.0])
    cert = wt.falsify(A)
    check_cert(A, cert)


@pytest.mark.parametrize("seed", range(8))
def test_falsify_random_normal_vs_brute_force(seed):
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(2, 5))
    ev = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    A = unitary_conjugate(np.diag(ev), random_unitary(n, rng))
    cert = wt.falsify(A)
    check_cert(A, cert)
    d_lo = brute_force_distance(A, cert.B, cert.lam, 512)
    d_hi = brute_force_distance(A, cert.B, cert.lam, 512, side="inner")
    assert d_lo > 0
    assert cert.margin <= d_hi + 1e-9


def test_certificate_json():
    import json
    cert = wt.falsify(np.diag([1, 0.5 + 0.4j]))
    d = json.loads(json.dumps(cert.to_dict()))
    assert d["construction"] == "CornerSupportLine"
    assert d["B"]["n"] == 2
