"""Scripted reproductions of the worked examples, each returning claim-by-claim results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import geometry as geo
from .classify import is_psd_multiple
from .errors import Inconclusive
from .matcore import (
    direct_sum,
    eigvals,
    match_multisets,
    normality_residual,
    rank_one,
)
from .numrange import DEFAULT_ANGLES, Verdict, compute_range, contains_point, numerical_radius, support_batch
from .productset import ProductSet, quotient_membership, sample_product_set
from .witness import falsify

MARGIN_LADDER = (4, 8, 16, 32, 90, 360)


@dataclass
class Claim:
    description: str
    expected: Any
    observed: Any
    tolerance: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        return {"description": self.description, "expected": _jsonable(self.expected),
                "observed": _jsonable(self.observed), "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class ReproResult:
    example_id: str
    claims: List[Claim] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)
    note: str = ""

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, description, expected, observed, tolerance, passed) -> None:
        self.claims.append(Claim(description, expected, observed, tolerance, bool(passed)))

    def to_dict(self) -> dict:
        return {"example_id": self.example_id, "overall_pass": self.overall_pass,
                "params": _jsonable(self.params), "note": self.note,
                "claims": [c.to_dict() for c in self.claims]}


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def roots_of_unity_matrix(n: int) -> np.ndarray:
    """I + diag of the n-th roots of unity."""
    return np.eye(n) + np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def jordan_block(d: float) -> np.ndarray:
    return np.array([[1, d], [0, 1]], dtype=complex)


def certificate_margin(A) -> float:
    """Certified exclusion margin of the falsifier's witness (0.0 when none is found)."""
    try:
        cert = falsify(A)
    except Inconclusive:
        return 0.0
    return 0.0 if cert is None else cert.margin


def circle_sequence_matrix(mus) -> np.ndarray:
    """I + diag(mus) for points mus on the unit circle."""
    mus = np.asarray(mus, dtype=complex)
    if mus.ndim != 1 or mus.size == 0 or np.max(np.abs(np.abs(mus) - 1)) > 1e-12:
        raise ValueError("mus must be a nonempty list of unit-modulus numbers")
    return np.eye(mus.size) + np.diag(mus)


def margin_ladder(ns: Sequence[int] = MARGIN_LADDER, extra_block: Optional[np.ndarray] = None,
                  sequence: Optional[Callable[[int], Sequence[complex]]] = None) -> List[float]:
    """Witness margins for I + diag(mu_1..mu_n); ``sequence(n)`` overrides the roots of unity."""
    out = []
    for n in ns:
        A = roots_of_unity_matrix(n) if sequence is None else circle_sequence_matrix(sequence(n))
        if extra_block is not None:
            A = direct_sum(A, extra_block)
        out.append(certificate_margin(A))
    return out


# ---------------------------------------------------------------- examples


def repro_intro_hermitian() -> ReproResult:
    A = np.diag([1.0, -1.0]).astype(complex)
    B = np.array([[0, 1], [1, 0]], dtype=complex)
    res = ReproResult("intro-hermitian", params={"A": "diag(1,-1)", "B": "[[0,1],[1,0]]"})
    ok, worst = match_multisets(eigvals(A @ B), [1j, -1j], 1e-10)
    res.add("spectrum of AB is {i, -i}", [1j, -1j], list(eigvals(A @ B)), 1e-10, ok)
    ok2, _ = match_multisets(eigvals(B @ A), [1j, -1j], 1e-10)
    res.add("spectrum of BA is {i, -i}", [1j, -1j], list(eigvals(B @ A)), 1e-10, ok2)
    seg = np.array([-1, 1], dtype=complex)
    gapA = geo.hausdorff(compute_range(A).inner_polygon, seg)
    gapB = geo.hausdorff(compute_range(B).inner_polygon, seg)
    res.add("W(A) = W(B) = [-1, 1]", 0.0, max(gapA, gapB), 1e-6, max(gapA, gapB) <= 1e-6)
    cloud = sample_product_set(A, B, 32)
    hull_err = max(float(np.max(np.abs(cloud.imag))), abs(cloud.real.min() + 1), abs(cloud.real.max() - 1))
    res.add("sampled product set spans [-1, 1] on the real line", [-1.0, 1.0],
            [float(cloud.real.min()), float(cloud.real.max())], 1e-6, hull_err <= 1e-6)
    ps = ProductSet(A, B)
    for lam in (1j, -1j):
        v = ps.membership(lam)
        good = v.verdict == Verdict.OUT and abs(v.distance_estimate - 1) <= 1e-3 and v.certificate_margin > 0
        res.add(f"{lam} is certified outside W(A)W(B) at distance 1", 1.0,
                {"verdict": v.verdict.value, "distance": v.distance_estimate, "margin": v.certificate_margin},
                1e-3, good)
    return res


def repro_additive_perturbation(M: float = 4.0, eps: float = 0.01, m: int = DEFAULT_ANGLES) -> ReproResult:
    if M <= 0 or eps < 0:
        raise ValueError("need M > 0 and eps >= 0")
    A = np.array([[0, M], [0, 0]], dtype=complex)
    B = np.array([[0, 0], [eps, 0]], dtype=complex)
    res = ReproResult("additive", params={"M": M, "eps": eps})
    s = math.sqrt(M * eps)
    lam = eigvals(A + B)
    ok, worst = match_multisets(lam, [s, -s], 1e-9)
    res.add("spectrum of A+B is {+sqrt(M eps), -sqrt(M eps)}", [s, -s], list(lam), 1e-9, ok)
    RA = compute_range(A, m)
    hsum = RA.support_values + support_batch(B, RA.angles)[0]
    worst_excess = max(float(np.max((np.exp(-1j * RA.angles) * l).real - hsum)) for l in lam)
    res.add("each eigenvalue passes the W(A)+W(B) half-plane test", "<= 0", worst_excess, 1e-9,
            worst_excess <= 1e-9)
    return res


def repro_truncated_example_1_3(n: int = 16, trials: int = 100, seed: int = 0, tol: float = 1e-3) -> ReproResult:
    if n < 4:
        raise ValueError("n must be at least 4")
    A = roots_of_unity_matrix(n)
    res = ReproResult("truncation-1-3", params={"n": n, "trials": trials, "seed": seed, "tol": tol},
                      note="finite truncations violate rank-one containment; the margins measure how fast "
                           "the violation fades as the roots of unity fill the circle")
    nres = normality_residual(A)
    psd, _ = is_psd_multiple(A)
    res.add("A_n is normal and not a multiple of a PSD matrix", [0.0, False], [nres, psd], 1e-12,
            nres <= 1e-12 and not psd)
    try:
        cert = falsify(A, seed=seed)
    except Inconclusive:
        cert = None
    margin = cert.margin if cert is not None else 0.0
    res.add("falsify returns a certified witness", True,
            None if cert is None else {"construction": cert.construction, "margin": margin}, None,
            cert is not None and margin > 0)
    m2 = certificate_margin(roots_of_unity_matrix(2 * n))
    res.add("certificate margin shrinks from n to 2n", f"margin({2 * n}) < margin({n})", [margin, m2], None,
            0 < m2 < margin)
    rng = np.random.default_rng(seed)
    worst = 0.0
    RA = None
    for _ in range(trials):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        B = rank_one(x / np.linalg.norm(x), y / np.linalg.norm(y))
        ps = ProductSet(A, B, RA=RA)
        RA = ps.RA
        v = ps.membership(complex(np.trace(A @ B)), 1e-6)
        if v.verdict == Verdict.OUT:
            worst = max(worst, v.certificate_margin)
    res.add("random rank-one violations stay below the constructed margin", f"<= {margin} + {tol}", worst,
            tol, worst <= margin + tol)
    return res


def repro_example_1_4(n: int = 360, d: float = 1.0) -> ReproResult:
    if n < 8:
        raise ValueError("n must be at least 8")
    if not 0 < d <= 1:
        raise ValueError("d must lie in (0, 1]")
    An = roots_of_unity_matrix(n)
    J = jordan_block(d)
    Ahat = direct_sum(An, J)
    res = ReproResult("oplus-1-4", params={"n": n, "d": d},
                      note="the infinite-dimensional statement is not asserted at finite n; "
                           "the violation margin is measured instead")
    nres = normality_residual(Ahat)
    expect = math.sqrt(2) * d * d / (2 * n + 2 + d * d)
    res.add("normality residual equals sqrt(2) d^2 / ||A||_F^2", expect, nres, 1e-12,
            nres > 0 and abs(nres - expect) <= 1e-12)
    RJ = compute_range(J)
    radius_err = float(np.max(np.abs(np.abs(RJ.boundary_points - 1) - d / 2)))
    res.add("W(block) is the disk |z-1| <= d/2", d / 2, d / 2 + radius_err, 1e-4, radius_err <= 1e-4)
    slack = float(geo.inner_depth(1.0, compute_range(An).inner_polygon)[0] - d / 2)
    res.add("the block's disk sits inside W(A_n) with slack", ">= 0.49 for n=360, d=1", slack, None,
            slack > 0 and (slack >= 0.49 or d < 1 or n < 360))
    m1 = certificate_margin(Ahat)
    m2 = certificate_margin(direct_sum(roots_of_unity_matrix(2 * n), J))
    res.add("violation margin shrinks from n to 2n", f"0 < margin({2 * n}) < margin({n})", [m1, m2], None,
            0 < m2 < m1)
    return res


def _random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def repro_cited_inclusions(trials: int = 50, seed: int = 0, n: Optional[int] = None,
                           tol: float = 1e-6) -> ReproResult:
    """Quotient inclusion for sigma(A^{-1}B) and hull inclusion for PSD A, on random instances."""
    if trials < 10:
        raise ValueError("trials must be at least 10")
    rng = np.random.default_rng(seed)
    res = ReproResult("cited-inclusions", params={"trials": trials, "seed": seed, "n": n, "tol": tol})
    q_fail, q_worst = 0, 0.0
    h_fail, h_worst = 0, 0.0
    for _ in range(trials):
        k = n or int(rng.integers(2, 7))
        G = _random_matrix(rng, k)
        w, t = numerical_radius(G)
        A = G + (w + 0.5) * np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.eye(k)
        B = _random_matrix(rng, k)
        if contains_point(compute_range(A), 0.0, 1e-9) != Verdict.OUT:
            q_fail += 1
            continue
        for lam in eigvals(np.linalg.solve(A, B)):
            found, a, b, r = quotient_membership(A, B, lam, tol)
            q_worst = max(q_worst, r)
            q_fail += not found
        k = n or int(rng.integers(2, 7))
        P = _random_matrix(rng, k)
        P = P @ np.conj(P).T
        B = _random_matrix(rng, k)
        ps = ProductSet(P, B)
        ev = eigvals(P @ B)
        verts = geo.convex_hull(ev)
        for lam in verts:
            v = ps.membership(lam, tol)
            h_worst = max(h_worst, v.distance_estimate if v.verdict != Verdict.IN else 0.0)
            h_fail += v.verdict != Verdict.IN
    res.add("every eigenvalue of A^{-1}B is b/a with a in W(A), b in W(B)", 0, q_fail, tol, q_fail == 0)
    res.add("worst quotient residual", f"<= {tol}", q_worst, tol, q_worst <= tol)
    res.add("every vertex of conv sigma(PB) lies in W(P)W(B) for PSD P", 0, h_fail, tol, h_fail == 0)
    return res


REPRO: Dict[str, Callable[..., ReproResult]] = {
    "intro-hermitian": repro_intro_hermitian,
    "additive": repro_additive_perturbation,
    "truncation-1-3": repro_truncated_example_1_3,
    "oplus-1-4": repro_example_1_4,
    "cited-inclusions": repro_cited_inclusions,
}


def run_repro(example_id: str, **kwargs) -> ReproResult:
    try:
        fn = REPRO[example_id]
    except KeyError:
        raise ValueError(f"unknown example id {example_id!r}; choose from {sorted(REPRO)}") from None
    return fn(**kwargs)
