"""Rank-one witnesses B with an eigenvalue of AB outside W(A)W(B).

Three strategies, tried in order by :func:`falsify`:

LemmaDisk
    A = mu I (+) A1 after normalizing, and some nu in W(A1) with |1 - nu| > 1.
    B = V U* [[0,0],[2,0]] U V* on span(peak vector, maximizer of nu) has
    tr(AB) = 1 - nu outside the unit disk, which holds W(A)W(B).
CornerSupportLine
    1 is a corner of W(A) and a support line through 1 also touches
    1 + r1 e^{i alpha1}.  The tilted B0 separates lambda by a vertical line.
RandomSearch
    Top singular pair first, then seeded Gaussian unit vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classify import decompose_at_peak, is_psd_multiple
from .errors import FovError, HypothesisNotMet, Inconclusive, NotNormalized, NotRadialoid, PeakNotAttained
from .matcore import as_cmatrix, matrix_to_dict, operator_norm, rank_one, top_singular_pair
from .numrange import DEFAULT_ANGLES, Verdict, numerical_radius, support_batch
from .productset import ProductSet, ProductVerdict

WITNESS_TOL = 1e-9
U_DISK = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
U_CORNER = np.array([[1j, -1j], [1, 1]], dtype=complex) / math.sqrt(2)


@dataclass
class WitnessCertificate:
    B: np.ndarray
    lam: complex
    verdict: ProductVerdict
    construction: str
    parameters: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.verdict.certificate_margin

    def to_dict(self) -> dict:
        params = {k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in self.parameters.items()}
        return {
            "construction": self.construction,
            "B": matrix_to_dict(self.B),
            "lambda": [self.lam.real, self.lam.imag],
            "margin": self.margin,
            "verdict": self.verdict.to_dict(),
            "parameters": params,
        }


def _certify(A, B, lam, construction, params, tol, grid, m) -> Optional[WitnessCertificate]:
    v = ProductSet(A, B, m).membership(lam, tol, grid)
    if v.verdict != Verdict.OUT:
        return None
    return WitnessCertificate(np.asarray(B, dtype=complex), complex(lam), v, construction, params)


def _check_normalized(A, tol=1e-8):
    nrm = operator_norm(A)
    w, _ = numerical_radius(A)
    if abs(nrm - 1) > tol or abs(w - 1) > tol:
        raise NotNormalized(f"expected norm = w = 1, got norm={nrm:.3g}, w={w:.3g}")


# ---------------------------------------------------------------- LemmaDisk


def lemma_disk_pair(A) -> Optional[tuple]:
    """For normalized A with peak 1: ``(B, lam, nu)`` when some nu in W(A1) has |1 - nu| > 1."""
    A = as_cmatrix(A)
    dec = decompose_at_peak(A)
    if dec.A1.shape[0] == 0:
        return None
    n1 = dec.A1.shape[0]
    D = dec.A1 - dec.mu * np.eye(n1)
    far, t = numerical_radius(D)
    if far <= abs(dec.mu) * (1 + WITNESS_TOL):
        return None
    _, _, X = support_batch(D, [t], want_vectors=True)
    Q = np.conj(dec.U).T                      # columns: peak eigenspace, then A1 basis
    e = Q[:, 0]
    f = Q[:, dec.k:] @ X[0]
    V = np.stack([e, f], axis=1)
    B0 = np.array([[0, 0], [2, 0]], dtype=complex)
    B = V @ np.conj(U_DISK).T @ B0 @ U_DISK @ np.conj(V).T
    nu = complex(np.conj(f) @ A @ f)
    lam = complex(np.trace(A @ B))
    return B, lam, nu


def witness_lemma_disk(A, tol: float = WITNESS_TOL, grid: int = 128,
                       m: int = DEFAULT_ANGLES) -> Optional[WitnessCertificate]:
    """LemmaDisk witness for a normalized A (norm = w = 1, peak eigenvalue attained)."""
    A = as_cmatrix(A)
    _check_normalized(A)
    got = lemma_disk_pair(A)
    if got is None:
        return None
    B, lam, nu = got
    return _certify(A, B, lam, "LemmaDisk", {"mu": complex(decompose_at_peak(A).mu), "nu": nu}, tol, grid, m)


# --------------------------------------------------------- CornerSupportLine


def corner_lambda(alpha1: float, r1: float, theta: float) -> complex:
    """Closed-form trace tr(U0 A0 U0* B0) for A0 = diag(1, 1 + r1 e^{i alpha1})."""
    return complex(2 * math.sin(alpha1) * math.cos(theta) + r1 * math.sin(theta),
                   2 * math.cos(alpha1) * math.cos(theta) + r1 * math.cos(theta))


def corner_blocks(alpha1: float, theta: float):
    """``(B0, U0)`` of the corner construction."""
    B0 = 2 * np.exp(1j * (math.pi / 2 - alpha1)) * np.array(
        [[math.cos(theta), 0], [math.sin(theta), 0]], dtype=complex)
    return B0, U_CORNER.copy()


def theta_inequality(alpha1: float, r1: float, theta: float) -> float:
    """Gap in ``sin a cos t + r sin t > sqrt((sin a cos t)^2 + sin^2 t)`` (positive when it holds)."""
    s = math.sin(alpha1) * math.cos(theta)
    return s + r1 * math.sin(theta) - math.sqrt(s * s + math.sin(theta) ** 2)


def _upper_edge(A1: np.ndarray):
    """Support line through 1 whose normal lies in (0, pi/2): second contact point of W(A1).

    Returns ``(alpha1, r1, x)`` with ``x`` the unit vector of A1's space giving the
    contact point, or None when the upper support line is horizontal or steeper.
    """
    F = lambda t: float(support_batch(A1, [t])[0][0]) - math.cos(t)
    lo, hi = 0.0, math.pi / 2
    if F(hi) <= 0:
        return None
    if F(lo) >= 0:
        return None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if F(mid) <= 0:
            lo = mid
        else:
            hi = mid
    _, P, X = support_batch(A1, [lo], want_vectors=True)
    z = complex(P[0]) - 1
    return float(np.angle(z) % (2 * np.pi)), float(abs(z)), X[0]


def corner_construction(A):
    """Build ``(B, lam, params)`` for a normalized A with peak 1; raises HypothesisNotMet."""
    A = as_cmatrix(A)
    psd, _ = is_psd_multiple(A)
    if psd:
        raise HypothesisNotMet("A is a multiple of a PSD matrix")
    dec = decompose_at_peak(A)
    if abs(dec.mu - 1) > 1e-8:
        raise NotNormalized("peak eigenvalue must be 1")
    if dec.A1.shape[0] == 0:
        raise HypothesisNotMet("A is scalar")
    # two support lines through 1 iff Re W(A1) stays strictly left of 1
    if float(support_batch(dec.A1, [0.0])[0][0]) >= 1 - 1e-12:
        raise HypothesisNotMet("1 is not a corner of W(A)")
    best = None
    for flip in (False, True):
        A1 = np.conj(dec.A1).T if flip else dec.A1
        e = _upper_edge(A1)
        if e is None:
            continue
        alpha1, r1, x = e
        score = r1 * math.sin(alpha1)
        if best is None or score > best[0]:
            best = (score, flip, alpha1, r1, x)
    if best is None or best[0] <= 1e-9:
        raise HypothesisNotMet("support line through 1 touches W(A) only at 1")
    _, flip, alpha1, r1, x = best
    theta = min(math.pi / 4, math.atan(r1 * math.sin(alpha1)))
    B0, U0 = corner_blocks(alpha1, theta)
    Q = np.conj(dec.U).T
    V = np.stack([Q[:, 0], Q[:, dec.k:] @ x], axis=1)
    Bt = V @ np.conj(U0).T @ B0 @ U0 @ np.conj(V).T
    lam_t = corner_lambda(alpha1, r1, theta)
    if flip:
        # built for A*: B = Bt*, lam = conj(lam_t)
        B, lam = np.conj(Bt).T, lam_t.conjugate()
    else:
        B, lam = Bt, lam_t
    params = {"mu": 1 + 0j, "alpha1": alpha1, "r1": r1, "theta": theta, "adjoint_flip": flip,
              "theta_gap": theta_inequality(alpha1, r1, theta)}
    return B, lam, params


def witness_corner(A, tol: float = WITNESS_TOL, grid: int = 128,
                   m: int = DEFAULT_ANGLES) -> Optional[WitnessCertificate]:
    A = as_cmatrix(A)
    _check_normalized(A)
    B, lam, params = corner_construction(A)
    params["trace_lambda"] = complex(np.trace(A @ B))
    return _certify(A, B, lam, "CornerSupportLine", params, tol, grid, m)


# ------------------------------------------------------------- RandomSearch


def random_rank_one_search(A, trials: int = 200, seed: int = 0, tol: float = WITNESS_TOL,
                           grid: int = 128, m: int = DEFAULT_ANGLES) -> Optional[WitnessCertificate]:
    """Try B = x (x) y for the top singular pair, then ``trials`` random unit pairs."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    A = as_cmatrix(A)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    RA = None

    def unit():
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return v / np.linalg.norm(v)

    sigma, x, y = top_singular_pair(A)
    pairs = [(x, y)] if sigma > 0 else []
    for t in range(trials + 1):
        if t < len(pairs):
            x, y = pairs[t]
            trial = 0
        else:
            x, y = unit(), unit()
            trial = t + 1 - len(pairs)
            if trial > trials:
                break
        B = rank_one(x, y)
        lam = complex(np.conj(y) @ A @ x)
        if lam == 0:
            continue
        ps = ProductSet(A, B, m, RA=RA)
        RA = ps.RA
        v = ps.membership(lam, tol, grid)
        if v.verdict == Verdict.OUT:
            return WitnessCertificate(B, lam, v, "RandomSearch",
                                      {"seed": seed, "trial": trial, "hint": trial == 0})
    return None


# ---------------------------------------------------------------- dispatcher


def falsify(A, trials: int = 200, seed: int = 0, tol: float = WITNESS_TOL, grid: int = 128,
            m: int = DEFAULT_ANGLES) -> Optional[WitnessCertificate]:
    """None for PSD multiples, otherwise a certificate in A's original scale.

    Raises Inconclusive when no strategy produced a certified witness.
    """
    A = as_cmatrix(A)
    if is_psd_multiple(A)[0]:
        return None
    tried = []
    try:
        dec = decompose_at_peak(A)
    except (NotRadialoid, PeakNotAttained) as exc:
        dec = None
        tried.append(f"normalize: {exc}")
    if dec is not None:
        mu = complex(dec.mu)
        Ah = A / mu
        got = lemma_disk_pair(Ah)
        if got is not None:
            B, lam, nu = got
            cert = _certify(A, B, mu * lam, "LemmaDisk", {"mu": mu, "nu": nu * mu}, tol, grid, m)
            if cert is not None:
                return cert
            tried.append("LemmaDisk: not certified")
        try:
            B, lam, params = corner_construction(Ah)
            params["mu"] = mu
            cert = _certify(A, B, mu * lam, "CornerSupportLine", params, tol, grid, m)
            if cert is not None:
                return cert
            tried.append("CornerSupportLine: not certified")
        except (HypothesisNotMet, FovError) as exc:
            tried.append(f"CornerSupportLine: {exc}")
    cert = random_rank_one_search(A, trials, seed, tol, grid, m)
    if cert is not None:
        return cert
    tried.append(f"RandomSearch: no hit in {trials} trials")
    raise Inconclusive("; ".join(tried))
