"""Structural tests: multiple-of-PSD, radialoid, peak decomposition, corner hypotheses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import NotRadialoid, PeakNotAttained
from .matcore import (
    as_cmatrix,
    eigh,
    eigvals,
    normality_residual,
    operator_norm,
)
from .numrange import (
    DEFAULT_ANGLES,
    EPS_CORNER,
    RadiiReport,
    _golden_max,
    corner_support_lines,
    grid_angles,
    numerical_radius,
    radii,
    support_batch,
)

NORMAL_TOL = 1e-9
RAY_TOL = 1e-8
GAP_TOL = 1e-6


def _ray_distance(z: np.ndarray, phase: float) -> np.ndarray:
    """Distance from each z to the ray e^{i phase}[0, inf)."""
    w = np.exp(-1j * phase) * np.asarray(z, dtype=complex)
    return np.where(w.real >= 0, np.abs(w.imag), np.abs(w))


def is_psd_multiple(A, tol: float = RAY_TOL, normal_tol: float = NORMAL_TOL) -> Tuple[bool, Optional[float]]:
    A = as_cmatrix(A)
    nrm = operator_norm(A)
    if nrm == 0:
        return True, 0.0
    if normality_residual(A) > normal_tol:
        return False, None
    ev = eigvals(A)
    # ray through the dominant eigenvalue
    phase = float(np.angle(ev[np.argmax(np.abs(ev))]) % (2 * np.pi))
    if np.max(_ray_distance(ev, phase)) <= tol * nrm:
        return True, phase
    return False, None


def radialoid_check(A, tol: float = RAY_TOL, m: int = DEFAULT_ANGLES) -> RadiiReport:
    """Radii report; ``radialoid=False`` already rules out spectral containment for all rank-one B."""
    return radii(A, m, tol)


# ----------------------------------------------------------- decomposition


@dataclass
class Decomposition:
    mu: complex
    U: np.ndarray
    k: int
    A1: np.ndarray
    offblock_residual: float

    def reassemble(self) -> np.ndarray:
        n = self.U.shape[0]
        D = np.zeros((n, n), dtype=complex)
        D[: self.k, : self.k] = self.mu * np.eye(self.k)
        D[self.k:, self.k:] = self.A1
        return np.conj(self.U).T @ D @ self.U


def _peak_eigenvalue(A: np.ndarray, target: float, tol: float) -> complex:
    ev = eigvals(A)
    cand = ev[np.abs(ev) >= target - tol]
    if cand.size == 0:
        raise PeakNotAttained(f"no eigenvalue of modulus {target:.6g}")
    args = np.angle(cand)
    # rounding can put a positive real peak just below the axis; keep it at 0
    args = np.where(args < -1e-9, args + 2 * np.pi, np.maximum(args, 0.0))
    # eigenvalues on the circle agreeing to within tol count as one
    order = np.argsort(args, kind="stable")
    first = cand[order[0]]
    same = np.abs(cand - first) <= max(tol, 1e-9 * target)
    return complex(np.mean(cand[same]))


def decompose_at_peak(A, tol: float = RAY_TOL, m: int = DEFAULT_ANGLES) -> Decomposition:
    """Split off the full eigenspace of a peak eigenvalue: ``U A U* = mu I_k (+) A1``."""
    A = as_cmatrix(A)
    rep = radii(A, m, tol * max(1.0, operator_norm(A)))
    if not rep.radialoid:
        raise NotRadialoid(f"r={rep.r:.6g} < norm={rep.norm:.6g}")
    scale = max(rep.norm, np.finfo(float).tiny)
    mu = _peak_eigenvalue(A, rep.w, max(tol * scale, 1e-9 * scale))
    n = A.shape[0]
    D = A - mu * np.eye(n)
    K = np.conj(D).T @ D + D @ np.conj(D).T
    vals, V = eigh((K + np.conj(K).T) / 2)
    null = np.sqrt(np.clip(vals, 0, None)) <= 1e-6 * scale
    k = int(null.sum())
    if k == 0:
        raise PeakNotAttained("peak eigenvalue has no reducing eigenvector")
    Q = np.concatenate([V[:, null], V[:, ~null]], axis=1)
    T = np.conj(Q).T @ A @ Q
    A1 = T[k:, k:].copy()
    R = T.copy()
    R[:k, :k] -= mu * np.eye(k)
    R[k:, k:] = 0
    return Decomposition(mu=mu, U=np.conj(Q).T, k=k, A1=A1, offblock_residual=float(np.linalg.norm(R)))


def check_lemma_disk(A1, mu: complex, w: float, m: int = DEFAULT_ANGLES, tol: float = 1e-9) -> Tuple[bool, float]:
    """Is ``W(A1)`` inside the closed disk ``|z - mu| <= w``?  Returns ``(holds, max|mu - nu| - w)``."""
    A1 = as_cmatrix(A1, allow_empty=True)
    if A1.shape[0] == 0:
        return True, -float(w)
    far, _ = numerical_radius(A1 - complex(mu) * np.eye(A1.shape[0]), m)
    excess = far - w
    return bool(excess <= tol), float(excess)


# ------------------------------------------------------------------ report


@dataclass
class PeakCorner:
    mu: complex
    count: int
    width: float


@dataclass
class ClassificationReport:
    is_psd_multiple: bool
    phase: Optional[float]
    normality_residual: float
    radii: RadiiReport
    w_attaining_mu: Optional[complex]
    corner_hypothesis: str
    polygon_case: bool
    isolated_peak_case: bool
    peaks: List[PeakCorner] = field(default_factory=list)

    @property
    def rank_one_containment_excluded(self) -> bool:
        """Non-radialoid matrices always have a violating rank-one B."""
        return not self.radii.radialoid

    def to_dict(self) -> dict:
        mu = self.w_attaining_mu
        return {
            "is_psd_multiple": self.is_psd_multiple,
            "phase": self.phase,
            "normality_residual": self.normality_residual,
            "radii": self.radii.to_dict(),
            "w_attaining_mu": None if mu is None else [mu.real, mu.imag],
            "corner_hypothesis": self.corner_hypothesis,
            "polygon_case": self.polygon_case,
            "isolated_peak_case": self.isolated_peak_case,
            "rank_one_containment_excluded": self.rank_one_containment_excluded,
            "peaks": [{"mu": [p.mu.real, p.mu.imag], "count": p.count, "width": p.width} for p in self.peaks],
        }


def w_attaining_points(A, m: int = DEFAULT_ANGLES, max_points: int = 16) -> Tuple[float, List[complex]]:
    """Numerical radius and boundary points where it is attained (a few per plateau)."""
    A = as_cmatrix(A)
    angles = grid_angles(m)
    h, pts, _ = support_batch(A, angles)
    w, _ = numerical_radius(A, m)
    if w == 0:
        return 0.0, [0j]
    step = 2 * np.pi / m
    near = h >= w * (1 - 2 * (1 - math.cos(step)))
    if near.all():
        idx = list(range(0, m, max(1, m // 8)))
    else:
        start = int(np.flatnonzero(~near)[0])
        idx, run = [], []
        for j in list(range(start, m)) + list(range(start)):
            if near[j]:
                run.append(j)
            elif run:
                idx.extend(_run_picks(run, h))
                run = []
        if run:
            idx.extend(_run_picks(run, h))
    out = []
    f = lambda t: float(support_batch(A, [t])[0][0])
    for j in idx[:max_points]:
        t, val = _golden_max(f, angles[j] - step, angles[j] + step)
        if val < h[j]:
            t, val = angles[j], h[j]
        if val < w - 1e-8 * max(1.0, w):
            continue
        p = complex(support_batch(A, [t])[1][0])
        if not any(abs(p - q) <= 1e-7 * max(1.0, w) for q in out):
            out.append(p)
    return w, out


def _run_picks(run, h):
    best = max(run, key=lambda j: h[j])
    picks = [best]
    if len(run) > 8:
        picks += [run[i] for i in np.linspace(0, len(run) - 1, 4).astype(int)]
    return picks


def theorem_hypotheses(A, m: int = DEFAULT_ANGLES, normal_tol: float = NORMAL_TOL,
                       ray_tol: float = RAY_TOL, gap_tol: float = GAP_TOL,
                       eps_corner: float = EPS_CORNER) -> ClassificationReport:
    A = as_cmatrix(A)
    psd, phase = is_psd_multiple(A, ray_tol, normal_tol)
    nres = normality_residual(A)
    rep = radialoid_check(A, ray_tol * max(1.0, operator_norm(A)), m)
    w, peaks = w_attaining_points(A, m)
    corners = []
    for mu in peaks:
        try:
            c = corner_support_lines(A, mu, m, eps_corner)
        except ValueError:
            continue
        corners.append(PeakCorner(mu, c.count, c.width))
    if any(c.count >= 2 for c in corners):
        verdict = "Holds"
        mu = next(c.mu for c in corners if c.count >= 2)
    elif corners and all(c.width < eps_corner / 4 for c in corners):
        verdict = "Fails"
        mu = corners[0].mu
    else:
        verdict = "Borderline"
        mu = corners[0].mu if corners else None
    normal = nres <= normal_tol
    isolated = False
    if normal and rep.norm > 0:
        ev = eigvals(A)
        scale = rep.norm
        top = ev[np.abs(ev) >= rep.r - 1e-9 * scale]
        for lam in top:
            others = ev[np.abs(ev - lam) > 1e-9 * scale]
            if others.size == 0 or np.min(np.abs(others - lam)) >= gap_tol * scale:
                isolated = True
                break
    return ClassificationReport(
        is_psd_multiple=psd,
        phase=phase,
        normality_residual=nres,
        radii=rep,
        w_attaining_mu=mu,
        corner_hypothesis=verdict,
        polygon_case=normal,
        isolated_peak_case=isolated,
        peaks=corners,
    )
