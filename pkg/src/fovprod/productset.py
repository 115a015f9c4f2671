"""Membership of a complex number in the product set W(A)W(B).

W(A)W(B) is the union of the scaled copies z*W(B) over z in W(A).  It is not
convex in general, so membership is decided three ways:

* In: an explicit pair (z, b) from the inner polygons with |zb - lam| <= tol_in.
* Out: a certified positive lower bound on dist(lam, W(A)W(B)), either from a
  Lipschitz cell cover of outer(W(A)) or from a single separating half-plane.
* Borderline: neither could be established.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import geometry as geo
from .matcore import as_cmatrix, eigvals, sort_spectrum
from .numrange import (
    DEFAULT_ANGLES,
    RangeApprox,
    Verdict,
    _golden_max,
    compute_range,
    contains_point,
    outer_vertices,
    support_batch,
)

DEFAULT_GRID = 128
DEFAULT_TOL = 1e-6
REFINE_LEVELS = 3
MAX_CELLS = 400_000
_ALT_ITERS = 60


@dataclass
class ProductVerdict:
    verdict: Verdict
    distance_estimate: float
    witness_pair: Optional[Tuple[complex, complex]] = None
    certificate_margin: float = 0.0
    method: str = ""

    def to_dict(self) -> dict:
        wp = None
        if self.witness_pair is not None:
            wp = [[self.witness_pair[0].real, self.witness_pair[0].imag],
                  [self.witness_pair[1].real, self.witness_pair[1].imag]]
        return {
            "verdict": self.verdict.value,
            "distance_estimate": self.distance_estimate,
            "witness_pair": wp,
            "certificate_margin": self.certificate_margin,
            "method": self.method,
        }


@dataclass
class ContainmentReport:
    eigen_verdicts: List[Tuple[complex, ProductVerdict]]
    overall: str
    max_violation_distance: float

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "max_violation_distance": self.max_violation_distance,
            "eigen_verdicts": [
                {"lambda": [lam.real, lam.imag], **v.to_dict()} for lam, v in self.eigen_verdicts
            ],
        }


def _samples(P: np.ndarray, k: int = 48) -> np.ndarray:
    """A few points of a convex polygon: vertices, half-way toward the centroid, the centroid."""
    P = np.asarray(P, dtype=complex)
    if P.size > k:
        P = P[np.linspace(0, P.size - 1, k).astype(int)]
    c = P.mean()
    return np.concatenate([P, 0.5 * (P + c), [c]])


def _coarse_hull(R: RangeApprox, k: int = 96) -> np.ndarray:
    """Hull of the half-plane intersection over a subset of the angles (a superset of W)."""
    n = R.angles.size
    idx = np.unique(np.linspace(0, n, min(k, n), endpoint=False).astype(int))
    return geo.convex_hull(outer_vertices(R.angles[idx], R.support_values[idx]))


class ProductSet:
    """Cached polygonal data for W(A) and W(B) used by repeated membership queries."""

    def __init__(self, A, B, m: int = DEFAULT_ANGLES, RA: Optional[RangeApprox] = None):
        self.A = as_cmatrix(A)
        self.B = as_cmatrix(B)
        self.m = m
        self.RA = RA if RA is not None else compute_range(self.A, m)
        self.RB = compute_range(self.B, m)
        self.hullA = geo.convex_hull(self.RA.outer_polygon)
        self.hullB = geo.convex_hull(self.RB.outer_polygon)
        self.LB = float(np.max(np.abs(self.hullB)))
        # coarser supersets of both ranges, only used to steer the direction search
        pa, pb = _coarse_hull(self.RA), _coarse_hull(self.RB)
        self._prods = (pa[:, None] * pb[None, :]).ravel()
        self.sampA = _samples(self.RA.inner_polygon)
        self.sampB = _samples(self.RB.inner_polygon)
        # unit normals of the outer(B) half-planes, reused by the cell bound
        self._eB = np.exp(-1j * self.RB.angles)

    # ---------------------------------------------------------- In search

    def _alternate(self, lam: complex, z: complex, b: complex, tol_in: float):
        Pa, Pb = self.RA.inner_polygon, self.RB.inner_polygon
        d = abs(z * b - lam)
        for _ in range(_ALT_ITERS):
            if d <= tol_in:
                break
            if abs(z) > 1e-300:
                b, _ = geo.nearest_point(lam / z, Pb)
            if abs(b) > 1e-300:
                z, _ = geo.nearest_point(lam / b, Pa)
            nd = abs(z * b - lam)
            if nd >= d * (1 - 1e-9):
                d = min(d, nd)
                break
            d = nd
        return z, b, abs(z * b - lam)

    def _best_partner(self, lam: complex, Z: np.ndarray, P: np.ndarray):
        """For each z, ``dist(lam, z P)`` and the minimizer in P (points very near 0 use |lam|)."""
        Z = np.asarray(Z, dtype=complex)
        small = np.abs(Z) <= 1e-300
        Zs = np.where(small, 1.0, Z)
        d = geo.distance_to_polygon(lam / Zs, P) * np.abs(Zs)
        d = np.where(small, abs(lam), d)
        return d

    def search_in(self, lam: complex, tol_in: float, extra_z=()) -> Tuple[complex, complex, float]:
        """Best product pair found by sampling followed by alternating projections."""
        starts = []
        za = np.concatenate([self.sampA, np.asarray(extra_z, dtype=complex)])
        dz = self._best_partner(lam, za, self.RB.inner_polygon)
        for j in np.argsort(dz, kind="stable")[:3]:
            z = complex(za[j])
            b = geo.nearest_point(lam / z, self.RB.inner_polygon)[0] if abs(z) > 1e-300 else complex(self.sampB[0])
            starts.append((z, b))
        db = self._best_partner(lam, self.sampB, self.RA.inner_polygon)
        for j in np.argsort(db, kind="stable")[:2]:
            b = complex(self.sampB[j])
            z = geo.nearest_point(lam / b, self.RA.inner_polygon)[0] if abs(b) > 1e-300 else complex(self.sampA[0])
            starts.append((z, b))
        best = (starts[0][0], starts[0][1], math.inf)
        for z, b in starts:
            z, b, d = self._alternate(lam, z, b, tol_in)
            if d < best[2]:
                best = (z, b, d)
            if d <= tol_in:
                break
        return best

    # ------------------------------------------------------ Out certificates

    def cell_lower_bound(self, lam: complex, Z: np.ndarray) -> np.ndarray:
        """Lower bound on ``dist(lam, z W(B))`` from the outer(B) half-planes."""
        Z = np.asarray(Z, dtype=complex)
        out = np.empty(Z.size)
        h = self.RB.support_values
        step = max(1, (1 << 21) // h.size)
        for s in range(0, Z.size, step):
            z = Z[s:s + step]
            r = np.abs(z)
            u = np.where(r > 0, np.conj(z) / np.where(r > 0, r, 1.0), 1.0)
            v = (self._eB[None, :] * (lam * u)[:, None]).real - r[:, None] * h[None, :]
            g = np.max(v, axis=1)
            out[s:s + step] = np.where(r > 0, g, abs(lam))
        return out

    def _covering_cells(self, spacing: float) -> np.ndarray:
        P = self.hullA
        lo = complex(P.real.min(), P.imag.min())
        hi = complex(P.real.max(), P.imag.max())
        nx = int(math.ceil((hi.real - lo.real) / spacing)) + 1
        ny = int(math.ceil((hi.imag - lo.imag) / spacing)) + 1
        xs = lo.real + spacing * np.arange(nx)
        ys = lo.imag + spacing * np.arange(ny)
        C = (xs[None, :] + 1j * ys[:, None]).ravel()
        return C[self._touches(C, spacing / math.sqrt(2))]

    def _touches(self, C: np.ndarray, rho: float) -> np.ndarray:
        return geo.distance_to_polygon(C, self.hullA) <= rho * (1 + 1e-12) + 1e-300

    def grid_certificate(self, lam: complex, tol_in: float, grid: int):
        """Lipschitz cell cover of outer(W(A)).

        Returns ``(certified, margin, best_cells)`` where ``margin`` is a lower bound
        on the distance (valid only when certified) and ``best_cells`` are the cell
        centres with the smallest lower bound (used as In-search seeds).
        """
        diam = geo.diameter(self.hullA)
        scale = max(self.RA.scale, 1e-300)
        spacing = max(diam, 1e-9 * scale) / grid
        C = self._covering_cells(spacing)
        if C.size == 0:
            C = self.hullA[:1].copy()
        margin = math.inf
        best_cells = np.empty(0, dtype=complex)
        for level in range(REFINE_LEVELS + 1):
            rho = spacing / math.sqrt(2)
            g = self.cell_lower_bound(lam, C)
            bound = g - self.LB * rho
            if level == 0:
                best_cells = C[np.argsort(g, kind="stable")[:4]]
            ok = bound > tol_in
            if ok.any():
                margin = min(margin, float(bound[ok].min()))
            bad = C[~ok]
            if bad.size == 0:
                return True, margin, best_cells
            if level == REFINE_LEVELS or 4 * bad.size > MAX_CELLS:
                return False, 0.0, best_cells
            spacing /= 2
            q = spacing / 2
            C = np.concatenate([bad + q * (1 + 1j), bad + q * (1 - 1j), bad + q * (-1 + 1j), bad - q * (1 + 1j)])
            C = C[self._touches(C, spacing / math.sqrt(2))]
            if C.size == 0:
                return True, margin, best_cells
        return False, 0.0, best_cells

    def _hull_bound(self, psi: np.ndarray) -> np.ndarray:
        """Cheap upper bound of the product-set support at angles ``psi`` (vertex pairs)."""
        psi = np.atleast_1d(psi)
        return np.max((np.exp(-1j * psi)[:, None] * self._prods[None, :]).real, axis=1)

    def exact_bound(self, psi: float) -> float:
        """Upper bound of ``max Re(e^{-i psi} z b)`` using outer(B) vertices and exact h_A."""
        best = math.inf
        for M, hull in ((self.A, self.hullB), (self.B, self.hullA)):
            u = hull[np.abs(hull) > 0]
            if u.size == 0:
                return 0.0
            h, _, _ = support_batch(M, psi - np.angle(u))
            best = min(best, float(np.max(np.abs(u) * h)))
        return best

    def halfplane_certificate(self, lam: complex, hint: Optional[complex]):
        """Best separating direction; returns ``(margin, psi)`` (margin may be <= 0).

        The direction is steered by the cheap vertex-pair bound, then refined
        against the exact support values.
        """
        cands = [np.angle(lam)] if lam != 0 else []
        if hint is not None and hint != lam:
            cands.append(np.angle(lam - hint))
        scan = 2 * np.pi * np.arange(64) / 64
        psis = np.concatenate([np.asarray(cands, dtype=float), scan])
        vals = (np.exp(-1j * psis) * lam).real - self._hull_bound(psis)
        k = int(np.argmax(vals))
        width = 2 * np.pi / 64
        f = lambda t: float((np.exp(-1j * t) * lam).real - self._hull_bound(t)[0])
        psi_c, _ = _golden_max(f, psis[k] - width, psis[k] + width, tol=1e-9)
        exact = lambda t: float((np.exp(-1j * t) * lam).real) - self.exact_bound(t)
        trial = [psi_c, float(psis[k])] + cands
        scores = [exact(t) for t in trial]
        j = int(np.argmax(scores))
        psi, best = trial[j], scores[j]
        if best > -0.1 * max(abs(lam), 1e-300):
            t, v = _golden_max(exact, psi - width / 2, psi + width / 2, tol=1e-7)
            if v > best:
                psi, best = t, v
        return best, float(psi)

    # ------------------------------------------------------------- public

    def membership(self, lam: complex, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID) -> ProductVerdict:
        if not tol > 0:
            raise ValueError("tol must be positive")
        if grid < 32:
            raise ValueError("grid must be at least 32")
        lam = complex(lam)
        tol_in = tol * (1 + abs(lam))
        if abs(lam) <= tol_in:
            v = self._near_zero(lam, tol_in)
            if v is not None:
                return v
        z, b, d = self.search_in(lam, tol_in)
        if d <= tol_in:
            return ProductVerdict(Verdict.IN, d, (z, b), 0.0, "search")
        hp_margin, _ = self.halfplane_certificate(lam, z * b)
        if hp_margin > tol_in:
            return ProductVerdict(Verdict.OUT, max(d, hp_margin), None, hp_margin, "halfplane")
        certified, margin, cells = self.grid_certificate(lam, tol_in, grid)
        if certified:
            return ProductVerdict(Verdict.OUT, max(d, margin), None, margin, "grid")
        z2, b2, d2 = self.search_in(lam, tol_in, extra_z=cells)
        if d2 < d:
            z, b, d = z2, b2, d2
        if d <= tol_in:
            return ProductVerdict(Verdict.IN, d, (z, b), 0.0, "search")
        return ProductVerdict(Verdict.BORDERLINE, d, (z, b), 0.0, "none")

    def _near_zero(self, lam: complex, tol_in: float) -> Optional[ProductVerdict]:
        for R, other in ((self.RA, self.RB), (self.RB, self.RA)):
            if contains_point(R, 0.0, tol_in) == Verdict.IN:
                q = complex(other.inner_polygon[0])
                pair = (0j, q) if R is self.RA else (q, 0j)
                return ProductVerdict(Verdict.IN, abs(lam), pair, 0.0, "zero")

        def gap(R):
            return float(np.max(-R.support_values))  # half-plane separation of 0

        margin = max(gap(self.RA), 0.0) * max(gap(self.RB), 0.0) - abs(lam)
        if margin > tol_in:
            return ProductVerdict(Verdict.OUT, margin + abs(lam), None, margin, "zero")
        return None


def product_membership(A, B, lam: complex, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID,
                       m: int = DEFAULT_ANGLES) -> ProductVerdict:
    return ProductSet(A, B, m).membership(lam, tol, grid)


def containment_check(A, B, tol: float = DEFAULT_TOL, grid: int = DEFAULT_GRID,
                      m: int = DEFAULT_ANGLES, ps: Optional[ProductSet] = None) -> ContainmentReport:
    A = as_cmatrix(A)
    B = as_cmatrix(B)
    if A.shape != B.shape:
        raise ValueError("A and B must have the same dimension")
    ps = ps or ProductSet(A, B, m)
    lams = sort_spectrum(eigvals(A @ B))
    verdicts = [(complex(l), ps.membership(l, tol, grid)) for l in lams]
    kinds = [v.verdict for _, v in verdicts]
    if Verdict.OUT in kinds:
        overall = "Violated"
    elif all(k == Verdict.IN for k in kinds):
        overall = "Contained"
    else:
        overall = "Inconclusive"
    worst = max([v.distance_estimate for _, v in verdicts if v.verdict != Verdict.IN], default=0.0)
    return ContainmentReport(verdicts, overall, float(worst))


def _pool(R: RangeApprox, rng: np.random.Generator, k: int) -> np.ndarray:
    """Points of W: inner-polygon vertices plus random convex combinations of them."""
    V = R.inner_polygon
    w = rng.dirichlet(np.full(V.size, 0.3), size=k)
    return np.concatenate([V, w @ V])


def product_convexity_probe(A, B, samples: int = 100, seed: int = 0, tol: float = DEFAULT_TOL,
                            grid: int = DEFAULT_GRID, ps: Optional[ProductSet] = None) -> Tuple[bool, float]:
    """Midpoint test of convexity for W(A)W(B).

    Returns ``(convex, worst_midpoint_gap)``; ``convex`` is False only when some
    midpoint is certified Out, in which case the gap is the largest certified margin.
    Otherwise the gap is the largest distance estimate among non-In midpoints.
    """
    if samples < 100:
        raise ValueError("samples must be at least 100")
    ps = ps or ProductSet(A, B)
    rng = np.random.default_rng(seed)
    za, zb = _pool(ps.RA, rng, samples), _pool(ps.RB, rng, samples)
    i = rng.integers(0, za.size, size=(samples, 2))
    j = rng.integers(0, zb.size, size=(samples, 2))
    mids = 0.5 * (za[i[:, 0]] * zb[j[:, 0]] + za[i[:, 1]] * zb[j[:, 1]])
    worst_out, worst_other = 0.0, 0.0
    for mpt in mids:
        v = ps.membership(mpt, tol, grid)
        if v.verdict == Verdict.OUT:
            worst_out = max(worst_out, v.certificate_margin)
        elif v.verdict == Verdict.BORDERLINE:
            worst_other = max(worst_other, v.distance_estimate)
    if worst_out > 0:
        return False, worst_out
    return True, worst_other


def sample_product_set(A, B, density: int = 32, m: int = DEFAULT_ANGLES) -> np.ndarray:
    """Deterministic cloud of products z*b with z, b taken from the inner polygons."""
    if density < 16:
        raise ValueError("density must be at least 16")
    RA, RB = compute_range(A, m), compute_range(B, m)

    def pts(R):
        V = R.inner_polygon
        c = V.mean()
        ring = V[np.linspace(0, V.size - 1, min(V.size, density)).astype(int)]
        scales = np.linspace(0.0, 1.0, max(2, density // 8))
        return np.unique(np.round((c + scales[:, None] * (ring - c)[None, :]).ravel(), 12))

    cloud = (pts(RA)[:, None] * pts(RB)[None, :]).ravel()
    return np.unique(np.round(cloud, 12))


def quotient_membership(A, B, lam: complex, tol: float = DEFAULT_TOL, m: int = DEFAULT_ANGLES,
                        tries: int = 3):
    """Look for ``a in W(A)``, ``b in W(B)`` with ``|lam - b/a| <= tol`` (requires 0 not in W(A)).

    ``b = lam a`` means ``lam*W(A)`` and ``W(B)`` intersect, so alternating
    projections between the two convex polygons find the pair.  Returns
    ``(found, a, b, residual)``.
    """
    lam = complex(lam)
    best = (False, 0j, 0j, math.inf)
    for t in range(tries):
        mm = m * 4 ** t
        Pa = compute_range(A, mm).inner_polygon
        Pb = compute_range(B, mm).inner_polygon
        a = complex(Pa.mean())
        b = geo.nearest_point(lam * a, Pb)[0]
        for _ in range(500):
            if lam != 0:
                a = geo.nearest_point(b / lam, Pa)[0]
            b_new, d = geo.nearest_point(lam * a, Pb)
            if abs(b_new - b) <= 1e-15 * (1 + abs(b)):
                b = b_new
                break
            b = b_new
        res = abs(lam - b / a) if a != 0 else math.inf
        if res < best[3]:
            best = (res <= tol, a, b, res)
        if res <= tol:
            break
    return best
