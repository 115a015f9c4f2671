"""Discretized numerical ranges.

The numerical range is handled entirely through its support function
``h(theta) = lambda_max((e^{-i theta} A + e^{i theta} A*) / 2)``.  Sampling
``h`` on a uniform angle grid gives boundary points (inner polygon) and a
half-plane intersection (outer polygon) that sandwich the true range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import geometry as geo
from .matcore import (
    as_cmatrix,
    block_components,
    jacobi_eigh_batch,
    operator_norm,
    spectral_radius,
)

DEFAULT_ANGLES = 720
EPS_CORNER = 0.02
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_LOWRANK_MIN_BLOCK = 16


class Verdict(str, enum.Enum):
    IN = "In"
    OUT = "Out"
    BORDERLINE = "Borderline"


def grid_angles(m: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(m) / m


def _cplx_pairs(z) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex).ravel()]


def _from_pairs(pairs) -> np.ndarray:
    return np.array([complex(a, b) for a, b in pairs], dtype=complex)


# ------------------------------------------------------------ support engine


def _block_support(M: np.ndarray, thetas: np.ndarray, want_vectors: bool):
    """Top eigenpair of every Hermitian part of the dense block ``M``."""
    k = M.shape[0]
    if k > _LOWRANK_MIN_BLOCK:
        U, s, _ = np.linalg.svd(np.hstack([M, np.conj(M).T]))
        r = int(np.sum(s > 1e-13 * s[0])) if s.size and s[0] > 0 else 0
        if r <= k // 2:
            # W(M) = conv(W(Q*MQ) u {0}) when M = P M P with P = QQ*
            Q = U[:, :r]
            h = np.zeros(thetas.size)
            pts = np.zeros(thetas.size, dtype=complex)
            vecs = np.broadcast_to(U[:, r], (thetas.size, k)).copy() if want_vectors else None
            if r:
                hc, pc, uc = _block_support(np.conj(Q).T @ M @ Q, thetas, want_vectors)
                pos = hc >= 0
                h = np.where(pos, hc, 0.0)
                pts = np.where(pos, pc, 0.0)
                if want_vectors:
                    vecs[pos] = uc[pos] @ Q.T
            return h, pts, vecs
    rot = np.exp(-1j * thetas)[:, None, None]
    S = rot * M[None]
    Hs = (S + np.conj(np.swapaxes(S, 1, 2))) / 2
    vals, V = jacobi_eigh_batch(Hs)
    x = V[:, :, -1]
    h = vals[:, -1]
    pts = np.einsum("mi,ij,mj->m", np.conj(x), M, x)
    return h, pts, (x if want_vectors else None)


def support_batch(A, thetas, want_vectors: bool = False):
    """Support values, boundary points and (optionally) maximizing unit vectors.

    Returns ``(h, points, X)``; ``X`` has shape ``(len(thetas), n)`` or is None.
    """
    A = as_cmatrix(A)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    m, n = thetas.size, A.shape[0]
    comps = block_components(A)
    singles = np.array([c[0] for c in comps if c.size == 1], dtype=int)
    h = np.full(m, -np.inf)
    pts = np.zeros(m, dtype=complex)
    X = np.zeros((m, n), dtype=complex) if want_vectors else None
    rows = np.arange(m)
    if singles.size:
        d = A[singles, singles]
        vals = (np.exp(-1j * thetas)[:, None] * d[None, :]).real
        j = np.argmax(vals, axis=1)
        h = vals[rows, j]
        pts = d[j]
        if want_vectors:
            X[rows, singles[j]] = 1.0
    for idx in comps:
        if idx.size == 1:
            continue
        hb, pb, xb = _block_support(A[np.ix_(idx, idx)], thetas, want_vectors)
        better = hb > h
        h = np.where(better, hb, h)
        pts = np.where(better, pb, pts)
        if want_vectors and better.any():
            X[better] = 0.0
            X[np.ix_(np.flatnonzero(better), idx)] = xb[better]
    return h, pts, X


def support_value(A, theta: float) -> Tuple[float, np.ndarray]:
    """``(h(theta), x)`` with ``x`` a unit maximizer of ``Re(e^{-i theta} <Ax, x>)``."""
    h, _, X = support_batch(A, [theta], want_vectors=True)
    return float(h[0]), X[0]


def _golden_max(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 80):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


# --------------------------------------------------------------- RangeApprox


@dataclass
class RangeApprox:
    m: int
    angles: np.ndarray
    support_values: np.ndarray
    boundary_points: np.ndarray
    inner_polygon: np.ndarray
    outer_polygon: np.ndarray
    hausdorff_gap: float
    scale: float

    @property
    def diameter(self) -> float:
        return geo.diameter(self.outer_polygon)

    @property
    def radius_bound(self) -> float:
        """Upper bound for ``max |z|`` over the range (max modulus of outer vertices)."""
        return float(np.max(np.abs(self.outer_polygon)))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "angles": [float(t) for t in self.angles],
            "support_values": [float(v) for v in self.support_values],
            "boundary_points": _cplx_pairs(self.boundary_points),
            "inner_polygon": _cplx_pairs(self.inner_polygon),
            "outer_polygon": _cplx_pairs(self.outer_polygon),
            "hausdorff_gap": self.hausdorff_gap,
            "scale": self.scale,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RangeApprox":
        return cls(
            m=int(d["m"]),
            angles=np.array(d["angles"], dtype=float),
            support_values=np.array(d["support_values"], dtype=float),
            boundary_points=_from_pairs(d["boundary_points"]),
            inner_polygon=_from_pairs(d["inner_polygon"]),
            outer_polygon=_from_pairs(d["outer_polygon"]),
            hausdorff_gap=float(d["hausdorff_gap"]),
            scale=float(d["scale"]),
        )


def outer_vertices(angles: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vertices of the intersection of half-planes ``Re(e^{-i t_k} z) <= h_k`` (consecutive lines)."""
    t0, t1 = angles, np.roll(angles, -1)
    h0, h1 = h, np.roll(h, -1)
    det = np.sin(t1 - t0)
    x = (h0 * np.sin(t1) - h1 * np.sin(t0)) / det
    y = (np.cos(t0) * h1 - np.cos(t1) * h0) / det
    return x + 1j * y


def _chord_angles(angles, h, pts, scale, step):
    """Normal angles of boundary chords whose outer vertex sticks out too far.

    A flat edge whose normal falls between two grid angles leaves an outer
    vertex about ``L * step / 4`` off the edge; probing the chord normal puts
    a support line on the edge itself.
    """
    v = outer_vertices(angles, h)
    nxt = np.roll(pts, -1)
    c = nxt - pts
    tiny = 1e-9 * scale
    phi = np.angle(c) - np.pi / 2
    d = (np.exp(-1j * phi) * (v - pts)).real
    # next to a vertex (repeated contact point) any overshoot counts
    at_vertex = (np.abs(pts - np.roll(pts, 1)) <= tiny) | (np.abs(np.roll(nxt, -1) - nxt) <= tiny)
    thr = np.where(at_vertex, 1e-12 * scale, scale * step * step / 4)
    t0 = angles
    gap = (np.roll(angles, -1) - angles) % (2 * np.pi)
    off = (phi - t0) % (2 * np.pi)
    pick = (np.abs(c) > tiny) & (d > thr) & (off > 1e-12) & (off < gap - 1e-12)
    return (t0[pick] + off[pick]) % (2 * np.pi)


def compute_range(A, m: int = DEFAULT_ANGLES, refine: int = 4) -> RangeApprox:
    """Sandwich ``W(A)`` between inner and outer polygons.

    ``m`` uniform angles, plus up to ``refine`` rounds of extra angles at
    chord normals so that polygonal pieces of the boundary are resolved exactly.
    """
    if m < 8:
        raise ValueError("m must be at least 8")
    A = as_cmatrix(A)
    angles = grid_angles(m)
    h, pts, _ = support_batch(A, angles)
    scale = float(max(np.max(np.abs(h)), np.max(np.abs(pts)), np.finfo(float).tiny))
    for _ in range(refine):
        extra = _chord_angles(angles, h, pts, scale, 2 * np.pi / m)
        if extra.size == 0:
            break
        he, pe, _ = support_batch(A, extra)
        angles = np.concatenate([angles, extra])
        h = np.concatenate([h, he])
        pts = np.concatenate([pts, pe])
        order = np.argsort(angles, kind="stable")
        angles, h, pts = angles[order], h[order], pts[order]
    outer = outer_vertices(angles, h)
    inner = geo.convex_hull(pts)
    gap = float(np.max(geo.distance_to_polygon(outer, inner)))
    return RangeApprox(m, angles, h, pts, inner, outer, gap, scale)


# --------------------------------------------------------------------- radii


@dataclass
class RadiiReport:
    w: float
    r: float
    norm: float
    radialoid: bool
    tol: float
    w_angle: float = 0.0

    def to_dict(self) -> dict:
        return {"w": self.w, "r": self.r, "norm": self.norm,
                "radialoid": self.radialoid, "tol": self.tol, "w_angle": self.w_angle}


def numerical_radius(A, m: int = DEFAULT_ANGLES) -> Tuple[float, float]:
    """``(w(A), theta*)``: grid maximum of ``h`` refined by golden-section search."""
    A = as_cmatrix(A)
    angles = grid_angles(m)
    h, _, _ = support_batch(A, angles)
    k = int(np.argmax(h))
    step = 2 * np.pi / m
    f = lambda t: float(support_batch(A, [t])[0][0])
    t, val = _golden_max(f, angles[k] - step, angles[k] + step)
    if val < h[k]:
        t, val = angles[k], float(h[k])
    return float(val), float(t % (2 * np.pi))


def radii(A, m: int = DEFAULT_ANGLES, tol: float = 1e-8) -> RadiiReport:
    if m < 64:
        raise ValueError("m must be at least 64")
    A = as_cmatrix(A)
    w, t = numerical_radius(A, m)
    r = spectral_radius(A)
    nrm = operator_norm(A)
    return RadiiReport(w=w, r=r, norm=nrm, radialoid=abs(r - nrm) <= tol, tol=tol, w_angle=t)


# ---------------------------------------------------------------- membership


def contains_point(R: RangeApprox, p: complex, tol: float) -> Verdict:
    """Three-valued membership of ``p`` in the range approximated by ``R``.

    Out when an outer half-plane is violated by more than ``tol``; In when ``p``
    sits at depth ``>= tol`` inside the inner polygon, or, for ranges thinner
    than ``tol`` (points and segments), within ``tol`` of the inner polygon.
    """
    p = complex(p)
    viol = np.max((np.exp(-1j * R.angles) * p).real - R.support_values)
    if viol > tol:
        return Verdict.OUT
    if geo.width(R.inner_polygon) <= tol:
        if geo.distance_to_polygon(p, R.inner_polygon)[0] <= tol:
            return Verdict.IN
        return Verdict.BORDERLINE
    if geo.inner_depth(p, R.inner_polygon)[0] >= tol:
        return Verdict.IN
    return Verdict.BORDERLINE


# ------------------------------------------------------------------- corners


class CornerInfo(NamedTuple):
    count: int          # 0 interior, 1 smooth boundary point, 2 means "two or more"
    width: float        # angular measure of the (eps_lin-thickened) normal cone
    lo: float = 0.0     # cone edges, lo <= hi (radians, unwrapped)
    hi: float = 0.0


def corner_support_lines(A, mu: complex, m: int = DEFAULT_ANGLES,
                         eps_corner: float = EPS_CORNER,
                         eps_lin: Optional[float] = None) -> CornerInfo:
    """Count support lines of ``W(A)`` through ``mu`` from the width of its normal cone."""
    A = as_cmatrix(A)
    mu = complex(mu)
    scale = max(operator_norm(A), np.finfo(float).tiny)
    if eps_lin is None:
        eps_lin = 1e-7 * scale
    angles = grid_angles(m)
    h, _, _ = support_batch(A, angles)
    g = (np.exp(-1j * angles) * mu).real - h
    if g.max() > max(1e-6 * scale, 10 * eps_lin):
        raise ValueError("mu lies outside W(A)")

    def gfun(t):
        return float((np.exp(-1j * t) * mu).real - support_batch(A, [t])[0][0])

    S = g >= -eps_lin
    if S.all():
        return CornerInfo(2, 2 * np.pi, 0.0, 2 * np.pi)
    k = int(np.argmax(g))
    step = 2 * np.pi / m
    if not S.any():
        t, val = _golden_max(gfun, angles[k] - step, angles[k] + step)
        if val < -eps_lin:
            return CornerInfo(0, 0.0, t, t)
        return CornerInfo(1, 0.0, t, t)
    # circular run of grid indices inside the cone, grown from argmax
    j_lo = k
    while S[(j_lo - 1) % m]:
        j_lo -= 1
    j_hi = k
    while S[(j_hi + 1) % m]:
        j_hi += 1

    def edge(inside, outside):
        for _ in range(60):
            mid = 0.5 * (inside + outside)
            if gfun(mid) >= -eps_lin:
                inside = mid
            else:
                outside = mid
        return inside

    lo = edge(j_lo * step, (j_lo - 1) * step)
    hi = edge(j_hi * step, (j_hi + 1) * step)
    wdt = hi - lo
    return CornerInfo(2 if wdt >= eps_corner else 1, float(wdt), float(lo), float(hi))
