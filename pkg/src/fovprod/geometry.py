"""Planar convex geometry on complex numbers.

Polygons are 1-D complex arrays of vertices in counter-clockwise order.  One-
and two-vertex "polygons" (a point, a segment) are accepted everywhere since
numerical ranges of scalar and Hermitian-multiple matrices degenerate to them.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

_CHUNK = 1 << 20


def cross(a, b):
    """z-component of the planar cross product of complex vectors ``a`` and ``b``."""
    return a.real * b.imag - a.imag * b.real


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise hull vertices (Andrew's monotone chain); collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=complex).ravel())
    if pts.size <= 2:
        return pts
    pts = pts[np.lexsort((pts.imag, pts.real))]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1], dtype=complex)
    if hull.size == 0:
        return pts[:1]
    return hull


def polygon_area(P) -> float:
    P = np.asarray(P, dtype=complex)
    if P.size < 3:
        return 0.0
    return 0.5 * float(np.sum(cross(P, np.roll(P, -1))))


def diameter(P) -> float:
    P = np.asarray(P, dtype=complex)
    if P.size < 2:
        return 0.0
    return float(np.max(np.abs(P[:, None] - P[None, :])))


def width(P) -> float:
    """Minimal strip width of a convex polygon (0 for points and segments)."""
    P = np.asarray(P, dtype=complex)
    if P.size < 3:
        return 0.0
    E = np.roll(P, -1) - P
    L = np.abs(E)
    keep = L > 0
    if not keep.any():
        return 0.0
    E, A = E[keep], P[keep]
    depth = cross(E[:, None], P[None, :] - A[:, None]) / np.abs(E)[:, None]
    return float(np.min(np.max(depth, axis=1)))


def is_convex(P, tol: float = 1e-10) -> bool:
    P = np.asarray(P, dtype=complex)
    if P.size < 3:
        return True
    E = np.roll(P, -1) - P
    turns = cross(E, np.roll(E, -1))
    scale = max(float(np.max(np.abs(E))) ** 2, np.finfo(float).tiny)
    return bool(np.all(turns >= -tol * scale))


def _segment_dist(Z: np.ndarray, A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Distances from points ``Z`` (N,) to segments ``A + t D`` (k,), shape (N, k)."""
    dd = np.abs(D) ** 2
    dd_safe = np.where(dd > 0, dd, 1.0)
    W = Z[:, None] - A[None, :]
    t = np.clip((W.real * D.real + W.imag * D.imag) / dd_safe, 0.0, 1.0)
    t = np.where(dd > 0, t, 0.0)
    return np.abs(W - t * D[None, :])


def distance_to_polygon(Z, P) -> np.ndarray:
    """Euclidean distance from each point of ``Z`` to the convex polygon ``P`` (0 inside)."""
    Z = np.atleast_1d(np.asarray(Z, dtype=complex))
    P = np.asarray(P, dtype=complex)
    if P.size == 1:
        return np.abs(Z - P[0])
    A = P
    D = np.roll(P, -1) - P
    if P.size == 2:
        A, D = P[:1], P[1:] - P[:1]
    out = np.empty(Z.size)
    step = max(1, _CHUNK // max(A.size, 1))
    area = P.size >= 3 and polygon_area(P) > 0
    for s in range(0, Z.size, step):
        z = Z[s:s + step]
        d = np.min(_segment_dist(z, A, D), axis=1)
        if area:
            inside = np.all(cross(D[None, :], z[:, None] - A[None, :]) >= 0, axis=1)
            d = np.where(inside, 0.0, d)
        out[s:s + step] = d
    return out


def inner_depth(Z, P) -> np.ndarray:
    """Signed depth: min distance to the edge lines, positive inside (``-inf`` for degenerate P)."""
    Z = np.atleast_1d(np.asarray(Z, dtype=complex))
    P = np.asarray(P, dtype=complex)
    if P.size < 3 or polygon_area(P) <= 0:
        return np.full(Z.size, -np.inf)
    D = np.roll(P, -1) - P
    keep = np.abs(D) > 0
    A, D = P[keep], D[keep]
    depth = cross(D[None, :], Z[:, None] - A[None, :]) / np.abs(D)[None, :]
    return np.min(depth, axis=1)


def nearest_point(z: complex, P) -> Tuple[complex, float]:
    """Closest point of convex polygon ``P`` to ``z`` and the distance."""
    P = np.asarray(P, dtype=complex)
    if P.size == 1:
        return complex(P[0]), float(abs(z - P[0]))
    if distance_to_polygon(z, P)[0] == 0.0:
        return complex(z), 0.0
    A = P if P.size >= 3 else P[:1]
    D = (np.roll(P, -1) - P) if P.size >= 3 else (P[1:] - P[:1])
    dd = np.abs(D) ** 2
    dd_safe = np.where(dd > 0, dd, 1.0)
    W = z - A
    t = np.clip((W.real * D.real + W.imag * D.imag) / dd_safe, 0.0, 1.0)
    t = np.where(dd > 0, t, 0.0)
    Q = A + t * D
    j = int(np.argmin(np.abs(z - Q)))
    return complex(Q[j]), float(abs(z - Q[j]))


def hausdorff(P, Q) -> float:
    """Hausdorff distance between two convex polygons (attained at vertices)."""
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    return float(max(np.max(distance_to_polygon(P, Q)), np.max(distance_to_polygon(Q, P))))


def support(P, theta) -> np.ndarray:
    """Support function ``max_{z in P} Re(e^{-i theta} z)`` for each angle."""
    P = np.asarray(P, dtype=complex)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return np.max((np.exp(-1j * theta)[:, None] * P[None, :]).real, axis=1)
