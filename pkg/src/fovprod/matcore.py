"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` complex arrays; :func:`as_cmatrix` is the
validation gate.  The Hermitian solver is a batched cyclic Jacobi method and
the general solver is Hessenberg reduction followed by Wilkinson-shifted QR.
Both split the input along the connected components of its sparsity graph
first, so block-diagonal and diagonal inputs of a few hundred rows stay cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    ConvergenceFailure,
    InvalidMatrix,
    NonHermitianInput,
    NonUnitary,
    ZeroVector,
)

EPS = np.finfo(float).eps

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_cmatrix(A, allow_empty: bool = False) -> np.ndarray:
    """Return ``A`` as a finite square complex128 array or raise InvalidMatrix."""
    try:
        M = np.array(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"not a numeric matrix: {exc}") from exc
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidMatrix(f"matrix must be square, got shape {M.shape}")
    if M.shape[0] == 0 and not allow_empty:
        raise InvalidMatrix("matrix must have positive dimension")
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix("matrix has non-finite entries")
    return M


def allclose(A, B, tol: float) -> bool:
    """Entrywise equality within ``tol``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return A.shape == B.shape and bool(np.all(np.abs(A - B) <= tol))


def adjoint(A: np.ndarray) -> np.ndarray:
    return np.conj(A).T


def frobenius(A) -> float:
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


def hermitian_part(A, theta: float = 0.0) -> np.ndarray:
    """``(e^{-i theta} A + e^{i theta} A*) / 2``, Hermitian by construction."""
    A = as_cmatrix(A, allow_empty=True)
    M = np.exp(-1j * theta) * A
    H = (M + np.conj(M).T) / 2
    H[np.diag_indices_from(H)] = H.diagonal().real
    return H


def block_components(A: np.ndarray) -> List[np.ndarray]:
    """Index sets of the connected components of the pattern of ``|A| + |A|^T``."""
    n = A.shape[-1]
    if n <= 1:
        return [np.arange(n)]
    mask = (A != 0) | (A != 0).T
    if mask.all():
        return [np.arange(n)]
    count, labels = connected_components(csr_matrix(mask), directed=False)
    return [np.flatnonzero(labels == c) for c in range(count)]


# ---------------------------------------------------------------- Hermitian


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def jacobi_eigh_batch(H: np.ndarray, tol: float = JACOBI_TOL,
                      max_sweeps: int = JACOBI_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi applied to a stack of Hermitian matrices.

    ``H`` has shape ``(m, k, k)``.  Returns ascending eigenvalues ``(m, k)``
    and eigenvector columns ``(m, k, k)``.  A matrix is converged once its
    off-diagonal Frobenius norm drops below ``tol`` times its full Frobenius
    norm; converged members of the stack receive no further rotations.
    """
    H = np.array(H, dtype=complex, copy=True)
    m, k, _ = H.shape
    V = np.broadcast_to(np.eye(k, dtype=complex), (m, k, k)).copy()
    if k == 1 or m == 0:
        return H[:, 0, 0].real.reshape(m, k), V

    iu = np.triu_indices(k, 1)
    fro = np.sqrt(np.sum(np.abs(H) ** 2, axis=(1, 2)))

    def off(X):
        return np.sqrt(2.0 * np.sum(np.abs(X[:, iu[0], iu[1]]) ** 2, axis=1))

    active = np.flatnonzero(off(H) > tol * fro)
    sweeps = 0
    while active.size:
        if sweeps >= max_sweeps:
            raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        Ha, Va, fa = H[active], V[active], fro[active]
        skip = 1e-20 * fa
        for p in range(k - 1):
            for q in range(p + 1, k):
                g = Ha[:, p, q]
                r = np.abs(g)
                rot = r > skip
                if not rot.any():
                    continue
                rs = np.where(rot, r, 1.0)
                tau = (Ha[:, q, q].real - Ha[:, p, p].real) / (2.0 * rs)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.where(rot, np.conj(g) / rs, 1.0)
                # G = [[c, s], [-s*ph, c*ph]] acting on columns p, q
                gpp, gpq, gqp, gqq = c, s, -s * ph, c * ph
                cp, cq = Ha[:, :, p].copy(), Ha[:, :, q].copy()
                Ha[:, :, p] = cp * gpp[:, None] + cq * gqp[:, None]
                Ha[:, :, q] = cp * gpq[:, None] + cq * gqq[:, None]
                rp, rq = Ha[:, p, :].copy(), Ha[:, q, :].copy()
                Ha[:, p, :] = np.conj(gpp)[:, None] * rp + np.conj(gqp)[:, None] * rq
                Ha[:, q, :] = np.conj(gpq)[:, None] * rp + np.conj(gqq)[:, None] * rq
                Ha[rot, p, q] = 0.0
                Ha[rot, q, p] = 0.0
                Ha[:, p, p] = Ha[:, p, p].real
                Ha[:, q, q] = Ha[:, q, q].real
                vp, vq = Va[:, :, p].copy(), Va[:, :, q].copy()
                Va[:, :, p] = vp * gpp[:, None] + vq * gqp[:, None]
                Va[:, :, q] = vp * gpq[:, None] + vq * gqq[:, None]
        H[active], V[active] = Ha, Va
        active = active[off(Ha) > tol * fa]

    vals = np.real(np.diagonal(H, axis1=1, axis2=2))
    order = np.argsort(vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return vals, V


def _check_hermitian(H: np.ndarray) -> None:
    scale = frobenius(H)
    if frobenius(H - adjoint(H)) > 1e-12 * max(scale, np.finfo(float).tiny):
        raise NonHermitianInput("matrix is not Hermitian within 1e-12 relative")


def eigh(H) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns of Hermitian ``H``."""
    H = as_cmatrix(H, allow_empty=True)
    n = H.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    _check_hermitian(H)
    H = (H + adjoint(H)) / 2
    vals = np.empty(n)
    vecs = np.zeros((n, n), dtype=complex)
    col = 0
    for idx in block_components(H):
        w, X = jacobi_eigh_batch(H[np.ix_(idx, idx)][None])
        k = idx.size
        vals[col:col + k] = w[0]
        vecs[idx, col:col + k] = X[0]
        col += k
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def eig_hermitian(H) -> List[EigenPair]:
    vals, vecs = eigh(H)
    return [EigenPair(float(v), vecs[:, j]) for j, v in enumerate(vals)]


def operator_norm(A) -> float:
    """Largest singular value, as sqrt of the top eigenvalue of ``A* A``."""
    A = as_cmatrix(A, allow_empty=True)
    if A.size == 0:
        return 0.0
    vals, _ = eigh(adjoint(A) @ A)
    return float(np.sqrt(max(vals[-1], 0.0)))


def top_singular_pair(A) -> Tuple[float, np.ndarray, np.ndarray]:
    """``(sigma, x, y)`` with unit vectors and ``A x = sigma y``."""
    A = as_cmatrix(A)
    vals, vecs = eigh(adjoint(A) @ A)
    x = vecs[:, -1]
    Ax = A @ x
    sigma = float(np.linalg.norm(Ax))
    if sigma == 0.0:
        y = x.copy()
    else:
        y = Ax / sigma
    return sigma, x, y


# ------------------------------------------------------------------ general


@dataclass
class SpectrumSet:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    tol: float

    def __len__(self):
        return len(self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "tol": self.tol,
        }


def hessenberg(A) -> np.ndarray:
    """Unitarily similar upper Hessenberg form via Householder reflections."""
    H = as_cmatrix(A, allow_empty=True).copy()
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        alpha = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, np.conj(v) @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, np.conj(v))
        H[k + 2:, k] = 0.0
    return H


def _givens(a: complex, b: complex) -> np.ndarray:
    if b == 0:
        return np.eye(2, dtype=complex)
    r = math.hypot(abs(a), abs(b))
    if a == 0:
        c, s = 0.0, np.conj(b) / abs(b)
    else:
        c = abs(a) / r
        s = (a / abs(a)) * np.conj(b) / r
    return np.array([[c, s], [-np.conj(s), c]], dtype=complex)


def _wilkinson_shift(a, b, c, d) -> complex:
    half = (a - d) / 2
    disc = np.sqrt(half * half + b * c)
    mu1, mu2 = (a + d) / 2 + disc, (a + d) / 2 - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _hessenberg_qr_eigvals(H: np.ndarray, max_iter: int) -> np.ndarray:
    n = H.shape[0]
    eigs = np.empty(n, dtype=complex)
    scale = max(frobenius(H), np.finfo(float).tiny)
    hi, its, since = n - 1, 0, 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            s = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if s == 0:
                s = scale
            if abs(H[lo, lo - 1]) <= EPS * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            since = 0
            continue
        if its >= max_iter:
            raise ConvergenceFailure(f"shifted QR did not converge in {max_iter} iterations")
        its += 1
        since += 1
        if since % 10 == 0:
            mu = H[hi, hi] + 1.5 * abs(H[hi, hi - 1]) * np.exp(0.7j * since)
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        B = H[lo:hi + 1, lo:hi + 1]
        k = B.shape[0]
        B[np.diag_indices(k)] -= mu
        rots = []
        for j in range(k - 1):
            G = _givens(B[j, j], B[j + 1, j])
            B[j:j + 2, j:] = G @ B[j:j + 2, j:]
            B[j + 1, j] = 0.0
            rots.append(G)
        for j, G in enumerate(rots):
            B[:j + 2, j:j + 2] = B[:j + 2, j:j + 2] @ adjoint(G)
        B[np.diag_indices(k)] += mu
    return eigs


def sort_spectrum(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))]


def eigvals(A) -> np.ndarray:
    """Eigenvalues (with multiplicity) sorted by (real, imaginary)."""
    A = as_cmatrix(A, allow_empty=True)
    n = A.shape[0]
    out = []
    for idx in block_components(A):
        block = A[np.ix_(idx, idx)]
        if idx.size == 1:
            out.append(block[0, 0])
            continue
        H = hessenberg(block)
        out.extend(_hessenberg_qr_eigvals(H, max_iter=100 * idx.size))
    return sort_spectrum(np.array(out, dtype=complex).reshape(n))


def eig_general(A) -> SpectrumSet:
    """Spectrum with per-eigenvalue backward errors ``sigma_min(A - lam I) / ||A||``.

    Residuals are computed with LAPACK's SVD so they stay independent of the
    QR iteration they audit.
    """
    A = as_cmatrix(A)
    n = A.shape[0]
    lam = eigvals(A)
    norm = float(np.linalg.norm(A, 2)) if n else 0.0
    res = np.empty(n)
    for j, z in enumerate(lam):
        if norm == 0.0:
            res[j] = 0.0
            continue
        smin = np.linalg.svd(A - z * np.eye(n), compute_uv=False)[-1]
        res[j] = smin / norm
    return SpectrumSet(lam, res, tol=1e3 * max(n, 1) * EPS)


def spectral_radius(A) -> float:
    z = eigvals(A)
    return float(np.max(np.abs(z))) if z.size else 0.0


def match_multisets(a: Sequence[complex], b: Sequence[complex], tol: float) -> Tuple[bool, float]:
    """Greedy minimal-cost pairing of two multisets of complex numbers.

    Returns ``(ok, worst)`` where ``worst`` is the largest matched distance;
    ``ok`` requires equal cardinality and ``worst <= tol``.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        return False, math.inf
    if a.size == 0:
        return True, 0.0
    D = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(a.size):
        i, j = np.unravel_index(np.argmin(D), D.shape)
        worst = max(worst, float(D[i, j]))
        D[i, :] = np.inf
        D[:, j] = np.inf
    return worst <= tol, worst


# ------------------------------------------------------------- constructors


def direct_sum(A, B) -> np.ndarray:
    A = as_cmatrix(A, allow_empty=True)
    B = as_cmatrix(B, allow_empty=True)
    na, nb = A.shape[0], B.shape[0]
    out = np.zeros((na + nb, na + nb), dtype=complex)
    out[:na, :na] = A
    out[na:, na:] = B
    return out


def rank_one(x, y) -> np.ndarray:
    """The operator ``z -> <z, y> x``, i.e. ``x y*``, for unit vectors ``x, y``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ZeroVector("rank_one needs nonzero vectors")
    if abs(nx - 1) > 1e-12 or abs(ny - 1) > 1e-12:
        raise ValueError("rank_one expects unit vectors")
    return np.outer(x, np.conj(y))


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U, dtype=complex)
    return frobenius(adjoint(U) @ U - np.eye(U.shape[0])) <= tol


def unitary_conjugate(A, U) -> np.ndarray:
    """``U A U*``."""
    A = as_cmatrix(A)
    U = as_cmatrix(U)
    if U.shape != A.shape:
        raise ValueError("U and A must have the same shape")
    if not is_unitary(U):
        raise NonUnitary("U*U deviates from I by more than 1e-10")
    return U @ A @ adjoint(U)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def normality_residual(A) -> float:
    """``||A*A - AA*||_F / ||A||_F^2`` (0 for the zero matrix)."""
    A = as_cmatrix(A, allow_empty=True)
    f2 = frobenius(A) ** 2
    if f2 == 0:
        return 0.0
    return frobenius(adjoint(A) @ A - A @ adjoint(A)) / f2


# --------------------------------------------------------------------- JSON


def matrix_to_dict(A) -> dict:
    A = as_cmatrix(A)
    flat = A.ravel()
    return {"n": int(A.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict) or "n" not in d or "entries" not in d:
        raise InvalidMatrix("matrix JSON needs 'n' and 'entries'")
    n = d["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidMatrix("'n' must be a positive integer")
    entries = d["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise InvalidMatrix(f"'entries' must hold n*n = {n * n} pairs")
    flat = np.empty(n * n, dtype=complex)
    for k, pair in enumerate(entries):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise InvalidMatrix(f"entry {k} is not a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidMatrix(f"entry {k} is not finite")
        flat[k] = complex(re, im)
    return flat.reshape(n, n)


def dumps_matrix(A) -> str:
    return json.dumps(matrix_to_dict(A))


def loads_matrix(text: str) -> np.ndarray:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidMatrix(f"invalid JSON: {exc}") from exc
    return matrix_from_dict(d)


def read_matrix(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidMatrix(f"cannot read {path}: {exc}") from exc
    return loads_matrix(text)


def write_matrix(path, A) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(A))
        fh.write("\n")
