"""Dense numerical kernel.

Matrix exponential, structured eigendecompositions of skew matrices,
minimum-norm least squares, subspace algebra and the Euclidean distance to a
convex hull.  Everything here works on plain :class:`numpy.ndarray` values and
never mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, StructureError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_matrix",
    "mat_exp",
    "SkewEig",
    "eig_skew",
    "lstsq_min_norm",
    "Subspace",
    "orthonormalize",
    "subspace_from_columns",
    "kernel",
    "orthocomplement",
    "subspace_distance",
    "subspace_sum_dim",
    "containment_residual",
    "hull_distance",
    "nearest_point_in_hull",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    ``tol_zero`` is relative: singular values below ``tol_zero`` times the
    largest one count as zero.
    """

    tol_orth: float = 1e-10
    tol_residual: float = 1e-8
    tol_zero: float = 1e-10
    max_iter: int = 10000

    def __post_init__(self):
        for name in ("tol_orth", "tol_residual", "tol_zero"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be at least 1")


DEFAULT_TOL = Tolerances()


def as_matrix(A, square: bool = True) -> np.ndarray:
    """Validate ``A`` as a finite complex 2-D array and return a copy."""
    M = np.array(A, dtype=complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise StructureError("matrix has non-finite entries")
    return M


def _is_skew_hermitian(A, tol):
    scale = max(1.0, np.linalg.norm(A))
    return np.linalg.norm(A + A.conj().T) <= tol * scale


def mat_exp(A, method: str = "auto", tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Matrix exponential.

    ``method="pade"`` uses scaling and squaring with a Pade approximant and
    works for any square matrix.  ``method="eig"`` requires a skew-Hermitian
    input and exponentiates its spectral decomposition, which returns a
    unitary matrix to working precision.  ``"auto"`` picks ``"eig"`` when the
    input is skew-Hermitian within ``tol.tol_residual``.
    """
    M = as_matrix(A)
    if method == "auto":
        method = "eig" if _is_skew_hermitian(M, tol.tol_residual) else "pade"
    if method == "pade":
        out = scipy.linalg.expm(M)
    elif method == "eig":
        if not _is_skew_hermitian(M, tol.tol_residual):
            raise StructureError("eigen path of mat_exp needs a skew-Hermitian matrix")
        # A = -i H with H Hermitian
        w, V = np.linalg.eigh(1j * M)
        out = (V * np.exp(-1j * w)) @ V.conj().T
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.all(np.isreal(A)) and np.iscomplexobj(out):
        out = out.real.astype(complex)
    return out


class SkewEig(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray
    blocks: np.ndarray


def eig_skew(A, kind: str = "complex", tol: Tolerances = DEFAULT_TOL) -> SkewEig:
    """Structured eigendecomposition of a skew matrix.

    kind="complex"
        ``A`` skew-Hermitian.  Returns purely imaginary eigenvalues (ascending
        imaginary part), a unitary ``vectors`` with ``A V = V diag(values)``,
        and ``blocks = diag(values)``.

    kind="real"
        ``A`` real skew-symmetric.  Returns the real Schur form: an
        orthogonal ``vectors`` Q and ``blocks`` T with ``A = Q T Q^T``, T
        made of 2x2 blocks ``[[0, t], [-t, 0]]`` (t > 0, descending) followed
        by zeros.  ``values`` lists ``+it, -it`` per block, then zeros.
    """
    M = as_matrix(A)
    if not _is_skew_hermitian(M, tol.tol_residual):
        raise StructureError("matrix is not skew-Hermitian")
    if kind == "complex":
        w, V = np.linalg.eigh(1j * M)
        # eigenvalues of A are -i w; order by ascending imaginary part
        order = np.argsort(-w, kind="stable")
        w, V = w[order], V[:, order]
        vals = -1j * w
        vals = 1j * vals.imag  # clamp real parts to exactly zero
        return SkewEig(vals, V, np.diag(vals))
    if kind != "real":
        raise ValueError(f"unknown kind {kind!r}")

    scale = max(np.linalg.norm(M.imag), 0.0)
    if scale > tol.tol_residual * max(1.0, np.linalg.norm(M)):
        raise StructureError("real skew kind requires a real matrix")
    R = M.real
    n = R.shape[0]
    w, V = np.linalg.eigh(1j * R)
    smax = max(np.max(np.abs(w)), 1e-300)
    pos = np.where(w > tol.tol_zero * smax)[0]
    pos = pos[np.argsort(-w[pos], kind="stable")]
    cols, thetas = [], []
    for k in pos:
        # R p = t q and R q = -t p for the eigenvector p + i q of iR at +t
        p, q = V[:, k].real, V[:, k].imag
        p = p / np.linalg.norm(p)
        q = q / np.linalg.norm(q)
        cols += [q, p]
        thetas.append(w[k])
    n_zero = n - 2 * len(thetas)
    if n_zero:
        if cols:
            Q0 = np.array(cols).T
            comp = scipy.linalg.null_space(Q0.T)
        else:
            comp = np.eye(n)
        cols += list(comp.T[:n_zero])
    Q = np.array(cols).T if cols else np.zeros((n, 0))
    # one re-orthogonalisation pass guards against clustered eigenvalues
    Q, _ = np.linalg.qr(Q)
    T = Q.T @ R @ Q
    blocks = np.zeros((n, n))
    vals = []
    for j, t in enumerate(thetas):
        t = T[2 * j, 2 * j + 1]
        if t < 0:
            Q[:, 2 * j] *= -1
            t = -t
        blocks[2 * j, 2 * j + 1] = t
        blocks[2 * j + 1, 2 * j] = -t
        vals += [1j * t, -1j * t]
    vals += [0j] * n_zero
    return SkewEig(np.array(vals, dtype=complex), Q.astype(complex), blocks.astype(complex))


def lstsq_min_norm(M, b):
    """Minimum-norm least-squares solution of ``M x = b``.

    Returns ``(x, residual)`` with ``residual = ||M x - b||``.
    """
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    if M.ndim != 2 or b.shape != (M.shape[0],):
        raise DimensionError(f"incompatible shapes {M.shape} and {b.shape}")
    if M.size == 0:
        return np.zeros(M.shape[1]), float(np.linalg.norm(b))
    x = np.linalg.lstsq(M, b, rcond=None)[0]
    return x, float(np.linalg.norm(M @ x - b))


@dataclass(frozen=True)
class Subspace:
    """Span of orthonormal row vectors in a real coordinate space."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        object.__setattr__(self, "basis", B)
        if B.shape[0] > self.ambient_dim:
            raise DimensionError("more basis vectors than the ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def project(self, v) -> np.ndarray:
        """Coordinates of the orthogonal projection of ``v`` in this basis."""
        return self.basis @ np.asarray(v, dtype=float)

    def gram_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.max(np.abs(self.basis @ self.basis.T - np.eye(self.dim))))


def orthonormalize(vectors: Sequence, ambient_dim: int | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Gram-Schmidt with re-orthogonalisation, dropping dependent vectors."""
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if ambient_dim is None:
        if not vecs:
            raise DimensionError("ambient_dim is required for an empty input")
        ambient_dim = vecs[0].size
    if any(v.size != ambient_dim for v in vecs):
        raise DimensionError("vectors do not share an ambient dimension")
    scale = max((np.linalg.norm(v) for v in vecs), default=0.0)
    out: list[np.ndarray] = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for e in out:
                w -= (e @ w) * e
        nw = np.linalg.norm(w)
        if scale > 0 and nw > tol.tol_zero * scale:
            out.append(w / nw)
    return Subspace(ambient_dim, np.array(out).reshape(-1, ambient_dim))


def _rank_split(M, tol):
    """SVD of M with the numerical rank under the relative threshold."""
    U, s, Vt = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0:
        return U, s, Vt, 0
    return U, s, Vt, int(np.sum(s > tol.tol_zero * s[0]))


def subspace_from_columns(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Column space of ``M`` as a :class:`Subspace`."""
    M = np.asarray(M, dtype=float)
    U, _, _, r = _rank_split(M, tol)
    return Subspace(M.shape[0], U[:, :r].T)


def kernel(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Null space of ``M`` as a :class:`Subspace`."""
    M = np.asarray(M, dtype=float)
    _, _, Vt, r = _rank_split(M, tol)
    return Subspace(M.shape[1], Vt[r:])


def orthocomplement(S: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    if S.dim == 0:
        return Subspace(S.ambient_dim, np.eye(S.ambient_dim))
    return kernel(S.basis, tol)


def _check_ambient(S1, S2):
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionError(
            f"ambient dimensions differ: {S1.ambient_dim} vs {S2.ambient_dim}")


def subspace_distance(S1: Subspace, S2: Subspace) -> float:
    """Operator 2-norm of the difference of the orthogonal projectors."""
    _check_ambient(S1, S2)
    D = S1.projector() - S2.projector()
    if not D.any():
        return 0.0
    return float(np.linalg.norm(D, 2))


def subspace_sum_dim(S1: Subspace, S2: Subspace, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of ``S1 + S2``."""
    _check_ambient(S1, S2)
    stacked = np.vstack([S1.basis, S2.basis])
    if stacked.shape[0] == 0:
        return 0
    return _rank_split(stacked, tol)[3]


def containment_residual(S1: Subspace, S2: Subspace) -> float:
    """``||(I - P2) P1||``; zero iff S1 is contained in S2."""
    _check_ambient(S1, S2)
    if S1.dim == 0:
        return 0.0
    R = S1.basis - (S1.basis @ S2.basis.T) @ S2.basis
    return float(np.linalg.norm(R, 2))


def _affine_min_norm(P):
    """Weights v (sum 1) minimising ||P^T v|| over the affine hull of rows of P."""
    k = P.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = P @ P.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:k]


def nearest_point_in_hull(points, q, tol: Tolerances = DEFAULT_TOL):
    """Wolfe's minimum-norm-point algorithm.

    Returns ``(point, weights)`` where ``point`` is the point of the convex
    hull of ``points`` nearest to ``q`` and ``weights`` are convex weights
    over ``points`` reproducing it.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    q = np.asarray(q, dtype=float).ravel()
    if P.shape[0] == 0:
        raise DimensionError("need at least one point")
    if P.shape[1] != q.size:
        raise DimensionError("points and query have different dimensions")
    Y = P - q
    scale = max(float(np.max(np.sum(Y * Y, axis=1))), 1e-300)
    # stop once the duality gap bounds the distance error well below tol_residual
    acc = 1e-3 * tol.tol_residual * np.sqrt(scale)
    floor = 1e-14 * scale

    S = [int(np.argmin(np.sum(Y * Y, axis=1)))]
    w = np.array([1.0])
    x = Y[S[0]].copy()
    for _ in range(tol.max_iter):
        xx = x @ x
        if xx <= acc * acc:
            break
        j = int(np.argmin(Y @ x))
        gap = xx - Y[j] @ x
        if gap <= max(acc * np.sqrt(xx), floor) or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            v = _affine_min_norm(Y[S])
            if np.all(v > 1e-14):
                w = v
                break
            neg = v <= 1e-14
            denom = w[neg] - v[neg]
            ratios = np.where(denom > 0, w[neg] / np.where(denom > 0, denom, 1.0), 0.0)
            theta = float(np.min(ratios))
            w = (1 - theta) * w + theta * v
            keep = w > 1e-14
            S = [s for s, kk in zip(S, keep) if kk]
            w = w[keep]
            w = w / w.sum()
        if j not in S:
            # the new point carried no weight: no further progress possible
            x = w @ Y[S]
            break
        x = w @ Y[S]
    weights = np.zeros(P.shape[0])
    weights[S] = w
    return x + q, weights


def hull_distance(points, q, tol: Tolerances = DEFAULT_TOL) -> float:
    """Euclidean distance from ``q`` to the convex hull of ``points``."""
    p, _ = nearest_point_in_hull(points, q, tol)
    return float(np.linalg.norm(p - np.asarray(q, dtype=float).ravel()))
