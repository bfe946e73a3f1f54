"""Compact classical Lie algebras su(n), so(n), sp(n) as matrix algebras.

Elements are plain complex numpy matrices in the defining representation.
Linear maps on an algebra are written in real coordinates with respect to a
basis that is orthonormal for the negative Killing form, so Euclidean
geometry in coordinates is the invariant geometry of the algebra.

sp(n) sits inside u(2n) as the skew-Hermitian X with ``X^T J + J X = 0``.
The symplectic form used pairs index i with 1 - i (mod 2n) and carries the
sign (-1)**i; it is conjugate to the block form [[0, I], [-I, 0]] by a
permutation (see :func:`block_to_circulant_frame`) and is the frame in
which the shift matrix anticommutes suitably with J, so that circulant
matrices meet sp(n) in a Cartan subalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .exceptions import DimensionError, ParameterError, SearchFailure, StructureError
from .numkernel import (DEFAULT_TOL, Subspace, Tolerances, as_matrix, kernel,
                        subspace_from_columns)

FAMILIES = ("su", "so", "sp")

_MIN_N = {"su": 2, "so": 3, "sp": 1}


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n form J with J[i, 1-i mod 2n] = (-1)**i."""
    N = 2 * n
    J = np.zeros((N, N))
    for i in range(N):
        J[i, (1 - i) % N] = (-1) ** i
    return J


def symplectic_pairs(n: int) -> list[tuple[int, int]]:
    """Index pairs (a, b) with J[a, b] = +1, ordered by a."""
    N = 2 * n
    return [(a, (1 - a) % N) for a in range(0, N, 2)]


def block_to_circulant_frame(n: int) -> np.ndarray:
    """Permutation Q with Q J_block Q^T = J, J_block = [[0, I], [-I, 0]]."""
    N = 2 * n
    Q = np.zeros((N, N))
    for i, (a, b) in enumerate(symplectic_pairs(n)):
        Q[a, i] = 1.0
        Q[b, n + i] = 1.0
    return Q


def quaternion_matrix(u, v) -> np.ndarray:
    """Complex 2n x 2n image of the quaternionic matrix u + j v.

    The block map x -> [[u, -conj(v)], [v, conj(u)]] is applied and the result
    is moved into the frame of :func:`symplectic_form`.
    """
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    v = np.atleast_2d(np.asarray(v, dtype=complex))
    if u.shape != v.shape or u.shape[0] != u.shape[1]:
        raise DimensionError("u and v must be square of the same size")
    n = u.shape[0]
    M = np.block([[u, -v.conj()], [v, u.conj()]])
    Q = block_to_circulant_frame(n)
    return Q @ M @ Q.T


def _elementary_u(m):
    """Frobenius-orthonormal basis of u(m): off-diagonal pairs, then diagonal."""
    out = []
    for i in range(m):
        for j in range(i + 1, m):
            R = np.zeros((m, m), dtype=complex)
            R[i, j], R[j, i] = 1, -1
            S = np.zeros((m, m), dtype=complex)
            S[i, j] = S[j, i] = 1j
            out += [R / np.sqrt(2), S / np.sqrt(2)]
    for k in range(m):
        D = np.zeros((m, m), dtype=complex)
        D[k, k] = 1j
        out.append(D)
    return out


def _raw_basis(family, n):
    """Frobenius-orthonormal spanning basis of the algebra."""
    if family == "su":
        out = [B for B in _elementary_u(n) if np.all(np.diag(B) == 0)]
        for k in range(1, n):
            d = np.zeros(n)
            d[:k] = 1.0
            d[k] = -k
            out.append(np.diag(1j * d / np.linalg.norm(d)))
        return np.array(out)
    if family == "so":
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                R = np.zeros((n, n), dtype=complex)
                R[i, j], R[j, i] = 1, -1
                out.append(R / np.sqrt(2))
        return np.array(out)
    # sp: project u(2n) onto the fixed points of X -> J conj(X) J^{-1}
    J = symplectic_form(n)
    out = []
    for B in _elementary_u(2 * n):
        P = 0.5 * (B + J @ B.conj() @ J.T)
        w = P.copy()
        for _ in range(2):
            for E in out:
                w = w - np.real(np.vdot(E, w)) * E
        nw = np.linalg.norm(w)
        if nw > 1e-9:
            out.append(w / nw)
    return np.array(out)


@dataclass(frozen=True)
class LieAlgebra:
    """One of su(n), so(n), sp(n) with its orthonormal basis.

    Use :func:`algebra` to obtain cached instances.
    """

    family: str
    n: int
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        fam = str(self.family).lower()
        if fam not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        if not isinstance(self.n, (int, np.integer)) or self.n < _MIN_N[fam]:
            raise ParameterError(f"{fam}(n) needs integer n >= {_MIN_N[fam]}, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    def __str__(self):
        return f"{self.family}({self.n})"

    # -- descriptor ------------------------------------------------------
    @property
    def matrix_size(self) -> int:
        return 2 * self.n if self.family == "sp" else self.n

    @property
    def dim(self) -> int:
        n = self.n
        return {"su": n * n - 1, "so": n * (n - 1) // 2, "sp": n * (2 * n + 1)}[self.family]

    @property
    def rank(self) -> int:
        n = self.n
        return {"su": n - 1, "so": n // 2, "sp": n}[self.family]

    @cached_property
    def J(self) -> np.ndarray | None:
        return symplectic_form(self.n) if self.family == "sp" else None

    def membership_residual(self, X) -> float:
        """Relative violation of the defining equations of the algebra."""
        X = np.asarray(X, dtype=complex)
        m = self.matrix_size
        if X.shape != (m, m):
            return float("inf")
        r = np.linalg.norm(X + X.conj().T)
        if self.family == "su":
            r += abs(np.trace(X))
        elif self.family == "so":
            r += np.linalg.norm(X.imag)
        else:
            r += np.linalg.norm(X.T @ self.J + self.J @ X)
        return float(r / max(1.0, np.linalg.norm(X)))

    def contains(self, X, tol: float | None = None) -> bool:
        tol = self.tol.tol_residual if tol is None else tol
        return self.membership_residual(X) < tol

    def check_element(self, X) -> np.ndarray:
        """Validate ``X`` as an element and return it as a complex matrix."""
        M = as_matrix(X)
        if M.shape != (self.matrix_size,) * 2:
            raise DimensionError(f"{self} elements are {self.matrix_size}x{self.matrix_size}, got {M.shape}")
        if not self.contains(M):
            raise StructureError(f"matrix is not in {self} (residual {self.membership_residual(M):.3g})")
        return M

    def group_residual(self, g) -> float:
        """Distance of ``g`` from the compact group SU(n), SO(n) or Sp(n)."""
        g = np.asarray(g, dtype=complex)
        m = self.matrix_size
        if g.shape != (m, m):
            return float("inf")
        eye = np.eye(m)
        r = np.linalg.norm(g @ g.conj().T - eye)
        if self.family == "sp":
            r += np.linalg.norm(g.T @ self.J @ g - self.J)
        else:
            r += abs(np.linalg.det(g) - 1)
            if self.family == "so":
                r += np.linalg.norm(g.imag)
        return float(r)

    # -- basis and inner product -----------------------------------------
    @cached_property
    def _construction(self):
        B = _raw_basis(self.family, self.n)
        d = B.shape[0]
        if d != self.dim:
            raise StructureError(f"raw basis of {self} has {d} elements, expected {self.dim}")
        # coordinates in the Frobenius-orthonormal raw basis need no Killing form
        raw_dual = B.conj().reshape(d, -1)
        br = np.einsum("kij,ljm->klim", B, B)
        br = br - br.transpose(1, 0, 2, 3)
        ad = np.einsum("pq,klq->kpl", raw_dual, br.reshape(d, d, -1)).real
        killing = np.einsum("kab,lba->kl", ad, ad)
        form = -killing
        L = np.linalg.cholesky(form)
        E = np.tensordot(np.linalg.inv(L), B, axes=1)
        # trace-form constant: -Killing(X, Y) = -c Re tr(XY)
        T = -np.einsum("kij,lji->kl", B, B).real
        c = float(np.sum(form * T) / np.sum(T * T))
        err = np.linalg.norm(form - c * T) / np.linalg.norm(form)
        if err > 1e-10:
            raise StructureError(f"Killing form of {self} is not a multiple of the trace form ({err:.2e})")
        return E, c

    @property
    def basis(self) -> np.ndarray:
        """Stack of ``dim`` matrices, orthonormal under :meth:`inner`."""
        return self._construction[0]

    def standard_basis(self) -> np.ndarray:
        return self.basis.copy()

    @property
    def trace_form_constant(self) -> float:
        return self._construction[1]

    @cached_property
    def _dual(self):
        d, m = self.dim, self.matrix_size
        return -self.trace_form_constant * self.basis.transpose(0, 2, 1).reshape(d, m * m)

    def coords(self, X) -> np.ndarray:
        """Real coordinates of X (or of a stack of matrices) in :attr:`basis`."""
        X = np.asarray(X, dtype=complex)
        m = self.matrix_size
        if X.ndim == 2:
            return (self._dual @ X.ravel()).real
        return (X.reshape(-1, m * m) @ self._dual.T).real

    def element(self, coords) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=float), self.basis, axes=1)

    def bracket(self, X, Y) -> np.ndarray:
        return X @ Y - Y @ X

    def trace_inner(self, X, Y) -> float:
        """Fast path of :meth:`inner` through ``-c Re tr(XY)``."""
        return float(-self.trace_form_constant * np.sum(X * Y.T).real)

    def norm(self, X) -> float:
        return float(np.sqrt(max(self.trace_inner(X, X), 0.0)))

    def inner(self, X, Y) -> float:
        """Negative Killing form ``-tr(ad X ad Y)`` from ad matrices."""
        return float(-np.trace(self.ad_matrix(X) @ self.ad_matrix(Y)))

    def ad_matrix(self, X) -> np.ndarray:
        """Real dim x dim matrix of ``[X, .]`` in coordinates."""
        X = np.asarray(X, dtype=complex)
        E = self.basis
        return self.coords(X @ E - E @ X).T

    def conjugate(self, g, X) -> np.ndarray:
        """Adjoint action ``g X g^{-1}`` of a unitary g."""
        return g @ X @ g.conj().T

    # -- centralizers and images ------------------------------------------
    def centralizer(self, X) -> Subspace:
        return kernel(self.ad_matrix(X), self.tol)

    def ad_image(self, X) -> Subspace:
        return subspace_from_columns(self.ad_matrix(X), self.tol)

    def is_regular(self, X) -> bool:
        return self.centralizer(X).dim == self.rank

    def span(self, matrices) -> Subspace:
        """Subspace spanned by a list of elements."""
        from .numkernel import orthonormalize

        return orthonormalize([self.coords(M) for M in matrices], self.dim, self.tol)

    def matrices(self, S: Subspace) -> np.ndarray:
        """Basis matrices of a coordinate subspace."""
        return np.tensordot(S.basis, self.basis, axes=1)

    # -- sampling --------------------------------------------------------
    def random_element(self, seed=0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return self.element(rng.standard_normal(self.dim))

    def random_regular(self, seed=0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        for _ in range(self.tol.max_iter):
            X = self.element(rng.standard_normal(self.dim))
            if self.is_regular(X):
                return X
        raise SearchFailure(f"no regular element of {self} in {self.tol.max_iter} draws")


@lru_cache(maxsize=None)
def _cached(family, n, tol):
    return LieAlgebra(family, n, tol)


def algebra(family: str, n: int, tol: Tolerances = DEFAULT_TOL) -> LieAlgebra:
    """Cached :class:`LieAlgebra` for ``family`` in {"su", "so", "sp"}."""
    fam = str(family).lower()
    if fam not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not isinstance(n, (int, np.integer)):
        raise ParameterError(f"n must be an integer, got {n!r}")
    return _cached(fam, int(n), tol)
