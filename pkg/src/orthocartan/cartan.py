"""Cartan subalgebras: standard ones, orthogonal partners, conjugation.

The orthogonal partner of the diagonal Cartan subalgebra is the circulant
one for su(n) and sp(n).  For so(n) it is assembled from explicit so(4) and
so(6) pieces, grown by four at a time with :func:`hat` plus two extra
generators, and carried to odd n by the corner embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import ConjugationError, DimensionError, ParameterError, SearchFailure
from .liealg import LieAlgebra, algebra, symplectic_pairs
from .numkernel import Subspace, eig_skew, subspace_distance

PROVENANCES = ("standard", "circulant", "so-recursive", "custom")


@dataclass(frozen=True)
class CartanSub:
    """A Cartan subalgebra given by an orthonormal coordinate basis."""

    algebra: LieAlgebra
    space: Subspace = field(repr=False)
    provenance: str = "custom"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ParameterError(f"unknown provenance {self.provenance!r}")
        if self.space.ambient_dim != self.algebra.dim:
            raise DimensionError("subspace does not live in the algebra's coordinates")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def matrices(self) -> np.ndarray:
        return self.algebra.matrices(self.space)

    def element(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=float), self.matrices, axes=1)

    def project(self, X) -> np.ndarray:
        """Coordinates (in this basis) of the orthogonal projection of X."""
        return self.space.project(self.algebra.coords(X))

    def generic_element(self, seed=0) -> np.ndarray:
        """A seeded element of the subspace that is regular in the algebra."""
        rng = np.random.default_rng(seed)
        A = self.algebra
        for _ in range(A.tol.max_iter):
            h = self.element(rng.standard_normal(self.dim))
            if A.is_regular(h):
                return h
        raise SearchFailure(f"no regular element found in {self.provenance} Cartan of {A}")

    def to_dict(self) -> dict:
        from .serialize import encode_matrix

        A = self.algebra
        return {"family": A.family, "n": A.n, "provenance": self.provenance,
                "basis": [encode_matrix(M) for M in self.matrices]}


def cartan_from_matrices(A: LieAlgebra, mats, provenance="custom") -> CartanSub:
    return CartanSub(A, A.span(mats), provenance)


# -- standard Cartans -------------------------------------------------------

def _so_standard_generators(n):
    k = n // 2
    out = []
    for i in range(k):
        X = np.zeros((n, n), dtype=complex)
        X[i, k + i], X[k + i, i] = 1, -1
        out.append(X)
    return out


def standard_cartan(A: LieAlgebra) -> CartanSub:
    """Diagonal Cartan (su, sp) or the paired-block one (so)."""
    m = A.matrix_size
    if A.family == "su":
        mats = []
        for k in range(A.n - 1):
            d = np.zeros(m)
            d[k], d[k + 1] = 1, -1
            mats.append(np.diag(1j * d))
    elif A.family == "sp":
        mats = []
        for a, b in symplectic_pairs(A.n):
            d = np.zeros(m)
            d[a], d[b] = 1, -1
            mats.append(np.diag(1j * d))
    else:
        mats = _so_standard_generators(A.n)
    return cartan_from_matrices(A, mats, "standard")


# -- circulants -------------------------------------------------------------

def circulant(a) -> np.ndarray:
    """Circulant matrix with first row ``a``: entry (r, c) is a[(c - r) mod n]."""
    a = np.asarray(a, dtype=complex).ravel()
    n = a.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return a[idx]


def circulant_diagonalize(a):
    """``(U, lam)`` with ``circulant(a) = U diag(lam) U^*``.

    U has columns ``x_l = (1, e^l, ..., e^{(n-1)l}) / sqrt(n)``, e = exp(2 pi i/n),
    and ``lam_l = sum_j e^{lj} a_j``.
    """
    a = np.asarray(a, dtype=complex).ravel()
    n = a.size
    eps = np.exp(2j * np.pi / n)
    jl = np.outer(np.arange(n), np.arange(n))
    U = eps ** jl / np.sqrt(n)
    lam = U.T @ a * np.sqrt(n)
    return U, lam


def su_circulant_vectors(n: int) -> list[np.ndarray]:
    """Real basis of {a : a_0 = 0, a_{n-l} = -conj(a_l)}."""
    out = []
    for l in range(1, n // 2 + 1):
        if 2 * l == n:
            a = np.zeros(n, dtype=complex)
            a[l] = 1j
            out.append(a)
            continue
        a = np.zeros(n, dtype=complex)
        a[l], a[n - l] = 1, -1
        b = np.zeros(n, dtype=complex)
        b[l], b[n - l] = 1j, 1j
        out += [a, b]
    return out


def circulant_cartan_su(n: int) -> CartanSub:
    A = algebra("su", n)
    return cartan_from_matrices(A, [circulant(a) for a in su_circulant_vectors(n)], "circulant")


def _real_circulant_basis(N):
    out = []
    for k in range(N):
        a = np.zeros(N, dtype=complex)
        a[k] = 1
        out += [circulant(a), circulant(1j * a)]
    return out


def sp_circulant_matrices(n: int) -> list[np.ndarray]:
    """Real basis of Circ(2n) intersected with sp(n), found as a null space."""
    A = algebra("sp", n)
    J = A.J
    basis = _real_circulant_basis(2 * n)

    def violation(X):
        parts = [X + X.conj().T, X.T @ J + J @ X]
        return np.concatenate([np.concatenate([p.real.ravel(), p.imag.ravel()]) for p in parts])

    M = np.array([violation(X) for X in basis]).T
    ns = scipy.linalg.null_space(M)
    return [np.tensordot(col, np.array(basis), axes=1) for col in ns.T]


def circulant_cartan_sp(n: int) -> CartanSub:
    A = algebra("sp", n)
    C = cartan_from_matrices(A, sp_circulant_matrices(n), "circulant")
    if C.dim != A.rank:
        raise ConjugationError(f"circulant intersection in {A} has dim {C.dim}, expected {A.rank}")
    return C


# -- so(n) ------------------------------------------------------------------

def _rot(n, i, j):
    X = np.zeros((n, n), dtype=complex)
    X[i, j], X[j, i] = 1, -1
    return X


def so4_generators():
    x1 = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], dtype=complex)
    x2 = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=complex)
    return [x1, x2]


def so6_generators():
    A = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    B = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]], dtype=complex)
    C = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=complex)
    Z = np.zeros((3, 3), dtype=complex)
    x1 = scipy.linalg.block_diag(A, Z)
    x2 = np.block([[Z, B], [-B.T, Z]])
    x3 = scipy.linalg.block_diag(Z, C)
    return [x1, x2, x3]


def hat(x) -> np.ndarray:
    """Pad each k x k block of a 2k x 2k matrix with two zero rows and columns."""
    x = np.asarray(x)
    k = x.shape[0] // 2
    out = np.zeros((2 * k + 4, 2 * k + 4), dtype=complex)
    out[:k, :k] = x[:k, :k]
    out[:k, k + 2:2 * k + 2] = x[:k, k:]
    out[k + 2:2 * k + 2, :k] = x[k:, :k]
    out[k + 2:2 * k + 2, k + 2:2 * k + 2] = x[k:, k:]
    return out


def hat_extras(k: int):
    """The generators y, z added when passing from so(2k) to so(2k+4)."""
    S = np.zeros((k + 2, k + 2), dtype=complex)
    S[k, k + 1] = S[k + 1, k] = 1
    T = np.zeros((k + 2, k + 2), dtype=complex)
    T[k, k + 1], T[k + 1, k] = -1, 1
    Z = np.zeros_like(S)
    y = np.block([[Z, S], [-S, Z]])
    z = np.block([[Z, T], [T, Z]])
    return y, z


def embed_odd(x) -> np.ndarray:
    """Inclusion so(2k) -> so(2k+1) as the upper-left block."""
    x = np.asarray(x)
    m = x.shape[0]
    out = np.zeros((m + 1, m + 1), dtype=complex)
    out[:m, :m] = x
    return out


def orthocartan_so_generators(n: int) -> list[np.ndarray]:
    """Commuting generators of a Cartan of so(n) orthogonal to the standard one."""
    if n < 3:
        raise ParameterError("so(n) needs n >= 3")
    if n == 3:
        return [_rot(3, 0, 2)]
    if n % 2:
        return [embed_odd(x) for x in orthocartan_so_generators(n - 1)]
    if n == 4:
        return so4_generators()
    if n == 6:
        return so6_generators()
    k = (n - 4) // 2
    return [hat(x) for x in orthocartan_so_generators(n - 4)] + list(hat_extras(k))


def orthocartan_so(n: int) -> CartanSub:
    A = algebra("so", n)
    return cartan_from_matrices(A, orthocartan_so_generators(n), "so-recursive")


def family_orthogonal_cartan(A: LieAlgebra) -> CartanSub:
    """The explicit partner of :func:`standard_cartan` for the family of A."""
    if A.family == "su":
        return circulant_cartan_su(A.n)
    if A.family == "sp":
        return circulant_cartan_sp(A.n)
    return orthocartan_so(A.n)


# -- verification -----------------------------------------------------------

@dataclass
class CartanReport:
    abelian: bool
    correct_dim: bool
    self_centralizing: bool
    residuals: dict

    @property
    def ok(self) -> bool:
        return self.abelian and self.correct_dim and self.self_centralizing

    def to_dict(self):
        return {"abelian": self.abelian, "correct_dim": self.correct_dim,
                "self_centralizing": self.self_centralizing, "residuals": dict(self.residuals)}


def verify_cartan(C: CartanSub, seed=0) -> CartanReport:
    A = C.algebra
    tol = A.tol.tol_residual
    mats = C.matrices
    ab = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ab = max(ab, A.norm(A.bracket(mats[i], mats[j])))
    if C.dim:
        rng = np.random.default_rng(seed)
        h = C.element(rng.standard_normal(C.dim))
        sc = subspace_distance(A.centralizer(h), C.space)
    else:
        sc = 1.0
    return CartanReport(
        abelian=ab < tol,
        correct_dim=C.dim == A.rank,
        self_centralizing=sc < tol,
        residuals={"abelian": ab, "dim": C.dim, "self_centralizing": sc},
    )


def verify_orthogonal(C1: CartanSub, C2: CartanSub) -> float:
    """Largest |inner(c_i, c'_j)| over the two orthonormal bases."""
    if C1.algebra != C2.algebra:
        raise DimensionError(f"Cartans live in {C1.algebra} and {C2.algebra}")
    if C1.dim == 0 or C2.dim == 0:
        return 0.0
    return float(np.max(np.abs(C1.space.basis @ C2.space.basis.T)))


def conjugate_by(C: CartanSub, g, provenance="custom") -> CartanSub:
    """The Cartan ``g C g^{-1}``."""
    A = C.algebra
    mats = np.array([A.conjugate(g, M) for M in C.matrices])
    return cartan_from_matrices(A, mats, provenance)


def _so_conjugator(h, n, tol):
    k = n // 2
    _, Q, _ = eig_skew(h, "real", tol)
    Q = Q.real
    perm = np.zeros((n, n))
    for j in range(k):
        perm[j, 2 * j] = 1
        perm[k + j, 2 * j + 1] = 1
    if n % 2:
        perm[n - 1, n - 1] = 1
    g = perm @ Q.T
    if np.linalg.det(g) < 0:
        g[0] *= -1
    return g.astype(complex)


def _sp_conjugator(h, n, J, tol):
    vals, V, _ = eig_skew(h, "complex", tol)
    # ascending imaginary part: the top n eigenvalues are +i theta
    W = np.zeros((2 * n, 2 * n), dtype=complex)
    pos = V[:, n:]
    for (a, b), w in zip(symplectic_pairs(n), pos.T):
        W[:, a] = w
        W[:, b] = -J @ w.conj()
    return W.conj().T


def conjugate_to_standard(C: CartanSub, seed=0) -> np.ndarray:
    """Group element g with ``g C g^{-1}`` equal to :func:`standard_cartan`."""
    A = C.algebra
    tol = A.tol
    std = standard_cartan(A)
    if subspace_distance(C.space, std.space) <= tol.tol_residual:
        return np.eye(A.matrix_size, dtype=complex)
    h = C.generic_element(seed)
    if A.family == "su":
        vals, V, _ = eig_skew(h, "complex", tol)
        V = V[:, ::-1]
        V[:, 0] *= np.conj(np.linalg.det(V)) / abs(np.linalg.det(V))
        g = V.conj().T
    elif A.family == "so":
        g = _so_conjugator(h, A.n, tol)
    else:
        g = _sp_conjugator(h, A.n, A.J, tol)
    dist = subspace_distance(conjugate_by(C, g).space, std.space)
    grp = A.group_residual(g)
    if dist > tol.tol_residual or grp > tol.tol_residual:
        raise ConjugationError(
            f"conjugation to the standard Cartan of {A} failed (distance {dist:.2e}, group {grp:.2e})")
    return g


def orthogonal_cartan(C: CartanSub, seed=0) -> CartanSub:
    """A Cartan subalgebra orthogonal to the arbitrary Cartan ``C``."""
    g = conjugate_to_standard(C, seed)
    partner = family_orthogonal_cartan(C.algebra)
    return conjugate_by(partner, g.conj().T)
