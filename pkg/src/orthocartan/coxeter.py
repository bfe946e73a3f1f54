"""Coxeter-element lifts in su(m) and the bracket-image statements built on them.

For m = 2k + 1 the lift is the cyclic permutation matrix; for m = 2k it is
the cyclic matrix with a -1 in the corner.  Both are diagonalised by an
explicit Fourier-type unitary g, giving ``n = g D g^{-1}`` with a diagonal
logarithm Lambda of D and hence ``N = g Lambda g^{-1}`` with ``exp(N) = n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cartan import CartanSub, standard_cartan
from .exceptions import InfeasibleError, NormalizerError, ParameterError, SearchFailure
from .liealg import LieAlgebra, algebra
from .numkernel import containment_residual, lstsq_min_norm, mat_exp
from .serialize import encode_matrix


@dataclass
class ResidueReport:
    """Residual norms and pass/fail verdicts of one check."""

    name: str
    residuals: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self):
        return {"name": self.name,
                "residuals": {k: float(v) for k, v in self.residuals.items()},
                "verdicts": {k: bool(v) for k, v in self.verdicts.items()}}


@dataclass(frozen=True)
class CoxeterLift:
    algebra: LieAlgebra
    n_mat: np.ndarray = field(repr=False)
    g_mat: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)
    Lambda: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.algebra.n

    def residuals(self) -> dict:
        A = self.algebra
        g_inv = np.linalg.inv(self.g_mat)
        fro = np.linalg.norm
        return {
            "exp_N": fro(mat_exp(self.N) - self.n_mat),
            "n_gDg": fro(self.n_mat - self.g_mat @ self.D @ g_inv),
            "exp_Lambda": fro(mat_exp(self.Lambda) - self.D),
            "N_gLg": fro(self.N - self.g_mat @ self.Lambda @ g_inv),
            "N_membership": A.membership_residual(self.N),
            "Lambda_membership": A.membership_residual(self.Lambda),
            "g_unitary": fro(self.g_mat @ self.g_mat.conj().T - np.eye(self.m)),
        }

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n_mat": encode_matrix(self.n_mat),
            "g": encode_matrix(self.g_mat),
            "D": encode_matrix(self.D),
            "Lambda": encode_matrix(self.Lambda),
            "N": encode_matrix(self.N),
            "residuals": {k: float(v) for k, v in self.residuals().items()},
        }


def _match_log_order(lam, D):
    """Reorder diagonal logarithms so that exp(lam[j]) == D[j, j]."""
    d = np.diag(D)
    if np.allclose(np.exp(lam), d, atol=1e-12):
        return lam
    out = np.empty_like(lam)
    unused = list(range(lam.size))
    for j, target in enumerate(d):
        k = min(unused, key=lambda i: abs(np.exp(lam[i]) - target))
        out[j] = lam[k]
        unused.remove(k)
    return out


def coxeter_lift_su(m: int) -> CoxeterLift:
    """Explicit lift of a Coxeter element of SU(m) with its logarithm."""
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise ParameterError(f"coxeter lifts need m >= 2, got {m!r}")
    A = algebra("su", m)
    idx = np.arange(m)
    n_mat = np.zeros((m, m), dtype=complex)
    n_mat[idx[1:], idx[:-1]] = 1
    a, b = np.meshgrid(idx, idx, indexing="ij")
    if m % 2:
        k = (m - 1) // 2
        gamma = np.exp(2j * np.pi / m)
        c = 2 * np.pi / m
        n_mat[0, m - 1] = 1
        g = gamma ** (a * b) / np.sqrt(m)
        D = np.diag(np.conj(gamma) ** idx)
        steps = np.concatenate([[0], -np.arange(1, k + 1), np.arange(k, 0, -1)])
        lam = 1j * c * steps
    else:
        k = m // 2
        beta = np.exp(1j * np.pi / m)
        d = np.pi / m
        n_mat[0, m - 1] = -1
        g = beta ** (a * (2 * b + 1)) / np.sqrt(m)
        D = np.diag(np.exp(-(2 * idx + 1) * np.pi * 1j / m))
        odd = 2 * np.arange(1, k + 1) - 1
        lam = 1j * d * np.concatenate([-odd, odd[::-1]])
    lam = _match_log_order(lam, D)
    Lambda = np.diag(lam)
    N = g @ Lambda @ g.conj().T
    return CoxeterLift(A, n_mat, g, D, Lambda, N)


def adjoint_on_cartan(n_mat, C: CartanSub):
    """Matrix of ``Ad(n)`` on C in its orthonormal basis, plus the invariance residual."""
    A = C.algebra
    mats = C.matrices
    images = np.array([n_mat @ M @ np.linalg.inv(n_mat) for M in mats])
    coords = A.coords(images)
    M = coords @ C.space.basis.T
    leak = np.linalg.norm(coords - M @ C.space.basis, axis=1)
    return M.T, float(leak.max(initial=0.0))


def coxeter_fixed_point_check(lift: CoxeterLift, C: CartanSub | None = None) -> ResidueReport:
    """|det(Ad(n)|_C - Id)| and the distance of the spectrum of Ad(n)|_C from 1."""
    C = standard_cartan(lift.algebra) if C is None else C
    tol = lift.algebra.tol.tol_residual
    M, leak = adjoint_on_cartan(lift.n_mat, C)
    if leak > tol:
        raise NormalizerError(f"Ad(n) does not preserve the Cartan (leak {leak:.2e})")
    det = abs(np.linalg.det(M - np.eye(C.dim)))
    gap = float(np.min(np.abs(np.linalg.eigvals(M) - 1)))
    return ResidueReport(
        "no_fixed_points",
        residuals={"abs_det": det, "min_eig_gap": gap, "invariance": leak},
        verdicts={"no_fixed_points": det > tol},
    )


def bracket_preimage(A: LieAlgebra, N, x):
    """Minimum-norm y with [N, y] closest to x, and the residual ``||[N, y] - x||``."""
    y, res = lstsq_min_norm(A.ad_matrix(N), A.coords(x))
    return A.element(y), res


def cartan_in_bracket_image(C: CartanSub, N) -> ResidueReport:
    """Check C inside [N, L] basis vector by basis vector."""
    A = C.algebra
    ad = A.ad_matrix(N)
    witnesses, residuals = [], []
    for x in C.matrices:
        y, res = lstsq_min_norm(ad, A.coords(x))
        witnesses.append(A.element(y))
        residuals.append(res)
    worst = max(residuals, default=0.0)
    return ResidueReport(
        "cartan_in_image",
        residuals={"max_lstsq": worst},
        verdicts={"cartan_in_image": worst < A.tol.tol_residual},
        extra={"witnesses": witnesses, "residuals": residuals},
    )


def strengthen_to_regular(A: LieAlgebra, N, seed=0) -> np.ndarray:
    """A regular element a of the centralizer of N, so that [N, L] lies in [a, L]."""
    Z = A.centralizer(N)
    rng = np.random.default_rng(seed)
    for _ in range(A.tol.max_iter):
        a = A.element(rng.standard_normal(Z.dim) @ Z.basis)
        if A.is_regular(a):
            return a
    raise SearchFailure(f"no regular element in the centralizer within {A.tol.max_iter} draws")


def regular_strengthening_report(A: LieAlgebra, N, a, C: CartanSub) -> ResidueReport:
    z_sub = containment_residual(A.centralizer(a), A.centralizer(N))
    im_sub = containment_residual(A.ad_image(N), A.ad_image(a))
    c_sub = containment_residual(C.space, A.ad_image(a))
    tol = A.tol.tol_residual
    return ResidueReport(
        "regular_strengthening",
        residuals={"centralizer_containment": z_sub, "image_containment": im_sub,
                   "cartan_containment": c_sub},
        verdicts={"a_regular": A.is_regular(a), "image_containment": im_sub < tol,
                  "cartan_containment": c_sub < tol, "centralizer_containment": z_sub < tol},
    )


def solve_bracket(A: LieAlgebra, a, x, tol: float | None = None) -> np.ndarray:
    """Minimum-norm b with [a, b] = x; raises if x is not in [a, L]."""
    tol = A.tol.tol_residual if tol is None else tol
    b, res = lstsq_min_norm(A.ad_matrix(a), A.coords(x))
    if res >= tol * max(1.0, A.norm(x)):
        raise InfeasibleError(f"x is not in [a, L] (residual {res:.2e})")
    return A.element(b)
