"""Root-space frames, su(2)-rotation descent and bracket factorizations.

Given a Cartan subalgebra C, every positive root alpha carries an orthonormal
pair (u, v) spanning the real root space together with ``h = [u, v]`` in C.
Rotating inside ``exp(R v)`` moves the h-component of an element into the
u-direction; repeating this for the root with the largest component pushes
any element into the orthocomplement of C, which equals ``[a, L]`` for a
regular ``a`` in C.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .cartan import CartanSub, orthogonal_cartan, standard_cartan
from .coxeter import coxeter_lift_su, solve_bracket, strengthen_to_regular
from .exceptions import (DecompositionError, NonConvergenceError, ParameterError,
                         SearchFailure, StructureError)
from .liealg import LieAlgebra
from .numkernel import hull_distance, lstsq_min_norm, subspace_sum_dim
from .serialize import encode_matrix


# -- root-space decomposition ---------------------------------------------

@dataclass
class RootBasis:
    """Positive roots of a Cartan subalgebra with their real root frames.

    ``alphas[a]`` holds the values of root a on the orthonormal basis of C,
    ``u[a], v[a]`` the unit frame and ``h[a] = [u[a], v[a]]``, which lies in
    C with coordinates ``alphas[a]``.
    """

    cartan: CartanSub
    alphas: np.ndarray
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    _exp_cache: dict = field(default_factory=dict, repr=False)

    @property
    def count(self) -> int:
        return len(self.alphas)

    @property
    def kappa(self) -> np.ndarray:
        """Root lengths; also the norms of the h[a]."""
        return np.linalg.norm(self.alphas, axis=1)

    def exp_v(self, a: int, theta: float) -> np.ndarray:
        """``exp(theta v[a])`` from a cached spectral decomposition."""
        if a not in self._exp_cache:
            w, W = np.linalg.eigh(1j * self.v[a])
            self._exp_cache[a] = (w, W)
        w, W = self._exp_cache[a]
        g = (W * np.exp(-1j * theta * w)) @ W.conj().T
        if self.cartan.algebra.family == "so":
            g = g.real.astype(complex)
        return g

    def relation_residuals(self) -> dict:
        C = self.cartan
        A = C.algebra
        uc, vc = A.coords(self.u), A.coords(self.v)
        ads = np.array([A.ad_matrix(M) for M in C.matrices])
        # [c_j, u_a] = alpha_a(c_j) v_a and [c_j, v_a] = -alpha_a(c_j) u_a
        adu = np.einsum("jpq,aq->ajp", ads, uc)
        adv = np.einsum("jpq,aq->ajp", ads, vc)
        r_u = np.abs(adu - self.alphas[:, :, None] * vc[:, None, :]).max(initial=0.0)
        r_v = np.abs(adv + self.alphas[:, :, None] * uc[:, None, :]).max(initial=0.0)
        hc = A.coords(self.h)
        proj = hc @ C.space.basis.T
        r_in_c = np.abs(hc - proj @ C.space.basis).max(initial=0.0)
        r_h = np.abs(proj - self.alphas).max(initial=0.0)
        # closure of span{h, u, v} under the bracket
        closure = 0.0
        for a in range(self.count):
            frame = np.array([hc[a] / max(self.kappa[a], 1e-300), uc[a], vc[a]])
            for X, Y in ((self.h[a], self.u[a]), (self.h[a], self.v[a]), (self.u[a], self.v[a])):
                z = A.coords(A.bracket(X, Y))
                closure = max(closure, np.linalg.norm(z - frame.T @ (frame @ z)))
        G = np.vstack([C.space.basis, uc, vc])
        orth = np.abs(G @ G.T - np.eye(len(G))).max(initial=0.0)
        expected = (A.dim - A.rank) // 2
        return {"ad_u": float(r_u), "ad_v": float(r_v), "h_in_cartan": float(r_in_c),
                "h_coords": float(r_h), "su2_closure": float(closure), "orthonormality": float(orth),
                "root_count": float(abs(self.count - expected))}

    def to_dict(self) -> dict:
        return {"alphas": self.alphas.tolist(),
                "u": [encode_matrix(M) for M in self.u],
                "v": [encode_matrix(M) for M in self.v],
                "h": [encode_matrix(M) for M in self.h],
                "residuals": self.relation_residuals()}


def _phase_fix(w):
    mags = np.abs(w)
    k = int(np.argmax(mags >= (1 - 1e-8) * mags.max()))
    return w * (np.conj(w[k]) / mags[k])


def root_space_decomposition(C: CartanSub, seed=0) -> RootBasis:
    """Real root frames of C from the spectrum of ``ad(h*)`` at a generic h* in C."""
    A = C.algebra
    tol = A.tol
    r, d = C.dim, A.dim
    if r != A.rank:
        raise StructureError(f"subspace has dimension {r}, rank is {A.rank}")
    p = (d - r) // 2
    rng = np.random.default_rng(seed)
    coeffs = 1.0 / np.arange(1, r + 1)
    found = None
    for _ in range(tol.max_iter):
        h = C.element(coeffs)
        w, V = np.linalg.eigh(1j * A.ad_matrix(h))
        smax = np.abs(w).max(initial=0.0)
        zero = np.abs(w) <= tol.tol_zero * max(smax, 1e-300)
        pos = np.flatnonzero(w > tol.tol_zero * smax)
        gaps = np.diff(w[pos]) if pos.size > 1 else np.array([np.inf])
        if zero.sum() == r and pos.size == p and gaps.min() > 1e-6 * smax:
            found = (w, V, pos)
            break
        coeffs = rng.standard_normal(r)
    if found is None:
        raise DecompositionError("no generic element with simple nonzero spectrum found")
    w, V, pos = found

    ads = np.array([A.ad_matrix(M) for M in C.matrices])
    us, vs, alphas = [], [], []
    for k in pos:
        z = _phase_fix(V[:, k])
        uc = z.real / np.linalg.norm(z.real)
        vc = z.imag / np.linalg.norm(z.imag)
        alphas.append(np.einsum("jpq,q,p->j", ads, uc, vc))
        us.append(uc)
        vs.append(vc)
    u = np.array([A.element(c) for c in us])
    v = np.array([A.element(c) for c in vs])
    h = np.array([A.bracket(x, y) for x, y in zip(u, v)])
    R = RootBasis(C, np.array(alphas), u, v, h)
    res = R.relation_residuals()
    bad = {k: x for k, x in res.items() if x > tol.tol_residual * max(1.0, float(R.kappa.max()))}
    if bad or np.any(np.einsum("ij,ij->i", R.alphas, R.alphas) <= 0):
        raise DecompositionError(f"root relations fail: {bad}")
    return R


# -- descent ---------------------------------------------------------------

@dataclass
class DescentStep:
    root: int
    beta: float
    gamma: float
    theta: float
    norm_before: float
    norm_after: float

    def to_dict(self):
        return {"root": int(self.root), "axis": f"v[{self.root}]", "angle": float(self.theta),
                "beta": float(self.beta), "gamma": float(self.gamma),
                "norm_before": float(self.norm_before), "norm_after": float(self.norm_after)}


@dataclass
class DescentTrace:
    """Result of :func:`descend_to_complement`.

    ``g`` is the accumulated group element, ``x_final = g x g^{-1}`` the
    reduced element and ``steps`` the per-rotation log.
    """

    g: np.ndarray = field(repr=False)
    x_final: np.ndarray = field(repr=False)
    steps: list = field(default_factory=list, repr=False)
    converged: bool = True

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def final_norm(self) -> float:
        return self.steps[-1].norm_after if self.steps else 0.0

    def to_dict(self):
        return {"g": encode_matrix(self.g), "x_final": encode_matrix(self.x_final),
                "iterations": self.iterations, "converged": self.converged,
                "steps": [s.to_dict() for s in self.steps]}


def _rotation(x, R: RootBasis, a: int):
    A = R.cartan.algebra
    kappa = R.kappa[a]
    beta = A.trace_inner(x, R.h[a] / kappa)
    gamma = A.trace_inner(x, R.u[a])
    # ad(v) rotates hhat towards u at angular speed kappa; atan2 covers gamma = 0
    theta = math.atan2(beta, gamma) / kappa
    g = R.exp_v(a, theta)
    return g, g @ x @ g.conj().T, beta, gamma, theta


def su2_reduce_step(x, R: RootBasis, a: int):
    """One rotation in ``exp(R v_a)`` that removes the h_a-component of x.

    Returns ``(g, g x g^{-1})``; g is the identity when the component is zero.
    """
    if not 0 <= a < R.count:
        raise ParameterError(f"root index {a} out of range 0..{R.count - 1}")
    g, x_new, *_ = _rotation(R.cartan.algebra.check_element(x), R, a)
    return g, x_new


def root_pieces(R: RootBasis, a: int):
    """Coordinate projectors onto ker(alpha_a) in C, S_a = span{h_a, u_a, v_a} and the rest m_a."""
    C = R.cartan
    A = C.algebra
    hhat = R.alphas[a] / R.kappa[a]
    ker_c = C.space.basis - np.outer(C.space.basis.T @ hhat, hhat).T
    P_ker = ker_c.T @ np.linalg.pinv(ker_c.T)
    S = np.array([hhat @ C.space.basis, A.coords(R.u[a]), A.coords(R.v[a])])
    P_s = S.T @ S
    return P_ker, P_s, np.eye(A.dim) - P_ker - P_s


def rotation_invariance(R: RootBasis, a: int, theta: float) -> dict:
    """How far ``exp(theta v_a)`` is from preserving ker(a), S_a, m_a and fixing ker(a)."""
    A = R.cartan.algebra
    g = R.exp_v(a, theta)
    Ad = A.coords(np.array([g @ E @ g.conj().T for E in A.basis])).T
    P_ker, P_s, P_m = root_pieces(R, a)
    leak = max(np.linalg.norm((np.eye(A.dim) - P) @ Ad @ P, 2) for P in (P_ker, P_s, P_m))
    fixed = np.linalg.norm((Ad - np.eye(A.dim)) @ P_ker, 2)
    return {"invariance": float(leak), "fixes_kernel": float(fixed)}


def descend_to_complement(x, C: CartanSub | None = None, R: RootBasis | None = None,
                          target: float | None = None, max_iter: int | None = None,
                          seed=0) -> DescentTrace:
    """Find g with ``g x g^{-1}`` orthogonal to C by greedy su(2) rotations.

    Each step picks the root whose h-direction carries the largest share of
    the C-component of the current element and rotates it away; the
    C-component shrinks by exactly that share.  Raises
    :class:`NonConvergenceError` (with the partial trace) after ``max_iter``
    steps.
    """
    if C is None and R is None:
        raise ParameterError("need a Cartan subalgebra or a root basis")
    R = root_space_decomposition(C, seed) if R is None else R
    C = R.cartan
    A = C.algebra
    x = A.check_element(x)
    tol = A.tol
    target = tol.tol_residual * max(1.0, A.norm(x)) if target is None else target
    max_iter = tol.max_iter if max_iter is None else max_iter

    m = A.matrix_size
    cdual = C.space.basis @ A._dual          # C-coordinates of a flattened matrix
    hdir = R.alphas / R.kappa[:, None]         # h-hat directions in C-coordinates
    g = np.eye(m, dtype=complex)
    cur = x.copy()
    steps = []
    c = (cdual @ cur.ravel()).real
    nc = float(np.linalg.norm(c))
    for _ in range(max_iter):
        if nc <= target:
            break
        betas = hdir @ c
        a = int(np.argmax(np.abs(betas)))
        gs, cur, beta, gamma, theta = _rotation(cur, R, a)
        g = gs @ g
        c = (cdual @ cur.ravel()).real
        after = float(np.linalg.norm(c))
        steps.append(DescentStep(a, beta, gamma, theta, nc, after))
        nc = after
    else:
        if nc > target:
            x_final = g @ x @ g.conj().T
            trace = DescentTrace(g, x_final, steps, converged=False)
            raise NonConvergenceError(
                f"descent stopped at |proj_C| = {nc:.2e} after {max_iter} steps", trace)
    x_final = g @ x @ g.conj().T
    return DescentTrace(g, x_final, steps)


def descent_report(x, trace: DescentTrace, C: CartanSub) -> dict:
    """Residuals certifying a descent run."""
    A = C.algebra
    xf = trace.x_final
    dec = [abs((s.norm_before ** 2 - s.norm_after ** 2) - s.beta ** 2) for s in trace.steps]
    strict = all(s.norm_after < s.norm_before for s in trace.steps)
    return {
        "proj_C": float(np.linalg.norm(C.project(xf))),
        "group": A.group_residual(trace.g),
        "conjugation": float(np.linalg.norm(xf - trace.g @ x @ trace.g.conj().T)),
        "norm_change": abs(A.norm(xf) - A.norm(x)),
        "decrement": float(max(dec, default=0.0)),
        "strict_decrease": bool(strict),
    }


# -- bracket factorizations ---------------------------------------------

@dataclass
class GotoWitness:
    """``x = [a, b]`` with a regular."""

    x: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    strategy: str
    residual: float
    a_regular: bool

    def to_dict(self):
        return {"x": encode_matrix(self.x), "a": encode_matrix(self.a), "b": encode_matrix(self.b),
                "strategy": self.strategy, "residual": float(self.residual),
                "a_regular": bool(self.a_regular)}


STRATEGIES = ("descent", "coxeter")


def goto_factorize(A: LieAlgebra, x, strategy: str = "descent", seed=0) -> GotoWitness:
    """Write x as a bracket [a, b] with a regular."""
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    x = A.check_element(x)
    tol = A.tol
    if strategy == "descent":
        C = standard_cartan(A)
        a0 = C.generic_element(seed)
        # reduce further than the bracket solver's acceptance threshold
        trace = descend_to_complement(x, C, target=1e-2 * tol.tol_residual * max(1.0, A.norm(x)),
                                      seed=seed)
        b0 = solve_bracket(A, a0, trace.x_final)
        gi = trace.g.conj().T
        a, b = gi @ a0 @ trace.g, gi @ b0 @ trace.g
    else:
        if A.family != "su":
            raise ParameterError("the coxeter strategy is available for su(n) only")
        lift = coxeter_lift_su(A.n)
        a0 = strengthen_to_regular(A, lift.N, seed)
        _, V = np.linalg.eigh(1j * x)
        V = V * (np.linalg.det(V) ** (-1.0 / A.n))
        xd = V.conj().T @ x @ V
        xd = np.diag(np.diag(xd))
        b0 = solve_bracket(A, a0, xd)
        a, b = V @ a0 @ V.conj().T, V @ b0 @ V.conj().T
    residual = A.norm(A.bracket(a, b) - x)
    return GotoWitness(x, a, b, strategy, residual, A.is_regular(a))


def orthogonality_residual(A: LieAlgebra, x, a) -> float:
    """``max |<x, z>|`` over an orthonormal basis z of the centralizer of a."""
    Z = A.centralizer(a)
    if Z.dim == 0:
        return 0.0
    return float(np.abs(Z.basis @ A.coords(x)).max() / max(1.0, A.norm(x)))


def one_and_half_span(A: LieAlgebra, a, seed=0) -> np.ndarray:
    """A partner b with ``[a, L] + [b, L] = L``.

    b is a generic element of a Cartan subalgebra orthogonal to one
    containing a.
    """
    a = A.check_element(a)
    if A.norm(a) <= A.tol.tol_zero:
        raise ParameterError("a must be nonzero")
    z = a
    if not A.is_regular(a):
        Z = A.centralizer(a)
        rng = np.random.default_rng(seed)
        for _ in range(A.tol.max_iter):
            z = A.element(rng.standard_normal(Z.dim) @ Z.basis)
            if A.is_regular(z):
                break
        else:
            raise SearchFailure("no regular element commuting with a")
    C = CartanSub(A, A.centralizer(z), "custom")
    return orthogonal_cartan(C, seed).generic_element(seed)


def one_and_half_check(A: LieAlgebra, a, b) -> dict:
    s = subspace_sum_dim(A.ad_image(a), A.ad_image(b), A.tol)
    return {"sum_dim": s, "dim": A.dim, "spans": s == A.dim}


def one_and_half_decompose(A: LieAlgebra, a, b, x):
    """``(y, z, residual)`` with ``[a, y] + [b, z] = x`` of minimal norm."""
    M = np.hstack([A.ad_matrix(a), A.ad_matrix(b)])
    sol, res = lstsq_min_norm(M, A.coords(x))
    return A.element(sol[:A.dim]), A.element(sol[A.dim:]), res


# -- projection convexity -----------------------------------------------

@dataclass
class KostantReport:
    samples: int
    max_distance: float
    zero_distance: float
    orbit_size: int

    def to_dict(self):
        return {k: (float(v) if isinstance(v, float) else v) for k, v in self.__dict__.items()}


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed element of SU(n) via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, Rm = np.linalg.qr(Z)
    d = np.diag(Rm)
    Q = Q * (d / np.abs(d))
    return Q * np.linalg.det(Q) ** (-1.0 / n)


def weyl_orbit(C: CartanSub, x) -> np.ndarray:
    """C-coordinates of the Weyl orbit of a diagonal x (distinct points only)."""
    A = C.algebra
    diag = np.diag(x)
    pts = np.array([C.project(np.diag(diag[list(p)])) for p in itertools.permutations(range(A.n))])
    return np.unique(np.round(pts, 12), axis=0)


def kostant_projection_check(A: LieAlgebra, x, samples: int = 200, seed=0) -> KostantReport:
    """Distances from projections of ``Ad(k) x`` onto C to the hull of the Weyl orbit."""
    if A.family != "su" or A.n > 5:
        raise ParameterError("projection convexity check is implemented for su(n), n <= 5")
    if samples < 1:
        raise ParameterError("samples must be positive")
    x = A.check_element(x)
    C = standard_cartan(A)
    off = A.norm(x - C.element(C.project(x)))
    if off > A.tol.tol_residual * max(1.0, A.norm(x)):
        raise StructureError("x must lie in the standard Cartan subalgebra")
    orbit = weyl_orbit(C, x)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        k = haar_unitary(A.n, rng)
        worst = max(worst, hull_distance(orbit, C.project(k @ x @ k.conj().T), A.tol))
    zero = hull_distance(orbit, np.zeros(C.dim), A.tol)
    return KostantReport(samples, worst, zero, len(orbit))
