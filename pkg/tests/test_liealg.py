import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from orthocartan.exceptions import DimensionError, ParameterError, StructureError
from orthocartan.liealg import (FAMILIES, algebra, block_to_circulant_frame, quaternion_matrix,
                                symplectic_form, symplectic_pairs)
from orthocartan.numkernel import mat_exp

SIZES = [("su", n) for n in range(2, 9)] + [("so", n) for n in range(3, 11)] \
    + [("sp", n) for n in range(1, 5)]
SMALL = [("su", 2), ("su", 3), ("su", 4), ("so", 3), ("so", 5), ("so", 6), ("sp", 1), ("sp", 2)]


def expected_dim(family, n):
    return {"su": n * n - 1, "so": n * (n - 1) // 2, "sp": n * (2 * n + 1)}[family]


def expected_rank(family, n):
    return {"su": n - 1, "so": n // 2, "sp": n}[family]


def complexified_basis(A):
    """Orthonormal basis (columns, in vec-space of gl(m, C)) of the complexification.

    Built from the defining linear constraints only, independently of the
    package's own basis.
    """
    m = A.matrix_size
    I = np.eye(m)
    K = commutation_matrix(m)
    # row-major vec: vec(A X B) = (A kron B^T) vec(X), vec(X^T) = K vec(X)
    if A.family == "su":
        M = I.reshape(1, -1)                                   # tr X = 0
    elif A.family == "so":
        M = np.eye(m * m) + K                                  # X + X^T = 0
    else:
        J = A.J
        M = np.kron(J, I) + np.kron(I, J.T) @ K                # J X + X^T J = 0
    return scipy.linalg.null_space(M)


def commutation_matrix(m):
    K = np.zeros((m * m, m * m))
    for i in range(m):
        for j in range(m):
            K[i * m + j, j * m + i] = 1
    return K


def killing_oracle(A, X, Y):
    """tr(ad X ad Y) over the complexified algebra, ad via Kronecker products."""
    m = A.matrix_size
    I = np.eye(m)
    B = complexified_basis(A)

    def ad(Z):
        # vec(ZW - WZ) for row-major vec
        return np.kron(Z, I) - np.kron(I, Z.T)

    return np.trace(B.conj().T @ ad(X) @ ad(Y) @ B).real


@pytest.mark.parametrize("family,n", SIZES)
def test_dimension_and_rank(family, n):
    A = algebra(family, n)
    assert A.dim == expected_dim(family, n)
    assert A.rank == expected_rank(family, n)
    assert A.basis.shape == (A.dim, A.matrix_size, A.matrix_size)


@pytest.mark.parametrize("family,n", SIZES)
def test_basis_is_orthonormal_for_negative_killing(family, n):
    A = algebra(family, n)
    d = A.dim
    ads = np.array([A.ad_matrix(E) for E in A.basis])
    G = -np.einsum("ipq,jqp->ij", ads, ads)
    assert np.abs(G - np.eye(d)).max() < 1e-12
    assert all(A.contains(E) for E in A.basis)


@pytest.mark.parametrize("family,n", SMALL)
def test_inner_matches_kronecker_oracle(family, n):
    A = algebra(family, n)
    X, Y = A.random_element(1), A.random_element(2)
    assert A.inner(X, Y) == pytest.approx(-killing_oracle(A, X, Y), rel=1e-10)
    assert A.trace_inner(X, Y) == pytest.approx(A.inner(X, Y), rel=1e-10)


@pytest.mark.parametrize("family,n,c", [("su", 2, 4), ("su", 3, 6), ("su", 5, 10), ("so", 3, 1),
                                        ("so", 5, 3), ("so", 8, 6), ("sp", 1, 4), ("sp", 2, 6),
                                        ("sp", 3, 8)])
def test_trace_form_constant(family, n, c):
    A = algebra(family, n)
    assert A.trace_form_constant == pytest.approx(c, rel=1e-10)
    # oracle: Killing form of the complexification at a random pair
    X, Y = A.random_element(5), A.random_element(6)
    assert killing_oracle(A, X, Y) == pytest.approx(c * np.trace(X @ Y).real, rel=1e-9)


def test_sp1_is_su2():
    # the two algebras are isomorphic, so the Killing constants relative to
    # the trace of 2x2 matrices agree
    assert algebra("sp", 1).trace_form_constant == pytest.approx(algebra("su", 2).trace_form_constant)


@pytest.mark.parametrize("family,n", [("su", 1), ("so", 2), ("sp", 0), ("gl", 3), ("su", 2.5)])
def test_invalid_descriptors(family, n):
    with pytest.raises(ParameterError):
        algebra(family, n)


@pytest.mark.parametrize("family,n", SMALL)
def test_coords_roundtrip_and_bracket_closure(family, n):
    A = algebra(family, n)
    X, Y = A.random_element(3), A.random_element(4)
    assert np.allclose(A.element(A.coords(X)), X, atol=1e-13)
    Z = A.bracket(X, Y)
    assert A.membership_residual(Z) < 1e-12
    assert A.norm(X) == pytest.approx(np.linalg.norm(A.coords(X)))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2 ** 32 - 1))
def test_jacobi_and_invariance(fn, seed):
    A = algebra(*fn)
    rng = np.random.default_rng(seed)
    X, Y, Z = (A.element(rng.standard_normal(A.dim)) for _ in range(3))
    br = A.bracket
    jac = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))
    assert np.linalg.norm(jac) < 1e-10 * (1 + np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(Z))
    # ad-invariance of the form
    assert A.trace_inner(br(X, Y), Z) == pytest.approx(-A.trace_inner(Y, br(X, Z)), abs=1e-9)


@pytest.mark.parametrize("family,n", SMALL)
def test_group_membership_of_exponentials(family, n):
    A = algebra(family, n)
    g = mat_exp(A.random_element(0))
    assert A.group_residual(g) < 1e-12
    assert A.group_residual(2 * g) > 1e-3


def test_membership_rejects_wrong_structure():
    A = algebra("su", 3)
    assert not A.contains(np.eye(3) * 1j)          # not traceless
    assert not A.contains(np.ones((3, 3)))
    with pytest.raises(StructureError):
        A.check_element(np.ones((3, 3)))
    with pytest.raises(DimensionError):
        A.check_element(np.zeros((2, 2)))
    B = algebra("so", 4)
    assert not B.contains(1j * np.diag([1, -1, 0, 0]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symplectic_form(n):
    J = symplectic_form(n)
    assert np.allclose(J.T, -J)
    assert np.allclose(J @ J, -np.eye(2 * n))
    pairs = symplectic_pairs(n)
    assert sorted(i for p in pairs for i in p) == list(range(2 * n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quaternionic_frame(n):
    # [[u, -conj v], [v, conj u]] with u + jv skew-quaternionic lands in sp(n)
    rng = np.random.default_rng(n)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u = (Z - Z.conj().T) / 2
    W = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    v = W + W.T
    M = quaternion_matrix(u, v)
    assert algebra("sp", n).contains(M)
    Q = block_to_circulant_frame(n)
    assert np.allclose(Q @ Q.T, np.eye(2 * n))


@pytest.mark.parametrize("family,n", SMALL)
def test_centralizer_of_regular_element_has_rank_dimension(family, n):
    A = algebra(family, n)
    X = A.random_regular(0)
    assert A.is_regular(X)
    assert A.centralizer(X).dim == A.rank
    assert A.ad_image(X).dim == A.dim - A.rank
    assert A.centralizer(np.zeros_like(X)).dim == A.dim


def test_families_constant():
    assert FAMILIES == ("su", "so", "sp")
