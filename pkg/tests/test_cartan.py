import numpy as np
import pytest

from orthocartan.cartan import (CartanSub, cartan_from_matrices, circulant, circulant_cartan_sp,
                                circulant_cartan_su, circulant_diagonalize, conjugate_by,
                                conjugate_to_standard, family_orthogonal_cartan, orthocartan_so,
                                orthocartan_so_generators, orthogonal_cartan, so4_generators,
                                so6_generators, sp_circulant_matrices, standard_cartan,
                                su_circulant_vectors, verify_cartan, verify_orthogonal)
from orthocartan.exceptions import DimensionError, ParameterError
from orthocartan.liealg import algebra
from orthocartan.numkernel import mat_exp, subspace_distance
from orthocartan.serialize import decode_matrix

SIZES = [("su", n) for n in range(2, 9)] + [("so", n) for n in range(3, 11)] \
    + [("sp", n) for n in range(1, 5)]


def is_circulant(M):
    n = M.shape[0]
    return all(np.allclose(np.roll(M[0], r), M[r]) for r in range(n))


@pytest.mark.parametrize("family,n", SIZES)
def test_standard_and_partner_are_orthogonal_cartans(family, n):
    A = algebra(family, n)
    C = standard_cartan(A)
    C2 = family_orthogonal_cartan(A)
    for X in (C, C2):
        rep = verify_cartan(X)
        assert rep.ok, rep.residuals
        assert X.dim == A.rank
    assert verify_orthogonal(C, C2) < 1e-8


def test_standard_so5_block_shape():
    C = standard_cartan(algebra("so", 5))
    assert C.dim == 2
    for M in C.matrices:
        assert np.allclose(M[4], 0) and np.allclose(M[:, 4], 0)
        # only the off-diagonal 2x2 blocks coupling {0,1} with {2,3}
        assert np.allclose(M[:2, :2], 0) and np.allclose(M[2:4, 2:4], 0)
        assert not np.allclose(M[:2, 2:4], 0)


def test_standard_su_is_traceless_imaginary_diagonal():
    for M in standard_cartan(algebra("su", 4)).matrices:
        assert np.allclose(M, np.diag(np.diag(M)))
        assert np.allclose(np.diag(M).real, 0)
        assert abs(np.trace(M)) < 1e-14


# -- circulants ---------------------------------------------------------------

def test_circulant_diagonalize_n2():
    a0, a1 = 0.3, -1.7
    U, lam = circulant_diagonalize([a0, a1])
    assert np.allclose(U, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert np.allclose(lam, [a0 + a1, a0 - a1])


def test_circulant_of_unit_vector_is_identity():
    U, lam = circulant_diagonalize([1, 0, 0, 0])
    assert np.allclose(circulant([1, 0, 0, 0]), np.eye(4))
    assert np.allclose(lam, 1)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_circulant_diagonalize_against_fft(n):
    rng = np.random.default_rng(n)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    U, lam = circulant_diagonalize(a)
    # lambda_l = sum_j eps^{lj} a_j with eps = e^{2 pi i/n}, i.e. n * ifft(a)
    assert np.allclose(lam, n * np.fft.ifft(a))
    assert np.allclose(U, U.T)
    assert np.linalg.norm(U @ U.conj().T - np.eye(n)) < 1e-13
    assert np.linalg.norm(circulant(a) - U @ np.diag(lam) @ U.conj().T) < 1e-10


def test_circulant_su2_is_spanned_by_pauli_like_matrix():
    C = circulant_cartan_su(2)
    assert C.dim == 1
    target = cartan_from_matrices(C.algebra, [np.array([[0, 1j], [1j, 0]])])
    assert subspace_distance(C.space, target.space) < 1e-14


@pytest.mark.parametrize("n", range(2, 9))
def test_circulant_su_constraints(n):
    for a in su_circulant_vectors(n):
        assert abs(a[0]) < 1e-14
        for l in range(1, n):
            assert abs(a[n - l] + np.conj(a[l])) < 1e-14
    C = circulant_cartan_su(n)
    assert C.dim == n - 1
    assert all(is_circulant(M) for M in C.matrices)
    assert verify_cartan(C).ok


@pytest.mark.parametrize("n", range(1, 5))
def test_circulant_sp_dimension_and_membership(n):
    A = algebra("sp", n)
    C = circulant_cartan_sp(n)
    assert C.dim == n
    for M in C.matrices:
        assert is_circulant(M)
        assert A.contains(M)
    assert verify_cartan(C).ok
    assert verify_orthogonal(standard_cartan(A), C) < 1e-8


@pytest.mark.parametrize("n", range(1, 5))
def test_circulant_sp_quaternionic_dimension_count(n):
    # real dimension of all 2n x 2n circulants equals four copies of C'
    m = 2 * n
    basis = []
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1
        for s in (1, 1j):
            M = circulant(s * e)
            basis.append(np.concatenate([M.real.ravel(), M.imag.ravel()]))
    real_dim = np.linalg.matrix_rank(np.array(basis))
    assert real_dim == 4 * n == 4 * circulant_cartan_sp(n).dim
    assert len(sp_circulant_matrices(n)) == n


# -- so(n) recursion ----------------------------------------------------------

def test_so4_generators_as_printed():
    A = algebra("so", 4)
    x1, x2 = so4_generators()
    assert np.allclose(x1, [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
    assert np.allclose(x2, [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
    assert np.allclose(A.bracket(x1, x2), 0)
    assert abs(A.inner(x1, x2)) < 1e-14
    assert verify_orthogonal(standard_cartan(A), orthocartan_so(4)) < 1e-14


def test_so6_generators_commute():
    A = algebra("so", 6)
    xs = so6_generators()
    for i in range(3):
        assert A.contains(xs[i])
        for j in range(3):
            assert np.allclose(A.bracket(xs[i], xs[j]), 0)
    assert orthocartan_so(6).dim == 3


@pytest.mark.parametrize("n", [8, 10, 12])
def test_hat_recursion_commutes(n):
    A = algebra("so", n)
    xs = orthocartan_so_generators(n)
    assert len(xs) == n // 2
    assert max(np.abs(A.bracket(x, y)).max() for x in xs for y in xs) < 1e-14
    assert verify_orthogonal(standard_cartan(A), orthocartan_so(n)) < 1e-14


def test_so7_partner_orthogonal():
    A = algebra("so", 7)
    assert verify_orthogonal(standard_cartan(A), orthocartan_so(7)) < 1e-8


def test_so_recursion_rejects_small_n():
    with pytest.raises(ParameterError):
        orthocartan_so_generators(2)


# -- verification -------------------------------------------------------------

def test_verify_detects_non_abelian():
    A = algebra("su", 2)
    C = CartanSub(A, A.span(A.basis[:2]))
    rep = verify_cartan(C)
    assert not rep.abelian and not rep.ok


def test_verify_orthogonal_self_and_mismatch():
    C = standard_cartan(algebra("su", 3))
    assert verify_orthogonal(C, C) >= 1 - 1e-12
    with pytest.raises(DimensionError):
        verify_orthogonal(C, standard_cartan(algebra("su", 4)))


# -- conjugation ------------------------------------------------------------

def random_cartan(A, seed):
    return CartanSub(A, A.centralizer(A.random_regular(seed)))


@pytest.mark.parametrize("family,n", [("su", 3), ("su", 5), ("so", 4), ("so", 7), ("sp", 2), ("sp", 3)])
def test_conjugate_to_standard_postcondition(family, n):
    A = algebra(family, n)
    for C in (random_cartan(A, 11), family_orthogonal_cartan(A), standard_cartan(A)):
        g = conjugate_to_standard(C)
        assert A.group_residual(g) < 1e-8
        assert subspace_distance(conjugate_by(C, g).space, standard_cartan(A).space) < 1e-8


def test_orthogonal_cartan_of_standard_su4_is_circulant():
    C = standard_cartan(algebra("su", 4))
    assert subspace_distance(orthogonal_cartan(C).space, circulant_cartan_su(4).space) < 1e-8


@pytest.mark.parametrize("family,n", [("su", 4), ("so", 6), ("so", 9), ("sp", 3)])
def test_orthogonal_cartan_of_conjugated_standard(family, n):
    A = algebra(family, n)
    g = mat_exp(A.random_element(4))
    C = conjugate_by(standard_cartan(A), g)
    C2 = orthogonal_cartan(C)
    assert verify_cartan(C2).ok
    assert verify_orthogonal(C, C2) < 1e-8


def test_cartan_json_roundtrip():
    C = family_orthogonal_cartan(algebra("sp", 2))
    d = C.to_dict()
    assert (d["family"], d["n"]) == ("sp", 2)
    mats = [decode_matrix(b) for b in d["basis"]]
    assert np.allclose(mats, C.matrices)
