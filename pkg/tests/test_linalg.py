"""Tests for the dense linear-algebra substrate."""

import numpy as np
import pytest

from rieszlab import (
    KetVector,
    LinearMap,
    adjoint,
    basis_vector,
    from_diagonal,
    hermitian_eig,
    identity,
    inner,
    invert,
    operator_sqrt,
    polar_decompose,
)
from rieszlab.errors import (
    DimensionMismatch,
    NotPositive,
    NotSelfAdjoint,
    NumericallySingular,
)
from rieszlab.sampling import random_conditioned_map, random_unitary, stream_rng


def pentadiagonal_x(dim):
    # independent oracle for the 1 + x^2 truncation used in a few tests
    x = np.zeros((dim, dim))
    for n in range(dim):
        x[n, n] = n + 1.5
        if n + 2 < dim:
            x[n, n + 2] = x[n + 2, n] = np.sqrt((n + 1.0) * (n + 2.0)) / 2.0
    return x


def test_adjoint_identity():
    np.testing.assert_array_equal(adjoint(identity(3)).entries, np.eye(3))


def test_adjoint_real_shift():
    a = LinearMap([[0, 1], [0, 0]])
    np.testing.assert_array_equal(adjoint(a).entries, [[0, 0], [1, 0]])


def test_adjoint_conjugates():
    a = LinearMap([[0, 1j], [0, 0]])
    np.testing.assert_array_equal(adjoint(a).entries, [[0, 0], [-1j, 0]])


def test_adjoint_is_exact_involution():
    rng = stream_rng(11)
    for _ in range(10):
        a = LinearMap(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        np.testing.assert_array_equal(adjoint(adjoint(a)).entries, a.entries)


def test_adjoint_reverses_products():
    rng = stream_rng(12)
    for _ in range(10):
        n = 8
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = adjoint(LinearMap(a) @ LinearMap(b)).entries
        rhs = (adjoint(LinearMap(b)) @ adjoint(LinearMap(a))).entries
        bound = 1e-12 * np.linalg.norm(a) * np.linalg.norm(b) * np.sqrt(n)
        assert np.linalg.norm(lhs - rhs) <= bound


def test_hermitian_eig_diagonal():
    w, v = hermitian_eig(from_diagonal([3, 1, 2]))
    np.testing.assert_allclose(w, [1, 2, 3], atol=1e-14)
    # permutation eigenvectors up to phase
    np.testing.assert_allclose(np.abs(v.entries), np.eye(3)[:, [1, 2, 0]], atol=1e-14)


def test_hermitian_eig_two_by_two():
    a = LinearMap([[0, 1], [1, 0]])
    w, v = hermitian_eig(a)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-14)
    rebuilt = (v.entries * w) @ v.entries.conj().T
    np.testing.assert_allclose(rebuilt, a.entries, atol=1e-14)
    np.testing.assert_allclose(np.abs(v.entries), np.full((2, 2), np.sqrt(0.5)), atol=1e-14)


def test_hermitian_eig_requires_flag():
    with pytest.raises(NotSelfAdjoint):
        hermitian_eig(LinearMap([[0, 1], [0, 0]]))


def test_hermitian_eig_residuals_hermite_truncation():
    a = LinearMap(pentadiagonal_x(8))
    w, v = hermitian_eig(a)
    assert w[0] >= 1.0  # Rayleigh: 1 + x^2 >= 1 survives truncation
    scale = np.linalg.norm(a.entries)
    assert np.linalg.norm(a.entries @ v.entries - v.entries * w) <= 1e-10 * np.sqrt(8) * scale
    assert np.linalg.norm(v.entries.conj().T @ v.entries - np.eye(8)) <= 1e-10 * np.sqrt(8)


def test_operator_sqrt_diagonal():
    np.testing.assert_allclose(
        operator_sqrt(from_diagonal([1, 4, 9])).entries, np.diag([1, 2, 3]).astype(complex), atol=1e-14
    )


def test_operator_sqrt_identity():
    np.testing.assert_allclose(operator_sqrt(identity(4)).entries, np.eye(4), atol=1e-15)


def test_operator_sqrt_of_outer_product_frame():
    # K = sum of outer products of the columns of T = diag(1,2,3), summed by hand
    t = np.diag([1.0, 2.0, 3.0]).astype(complex)
    k = np.zeros((3, 3), dtype=complex)
    for col in range(3):
        phi = t[:, col]
        k += np.outer(phi, phi.conj())
    np.testing.assert_allclose(operator_sqrt(LinearMap(k)).entries, t, atol=1e-12)


def test_operator_sqrt_squares_back_and_commutes_with_conjugation():
    rng = stream_rng(13)
    for n in (5, 16, 32):
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = LinearMap(b @ b.conj().T + 0.1 * np.eye(n))
        root = operator_sqrt(a)
        assert root.positive
        err = np.linalg.norm(root.entries @ root.entries - a.entries)
        assert err <= 1e-9 * np.linalg.norm(a.entries)
        u = random_unitary(n, rng).entries
        conjugated = operator_sqrt(LinearMap(u @ a.entries @ u.conj().T)).entries
        expected = u @ root.entries @ u.conj().T
        assert np.linalg.norm(conjugated - expected) <= 1e-9 * np.linalg.norm(expected)


def test_operator_sqrt_clamps_rounded_zero_eigenvalues():
    v = np.array([1.0, 1.0, 1.0]) / np.sqrt(3)
    rank_one = LinearMap(np.outer(v, v))  # eigenvalues {1, 0, 0} up to rounding
    root = operator_sqrt(rank_one)
    np.testing.assert_allclose(root.entries @ root.entries, rank_one.entries, atol=1e-12)


def test_operator_sqrt_rejects_indefinite():
    with pytest.raises(NotPositive):
        operator_sqrt(from_diagonal([1, -1]))


def test_invert_diagonal():
    np.testing.assert_allclose(
        invert(from_diagonal([1, 2, 4])).entries, np.diag([1, 0.5, 0.25]).astype(complex), atol=1e-15
    )


def test_invert_unipotent():
    inv = invert(LinearMap([[1, 1], [0, 1]]))
    np.testing.assert_allclose(inv.entries, [[1, -1], [0, 1]], atol=1e-14)


def test_invert_zero_matrix():
    with pytest.raises(NumericallySingular) as excinfo:
        invert(LinearMap(np.zeros((3, 3))))
    assert excinfo.value.sigma_min == 0.0


def test_invert_roundtrip_and_cond():
    rng = stream_rng(14)
    for _ in range(10):
        t = random_conditioned_map(12, 50.0, rng)
        inv = invert(t)
        assert np.isfinite(inv.cond_estimate)
        assert abs(inv.cond_estimate - 50.0) / 50.0 <= 1e-8
        back = invert(inv)
        err = np.linalg.norm(back.entries - t.entries) / np.linalg.norm(t.entries)
        assert err <= 1e-8 * 50.0**2
        resid = np.linalg.norm(t.entries @ inv.entries - np.eye(12))
        assert resid <= 1e-8 * inv.cond_estimate * np.sqrt(12)


def test_polar_positive_diagonal():
    factors = polar_decompose(from_diagonal([1, 2]))
    np.testing.assert_allclose(factors.unitary_part.entries, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(factors.positive_part.entries, np.diag([1, 2]).astype(complex), atol=1e-14)


def test_polar_swap_example():
    # T T* = diag(4, 1), so P = diag(2, 1) and U swaps the basis; P U = T by hand
    t = LinearMap([[0, 2], [1, 0]])
    factors = polar_decompose(t)
    np.testing.assert_allclose(factors.positive_part.entries, np.diag([2.0, 1.0]), atol=1e-14)
    np.testing.assert_allclose(factors.unitary_part.entries, [[0, 1], [1, 0]], atol=1e-14)
    np.testing.assert_allclose(
        factors.positive_part.entries @ factors.unitary_part.entries, t.entries, atol=1e-14
    )


def test_polar_of_negated_identity():
    factors = polar_decompose(LinearMap(-np.eye(2)))
    np.testing.assert_allclose(factors.unitary_part.entries, -np.eye(2), atol=1e-14)
    np.testing.assert_allclose(factors.positive_part.entries, np.eye(2), atol=1e-14)


@pytest.mark.parametrize("dim", [4, 16, 32])
def test_polar_random_reassembly(dim):
    rng = stream_rng(15 + dim)
    for _ in range(34):
        t = random_conditioned_map(dim, 100.0, rng)
        factors = polar_decompose(t)
        u, p = factors.unitary_part, factors.positive_part
        assert p.positive
        assert np.linalg.norm(u.entries.conj().T @ u.entries - np.eye(dim)) <= 1e-10 * np.sqrt(dim)
        err = np.linalg.norm(p.entries @ u.entries - t.entries)
        assert err <= 1e-9 * np.linalg.norm(t.entries)


def test_polar_rejects_singular():
    with pytest.raises(NumericallySingular):
        polar_decompose(from_diagonal([1.0, 1e-13]))


def test_flag_certification():
    assert from_diagonal([1, 2]).self_adjoint
    assert from_diagonal([1, 2]).positive
    assert not from_diagonal([1, -2]).positive
    assert not LinearMap([[0, 1], [0, 0]]).self_adjoint
    # asymmetry below the certification threshold still counts as self-adjoint
    a = np.eye(2) + 1e-14 * np.array([[0, 1], [0, 0]])
    assert LinearMap(a).self_adjoint


def test_ket_vectors():
    e1 = basis_vector(1, 3)
    assert e1.dim == 3 and e1.norm == 1.0
    assert inner(e1, basis_vector(1, 3)) == 1.0
    assert inner(e1, basis_vector(0, 3)) == 0.0
    with pytest.raises(DimensionMismatch):
        inner(e1, basis_vector(0, 4))
    with pytest.raises(ValueError):
        KetVector(np.array([1.0, np.nan]))


def test_matmul_dimension_guard():
    with pytest.raises(DimensionMismatch):
        identity(3) @ identity(4)
    with pytest.raises(DimensionMismatch):
        identity(3) @ basis_vector(0, 4)


def test_cond_estimate():
    assert from_diagonal([1, 2, 4]).cond_estimate == pytest.approx(4.0)
    assert LinearMap(np.zeros((2, 2)) + np.diag([1, 0])).cond_estimate == np.inf
