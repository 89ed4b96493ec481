import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpbures import matcore
from cpbures.errors import NonHermitianError, NonSquareError, NotPsdError


def rand_hermitian(rng, n):
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (h + h.conj().T) / 2


def rand_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestHermEig:
    def test_identity(self):
        eig = matcore.herm_eig(np.eye(2))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0])
        u = eig.eigenvectors
        assert matcore.op_norm(u.conj().T @ u - np.eye(2)) < 1e-12

    def test_two_by_two_real(self):
        # characteristic polynomial of [[1,-1],[-1,1]]: l^2 - 2l = 0
        eig = matcore.herm_eig(np.array([[1, -1], [-1, 1.0]]))
        np.testing.assert_allclose(eig.eigenvalues, [0.0, 2.0], atol=1e-12)

    def test_pauli_y(self):
        eig = matcore.herm_eig(np.array([[0, 1j], [-1j, 0]]))
        np.testing.assert_allclose(eig.eigenvalues, [-1.0, 1.0], atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            matcore.herm_eig(np.array([[0, 1], [0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(NonSquareError):
            matcore.herm_eig(np.zeros((2, 3)))

    def test_phase_convention_deterministic(self):
        h = rand_hermitian(np.random.default_rng(5), 4)
        u1 = matcore.herm_eig(h).eigenvectors
        u2 = matcore.herm_eig(h.copy()).eigenvectors
        np.testing.assert_array_equal(u1, u2)
        for k in range(4):
            pivot = u1[np.argmax(np.abs(u1[:, k])), k]
            assert abs(pivot.imag) < 1e-14 and pivot.real > 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 16), st.integers(0, 10**6))
    def test_residuals_random(self, n, seed):
        h = rand_hermitian(np.random.default_rng(seed), n)
        eig = matcore.herm_eig(h)
        scale = max(1.0, matcore.op_norm(h))
        assert matcore.op_norm(h - eig.reconstruct()) <= 1e-10 * scale
        u = eig.eigenvectors
        assert matcore.op_norm(u.conj().T @ u - np.eye(n)) <= 1e-10
        assert np.all(np.diff(eig.eigenvalues) >= -1e-14)


class TestOpNorm:
    def test_zero(self):
        assert matcore.op_norm(np.zeros((3, 3))) == 0.0

    def test_unitary(self):
        u = rand_unitary(np.random.default_rng(0), 3)
        assert abs(matcore.op_norm(u) - 1.0) < 1e-12

    def test_known_value(self):
        assert abs(matcore.op_norm(np.array([[1, -1], [-1, 1.0]])) - 2.0) < 1e-12

    def test_unitary_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            u, v = rand_unitary(rng, 4), rand_unitary(rng, 4)
            a, b = matcore.op_norm(u @ m @ v), matcore.op_norm(m)
            assert abs(a - b) <= 1e-10 * max(1.0, b)


class TestIsPsd:
    def test_identity(self):
        assert matcore.is_psd(np.eye(3), 1e-8)

    def test_negative_identity(self):
        assert not matcore.is_psd(-np.eye(3), 1e-8)

    def test_singular_psd(self):
        assert matcore.is_psd(np.array([[1, -1], [-1, 1.0]]), 1e-8)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            matcore.is_psd(np.array([[0, 1], [0, 0.0]]), 1e-8)


class TestPsdSqrt:
    def test_identity(self):
        np.testing.assert_allclose(matcore.psd_sqrt(np.eye(2)), np.eye(2))

    def test_scalar(self):
        np.testing.assert_allclose(matcore.psd_sqrt(4 * np.eye(2)), 2 * np.eye(2))

    def test_spectral_calculus_by_hand(self):
        # [[2,1],[1,2]] has eigenpairs (1, (1,-1)/sqrt2) and (3, (1,1)/sqrt2);
        # its root keeps the eigenvectors with eigenvalues (1, sqrt3)
        h = np.array([[2, 1], [1, 2.0]])
        r = matcore.psd_sqrt(h)
        np.testing.assert_allclose(r @ r, h, atol=1e-12)
        np.testing.assert_allclose(np.linalg.eigvalsh(r), [1.0, np.sqrt(3)])
        expected = 0.5 * np.array(
            [[1 + np.sqrt(3), np.sqrt(3) - 1], [np.sqrt(3) - 1, 1 + np.sqrt(3)]]
        )
        np.testing.assert_allclose(r, expected, atol=1e-12)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPsdError):
            matcore.psd_sqrt(np.diag([1.0, -0.5]))

    def test_clamps_tiny_negatives(self):
        r = matcore.psd_sqrt(np.diag([1.0, -1e-12]))
        np.testing.assert_allclose(r, np.diag([1.0, 0.0]), atol=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 10**6))
    def test_round_trip_random(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = a.conj().T @ a
        r = matcore.psd_sqrt(h)
        scale = max(1.0, matcore.op_norm(h))
        assert matcore.op_norm(r @ r - h) <= 1e-9 * scale
        assert matcore.is_psd(r, 1e-10)
