import json

import numpy as np
import pytest
from conftest import E11, E12, transpose_gap_pair

from cpbures import cpmap, matcore
from cpbures.cpmap import CpMap, KrausSet
from cpbures.errors import (
    DimensionMismatchError,
    NotPsdError,
    ValidationError,
    ZeroMapError,
)


class TestChoiKraus:
    def test_identity_choi(self):
        j = cpmap.choi_from_kraus(KrausSet(3, 3, np.eye(3, dtype=complex)[None]))
        assert np.linalg.matrix_rank(j) == 1
        assert abs(np.trace(j) - 3.0) < 1e-12
        # J = sum_ij E_ij (x) E_ij
        expected = np.zeros((9, 9), dtype=complex)
        for i in range(3):
            for k in range(3):
                expected[i * 3 + i, k * 3 + k] = 1.0
        np.testing.assert_allclose(j, expected, atol=1e-14)

    def test_corner_e11(self):
        j = cpmap.choi_from_kraus(KrausSet(2, 2, E11[None]))
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0  # E_11 (x) E_11
        np.testing.assert_allclose(j, expected, atol=1e-14)

    def test_corner_e12(self):
        j = cpmap.choi_from_kraus(KrausSet(2, 2, E12[None]))
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0  # E_11 (x) E_22
        np.testing.assert_allclose(j, expected, atol=1e-14)

    def test_kraus_from_choi_identity(self):
        phi = CpMap.identity(2)
        assert phi.kraus_rank == 1
        k = phi.kraus.blocks[0]
        # single block equal to I up to a global phase
        assert abs(abs(np.trace(k)) - 2.0) < 1e-10

    def test_kraus_from_choi_diagonal(self):
        j = np.zeros((4, 4), dtype=complex)
        j[0, 0] = 1.0
        j[1, 1] = 1.0  # E11(x)E11 + E11(x)E22
        ks = cpmap.kraus_from_choi(j, 2, 2)
        assert ks.rank == 2
        np.testing.assert_allclose(
            cpmap.choi_from_kraus(ks), j, atol=1e-12
        )

    def test_rank_three(self):
        rng = np.random.default_rng(0)
        w = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        j = np.einsum("ka,kb->ab", w, w.conj())
        assert cpmap.kraus_from_choi(j, 2, 2).rank == 3

    def test_round_trip_random(self):
        rng = np.random.default_rng(7)
        for _ in range(15):
            n, m = rng.integers(1, 5), rng.integers(1, 5)
            r = rng.integers(1, 5)
            phi = cpmap.random_cp_map(rng, int(n), int(m), int(r))
            j = phi.choi
            ks = cpmap.kraus_from_choi(j, int(n), int(m))
            err = matcore.op_norm(cpmap.choi_from_kraus(ks) - j)
            assert err <= 1e-8 * matcore.op_norm(j)
            # minimal blocks are linearly independent
            flat = ks.blocks.reshape(ks.rank, -1)
            gram = flat @ flat.conj().T
            assert np.linalg.eigvalsh((gram + gram.conj().T) / 2)[0] > 1e-10

    def test_zero_rejected(self):
        with pytest.raises(ZeroMapError):
            cpmap.kraus_from_choi(np.zeros((4, 4)), 2, 2)
        with pytest.raises(ZeroMapError):
            CpMap.from_choi(np.zeros((4, 4)), 2, 2)

    def test_not_psd_rejected(self):
        with pytest.raises(NotPsdError):
            CpMap.from_choi(np.diag([1.0, -0.1, 1.0, 1.0]), 2, 2)


class TestApply:
    def test_identity(self):
        phi = CpMap.identity(2)
        a = np.array([[1, 2j], [3, 4.0]])
        np.testing.assert_allclose(phi(a), a, atol=1e-12)

    def test_transpose_gap_images(self):
        phi1, phi2 = transpose_gap_pair()
        a = np.array([[1, 2], [3, 4.0]], dtype=complex)
        np.testing.assert_allclose(
            phi2(a), np.array([[8, 0], [0, 2.0]]), atol=1e-10
        )
        np.testing.assert_allclose(
            phi1(E11), np.array([[1, 0], [0, 2.0]]), atol=1e-10
        )
        # difference acts as the transpose
        np.testing.assert_allclose(phi1(a) - phi2(a), a.T, atol=1e-10)

    def test_linear_and_positive(self):
        rng = np.random.default_rng(3)
        phi = cpmap.random_cp_map(rng, 3, 2, 2)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_allclose(
            phi(a + 2j * b), phi(a) + 2j * phi(b), atol=1e-10
        )
        assert matcore.is_psd(phi(a.conj().T @ a), 1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            CpMap.identity(2).apply(np.eye(3))


class TestComposeAmplify:
    def test_compose_with_identity(self):
        rng = np.random.default_rng(4)
        phi = cpmap.random_cp_map(rng, 2, 2, 2)
        left = cpmap.compose(CpMap.identity(2), phi)
        right = cpmap.compose(phi, CpMap.identity(2))
        assert matcore.op_norm(left.choi - phi.choi) < 1e-10
        assert matcore.op_norm(right.choi - phi.choi) < 1e-10

    def test_compose_unitaries(self):
        rng = np.random.default_rng(5)
        z1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        z2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        u = np.linalg.qr(z1)[0]
        v = np.linalg.qr(z2)[0]
        comp = cpmap.compose(
            CpMap.from_kraus(v[None], 2, 2), CpMap.from_kraus(u[None], 2, 2)
        )
        expected = CpMap.from_kraus((u @ v)[None], 2, 2)
        assert matcore.op_norm(comp.choi - expected.choi) < 1e-10

    def test_compose_associative(self):
        rng = np.random.default_rng(6)
        f = cpmap.random_cp_map(rng, 2, 3, 2)
        g = cpmap.random_cp_map(rng, 3, 2, 2)
        h = cpmap.random_cp_map(rng, 2, 2, 2)
        lhs = cpmap.compose(h, cpmap.compose(g, f))
        rhs = cpmap.compose(cpmap.compose(h, g), f)
        assert matcore.op_norm(lhs.choi - rhs.choi) <= 1e-9 * matcore.op_norm(
            lhs.choi
        )

    def test_compose_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cpmap.compose(CpMap.identity(3), CpMap.identity(2))

    def test_amplify_trivial(self):
        phi = CpMap.identity(2)
        assert cpmap.amplify(phi, 1) is phi
        amp = cpmap.amplify(phi, 2)
        assert matcore.op_norm(amp.choi - CpMap.identity(4).choi) < 1e-10

    def test_amplify_preserves_norm(self):
        rng = np.random.default_rng(8)
        phi = cpmap.random_cp_map(rng, 2, 2, 3)
        assert (
            abs(cpmap.cp_norm(cpmap.amplify(phi, 2)) - cpmap.cp_norm(phi))
            < 1e-10
        )


class TestNorms:
    def test_cp_norm_unital(self):
        assert abs(cpmap.cp_norm(CpMap.identity(3)) - 1.0) < 1e-12

    def test_cp_norm_scaling(self):
        phi = CpMap.from_kraus(np.sqrt(2) * np.eye(2, dtype=complex)[None], 2, 2)
        assert abs(cpmap.cp_norm(phi) - 2.0) < 1e-12

    def test_cp_norm_transpose_gap(self):
        phi1, _ = transpose_gap_pair()
        assert abs(cpmap.cp_norm(phi1) - 3.0) < 1e-10

    def test_cb_norm_identity(self):
        assert abs(cpmap.cb_norm(CpMap.identity(2).choi, 2, 2) - 1.0) < 1e-6

    def test_cb_norm_transpose(self):
        phi1, phi2 = transpose_gap_pair()
        cb = cpmap.cb_norm(phi1.choi - phi2.choi, 2, 2)
        assert abs(cb - 2.0) < 1e-6
        # level-1 norm of the transpose map is 1, strictly below cb
        level1 = cpmap.map_norm_sampled(
            phi1.choi - phi2.choi, 2, 2, samples=300, seed=0
        )
        assert abs(level1 - 1.0) < 1e-3
        assert cb >= level1 - 1e-6

    def test_cb_equals_cp_for_cp_maps(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            phi = cpmap.random_cp_map(rng, 2, 2, int(rng.integers(1, 4)))
            assert (
                abs(cpmap.cb_norm(phi.choi, 2, 2) - cpmap.cp_norm(phi)) < 1e-6
            )

    def test_cb_stable_under_ampliation(self):
        rng = np.random.default_rng(10)
        a = cpmap.random_cp_map(rng, 2, 2, 2)
        b = cpmap.random_cp_map(rng, 2, 2, 2)
        diff = a.choi - b.choi
        cb1 = cpmap.cb_norm(diff, 2, 2)
        amp = cpmap.amplify(a, 2).choi - cpmap.amplify(b, 2).choi
        cb2 = cpmap.cb_norm(amp, 4, 4)
        assert abs(cb1 - cb2) < 1e-5


class TestSerialization:
    def test_choi_round_trip_bit_for_bit(self):
        rng = np.random.default_rng(11)
        phi = cpmap.random_cp_map(rng, 2, 3, 2)
        text = json.dumps(cpmap.to_json_dict(phi, form="choi"))
        back = cpmap.from_json_dict(json.loads(text))
        assert np.array_equal(back.choi, phi.choi)
        # re-serializing reproduces the file byte for byte
        assert json.dumps(cpmap.to_json_dict(back, form="choi")) == text

    def test_kraus_round_trip(self):
        rng = np.random.default_rng(11)
        phi = cpmap.random_cp_map(rng, 2, 3, 2)
        text = json.dumps(cpmap.to_json_dict(phi, form="kraus"))
        back = cpmap.from_json_dict(json.loads(text))
        # stored blocks are exact; the Choi rebuild sees only product rounding
        assert matcore.op_norm(back.choi - phi.choi) < 1e-13

    def test_exactly_one_of_kraus_choi(self):
        from cpbures.errors import ParseError

        phi = CpMap.identity(2)
        d = cpmap.to_json_dict(phi, form="kraus")
        d["choi"] = cpmap.to_json_dict(phi, form="choi")["choi"]
        with pytest.raises(ParseError):
            cpmap.from_json_dict(d)
        with pytest.raises(ParseError):
            cpmap.from_json_dict({"dim_in": 2, "dim_out": 2})

    def test_validation_error_names_eigenvalue(self):
        d = {
            "dim_in": 2,
            "dim_out": 1,
            "choi": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.1, 0.0]]],
        }
        with pytest.raises(ValidationError, match="-0.1"):
            cpmap.from_json_dict(d)


class TestImmutability:
    def test_cannot_mutate(self):
        phi = CpMap.identity(2)
        with pytest.raises(AttributeError):
            phi.dim_in = 3

    def test_choi_returns_copy(self):
        phi = CpMap.identity(2)
        j = phi.choi
        j[0, 0] = 99.0
        assert phi.choi[0, 0] == 1.0
