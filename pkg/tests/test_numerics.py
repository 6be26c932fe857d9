"""Complex linear algebra and special functions against independent oracles."""

import math

import numpy as np
import pytest

from mecrl.numerics import (
    RankDeficiencyError,
    SingularMatrixError,
    bessel_j0,
    cmat_inverse,
    hermitian_gram,
    sample_complex_gaussian,
    zf_diag,
)


def random_cmat(rng, n, m, scale=1.0):
    return scale * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


class TestSampleComplexGaussian:
    def test_zero_variance_gives_zero_vector(self):
        v = sample_complex_gaussian(3, 0.0, np.random.default_rng(0))
        assert v.shape == (3,)
        assert np.all(v == 0)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            sample_complex_gaussian(2, -1e-9, np.random.default_rng(0))

    def test_mean_power_matches_variance(self):
        # Monte-Carlo over 1e6 draws of length-4 vectors
        rng = np.random.default_rng(42)
        var = 1e-9
        total, count = 0.0, 0
        for _ in range(100):
            v = sample_complex_gaussian(4 * 10_000, var, rng)
            total += float(np.sum(np.abs(v) ** 2))
            count += v.size
        mean_power = total / count
        assert abs(mean_power - var) / var < 0.02

    def test_real_part_carries_half_the_variance(self):
        rng = np.random.default_rng(7)
        v = sample_complex_gaussian(1_000_000, 4.0, rng)
        assert abs(np.mean(v.real**2) - 2.0) / 2.0 < 0.02


class TestHermitianGram:
    def test_identity(self):
        assert np.allclose(hermitian_gram(np.eye(3, dtype=complex)), np.eye(3))

    def test_scalar_matrix(self):
        assert np.allclose(hermitian_gram(2.0 * np.eye(2, dtype=complex)), 4.0 * np.eye(2))

    def test_matches_naive_triple_loop(self):
        rng = np.random.default_rng(3)
        H = random_cmat(rng, 4, 3)
        G = hermitian_gram(H)
        ref = np.zeros((3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                for k in range(4):
                    ref[i, j] += np.conj(H[k, i]) * H[k, j]
        assert np.max(np.abs(G - ref)) < 1e-14

    def test_result_is_hermitian(self):
        rng = np.random.default_rng(4)
        G = hermitian_gram(random_cmat(rng, 5, 3))
        assert np.max(np.abs(G - G.conj().T)) < 1e-12

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            G = hermitian_gram(random_cmat(rng, 4, 3))
            x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            assert np.real(x.conj() @ G @ x) >= -1e-12

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError):
            hermitian_gram(np.ones((2, 3), dtype=complex))


class TestCmatInverse:
    def test_identity(self):
        assert np.allclose(cmat_inverse(np.eye(3, dtype=complex)), np.eye(3))

    def test_diagonal(self):
        inv = cmat_inverse(np.diag([2.0 + 0j, 4.0j]))
        assert np.allclose(inv, np.diag([0.5 + 0j, -0.25j]))

    def test_multiply_back_to_identity(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            A = random_cmat(rng, 3, 3) + 2 * np.eye(3)
            err = np.max(np.abs(A @ cmat_inverse(A) - np.eye(3)))
            assert err < 1e-9

    def test_involution_within_1e8(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            A = random_cmat(rng, 3, 3) + 2 * np.eye(3)
            assert np.max(np.abs(cmat_inverse(cmat_inverse(A)) - A)) < 1e-8

    def test_singular_matrix_raises(self):
        A = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
        with pytest.raises(SingularMatrixError):
            cmat_inverse(A)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            cmat_inverse(np.ones((2, 3), dtype=complex))


class TestZfDiag:
    def test_single_column(self):
        h = np.array([[1 + 2j], [0j], [0j], [0j]])  # squared norm 5
        np.testing.assert_allclose(zf_diag(h), [0.2], rtol=1e-12)

    def test_orthogonal_columns(self):
        H = np.zeros((4, 2), dtype=complex)
        H[0, 0] = np.sqrt(2)  # norm^2 = 2
        H[1, 1] = 2.0         # norm^2 = 4
        np.testing.assert_allclose(zf_diag(H), [0.5, 0.25], rtol=1e-12)

    def test_matches_pseudo_inverse_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            H = random_cmat(rng, 4, 3)
            got = zf_diag(H)
            pinv = np.linalg.pinv(H)
            ref = np.real(np.diag(pinv @ pinv.conj().T))
            np.testing.assert_allclose(got, ref, rtol=1e-9)
            assert np.all(got > 0)

    def test_column_scaling_touches_only_that_entry(self):
        rng = np.random.default_rng(11)
        H = random_cmat(rng, 4, 3)
        base = zf_diag(H)
        c = 2.5
        scaled = H.copy()
        scaled[:, 1] *= c
        got = zf_diag(scaled)
        expect = base.copy()
        expect[1] /= c * c
        np.testing.assert_allclose(got, expect, rtol=1e-9)

    def test_extra_user_never_helps(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            H = random_cmat(rng, 5, 4)
            d3 = zf_diag(H[:, :3])
            d4 = zf_diag(H)
            # larger diagonal = more noise amplification = worse SINR
            assert np.all(d4[:3] >= d3 - 1e-15)

    def test_colliding_columns_raise(self):
        h = np.array([1 + 1j, 2j, 0.5, -1j])
        H = np.column_stack([h, h])
        with pytest.raises(RankDeficiencyError):
            zf_diag(H)


class TestBesselJ0:
    @staticmethod
    def series_oracle(x, terms=60):
        return sum((-1) ** k * (x / 2) ** (2 * k) / math.factorial(k) ** 2 for k in range(terms))

    def test_at_zero(self):
        assert bessel_j0(0.0) == 1.0

    def test_doppler_operating_point(self):
        # frozen via the factorial series (scipy.special.j0 agrees to 1e-15)
        x = 2 * math.pi * 70 * 1e-3
        assert abs(bessel_j0(x) - 0.952220504135098) < 1e-4

    def test_even_symmetry(self):
        x = 2 * math.pi * 70 * 1e-3
        assert bessel_j0(-x) == bessel_j0(x)

    def test_series_agreement_on_grid(self):
        for x in np.linspace(0.0, 5.0, 100):
            assert abs(bessel_j0(float(x)) - self.series_oracle(float(x))) < 1e-8

    def test_scipy_agreement_to_domain_edge(self):
        scipy_special = pytest.importorskip("scipy.special")
        for x in (0.5, 2.0, 8.0, 15.0, 20.0):
            assert abs(bessel_j0(x) - float(scipy_special.j0(x))) < 1e-8
