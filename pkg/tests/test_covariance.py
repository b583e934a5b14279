import numpy as np
import pytest

import robustbf as rb


def test_sample_covariance_hermitian_psd(rng):
    X = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    R = rb.sample_covariance(X)
    np.testing.assert_array_equal(R, R.conj().T)
    assert np.linalg.eigvalsh(R)[0] > -1e-12
    np.testing.assert_allclose(R, X @ X.conj().T / 3)
    with pytest.raises(ValueError):
        rb.sample_covariance(np.zeros((5, 0)))


def test_eigendecompose_descending_and_reconstructs(hpd):
    R = hpd(6)
    ed = rb.eigendecompose(R)
    assert np.all(np.diff(ed.eigenvalues) <= 0)
    np.testing.assert_allclose(ed.reconstruct(), R, atol=1e-12)


def test_partition_projectors(hpd):
    part = rb.partition_subspaces(rb.eigendecompose(hpd(6)), 2)
    Ps, Pv = part.signal_projector, part.noise_projector
    np.testing.assert_allclose(Ps + Pv, np.eye(6), atol=1e-12)
    np.testing.assert_allclose(Ps @ Pv, 0, atol=1e-12)
    for K in (0, 6):
        with pytest.raises(ValueError):
            rb.partition_subspaces(rb.eigendecompose(hpd(6)), K)


def test_diagonal_load(hpd):
    R = hpd(4)
    np.testing.assert_allclose(np.linalg.eigvalsh(rb.diagonal_load(R, 0.3)),
                               np.linalg.eigvalsh(R) + 0.3, rtol=1e-12)
    with pytest.raises(ValueError):
        rb.diagonal_load(R, -1e-3)


def test_eigen_threshold(hpd):
    R = hpd(5)
    lam = np.linalg.eigvalsh(R)[::-1]
    out = np.linalg.eigvalsh(rb.eigen_threshold(R, 0.4))[::-1]
    np.testing.assert_allclose(out, np.maximum(lam, 0.4 * lam[0]), rtol=1e-10)
    np.testing.assert_allclose(rb.eigen_threshold(R, 0.0), R, atol=1e-12)
    np.testing.assert_allclose(rb.eigen_threshold(R, 1.0), lam[0] * np.eye(5), atol=1e-10)


def test_gamma_matrix_levels(hpd):
    ed = rb.eigendecompose(hpd(6))
    G = rb.gamma_matrix(ed, rb.GammaSpec(3.0, 0.01, 2))
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(G)), [0.01] * 4 + [3.0] * 2, atol=1e-12)
    # Gamma shares the eigenvectors of the sample covariance
    U = ed.eigenvectors
    D = U.conj().T @ G @ U
    np.testing.assert_allclose(D, np.diag([3, 3, .01, .01, .01, .01]), atol=1e-12)
    with pytest.raises(ValueError):
        rb.gamma_matrix(ed, rb.GammaSpec(1.0, 1.0, 6))
    with pytest.raises(ValueError):
        rb.GammaSpec(-1.0, 0.0, 1)


def test_equal_levels_reduce_to_diagonal_loading(hpd):
    R = hpd(5)
    np.testing.assert_allclose(rb.udl_loaded_covariance(R, rb.GammaSpec(0.2, 0.2, 2)),
                               rb.diagonal_load(R, 0.2), atol=1e-12)


def test_bayesian_combine_endpoints(hpd):
    A, B = hpd(4), hpd(4)
    np.testing.assert_array_equal(rb.bayesian_combine(A, B, 0.0), A)
    np.testing.assert_array_equal(rb.bayesian_combine(A, B, 1.0), B)
    np.testing.assert_allclose(rb.bayesian_combine(A, B, 0.25), 0.75 * A + 0.25 * B)
    with pytest.raises(ValueError):
        rb.bayesian_combine(A, hpd(3), 0.5)
    with pytest.raises(ValueError):
        rb.bayesian_combine(A, B, 1.5)


def test_interval_members_lie_in_interval(hpd, rng):
    R = hpd(5)
    G = rb.gamma_matrix(rb.eigendecompose(R), rb.GammaSpec(0.5, 0.05, 2))
    for _ in range(50):
        M = rb.sample_interval_member(R, G, rng)
        assert np.linalg.eigvalsh(R + G - M)[0] >= -1e-10
        assert np.linalg.eigvalsh(M - (R - G))[0] >= -1e-10
        assert np.linalg.eigvalsh(M)[0] >= -1e-10


def test_non_hermitian_rejected(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    with pytest.raises(ValueError):
        rb.eigendecompose(A)
