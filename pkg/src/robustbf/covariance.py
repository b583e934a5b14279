"""Covariance estimation and the covariance transforms used by robust Capon
beamforming: loading, eigenvalue thresholding, subspace-selective loading
matrices, prior mixing, and a sampler for members of two-sided Loewner
interval sets.
"""

from dataclasses import dataclass

import numpy as np

from ._linalg import PSD_TOL, as_hermitian, hermitize
from .array_model import SnapshotSet


@dataclass(frozen=True)
class EigenDecomposition:
    """``R = U diag(eigenvalues) U^H`` with eigenvalues in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self, eigenvalues=None):
        """Rebuild the matrix, optionally with replacement eigenvalues."""
        lam = self.eigenvalues if eigenvalues is None else np.asarray(eigenvalues, dtype=float)
        U = self.eigenvectors
        return hermitize((U * lam) @ U.conj().T)


@dataclass(frozen=True)
class SubspacePartition:
    signal_basis: np.ndarray
    noise_basis: np.ndarray
    signal_eigenvalues: np.ndarray
    noise_eigenvalues: np.ndarray

    @property
    def signal_projector(self):
        Us = self.signal_basis
        return Us @ Us.conj().T

    @property
    def noise_projector(self):
        Uv = self.noise_basis
        return Uv @ Uv.conj().T


@dataclass(frozen=True)
class GammaSpec:
    """Loading levels for the sample signal subspace (``delta_signal``) and
    noise subspace (``delta_noise``) given ``n_sources`` signals."""

    delta_signal: float
    delta_noise: float
    n_sources: int

    def __post_init__(self):
        if self.delta_signal < 0 or self.delta_noise < 0:
            raise ValueError("loading levels must be nonnegative")
        if self.n_sources < 0:
            raise ValueError("n_sources must be nonnegative")


def sample_covariance(snapshots):
    """Sample average of ``x x^H`` over the snapshot columns."""
    X = snapshots.snapshots if isinstance(snapshots, SnapshotSet) else np.asarray(snapshots, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    if X.size == 0 or X.shape[1] == 0:
        raise ValueError("cannot estimate a covariance from zero snapshots")
    return hermitize(X @ X.conj().T / X.shape[1])


def eigendecompose(R):
    lam, U = np.linalg.eigh(as_hermitian(R))
    return EigenDecomposition(lam[::-1].copy(), U[:, ::-1].copy())


def partition_subspaces(ed, K):
    if not 0 < K < ed.n:
        raise ValueError(f"need 0 < K < N, got K={K}, N={ed.n}")
    U, lam = ed.eigenvectors, ed.eigenvalues
    return SubspacePartition(U[:, :K], U[:, K:], lam[:K], lam[K:])


def diagonal_load(R, eps):
    if eps < 0:
        raise ValueError(f"loading level must be nonnegative, got {eps}")
    R = as_hermitian(R)
    return R + eps * np.eye(R.shape[0])


def eigen_threshold(R, mu):
    """Raise every eigenvalue below ``mu * lambda_max`` up to that level."""
    if not 0 <= mu <= 1:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    ed = eigendecompose(R)
    lam = ed.eigenvalues.copy()
    lam[1:] = np.maximum(mu * lam[0], lam[1:])
    return ed.reconstruct(lam)


def gamma_matrix(ed, spec):
    """Loading matrix ``U blockdiag(d1 I_K, d2 I_{N-K}) U^H`` built on the
    eigenvectors of the sample covariance."""
    K, N = spec.n_sources, ed.n
    if K >= N:
        raise ValueError(f"n_sources={K} must be smaller than N={N}")
    levels = np.full(N, float(spec.delta_noise))
    levels[:K] = spec.delta_signal
    return ed.reconstruct(levels)


def bayesian_combine(Rhat, Rbar, beta):
    """Convex combination ``(1 - beta) Rhat + beta Rbar`` of sample and prior
    covariances."""
    if not 0 <= beta <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    Rhat, Rbar = as_hermitian(Rhat, "Rhat"), as_hermitian(Rbar, "Rbar")
    if Rhat.shape != Rbar.shape:
        raise ValueError(f"dimension mismatch: {Rhat.shape} vs {Rbar.shape}")
    if beta == 0:
        return Rhat
    if beta == 1:
        return Rbar
    return (1 - beta) * Rhat + beta * Rbar


def _psd_sqrt(G):
    lam, V = np.linalg.eigh(hermitize(G))
    if lam[0] < -PSD_TOL * max(1.0, abs(lam[-1])):
        raise ValueError("Gamma must be positive semidefinite")
    return hermitize((V * np.sqrt(np.clip(lam, 0, None))) @ V.conj().T)


def sample_interval_member(Rhat, Gamma, seed=None, max_retries=30):
    """Draw a PSD ``R`` with ``Rhat - Gamma <= R <= Rhat + Gamma``.

    Uses the congruence ``Rhat + G H G`` with ``G = Gamma^{1/2}`` and a random
    Hermitian ``H`` of spectral norm at most one. When the result is not PSD,
    ``H`` is halved; after ``max_retries`` failures ``Rhat`` itself is returned.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Rhat = as_hermitian(Rhat, "Rhat")
    G = _psd_sqrt(as_hermitian(Gamma, "Gamma"))
    N = Rhat.shape[0]
    Z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    H = hermitize(Z)
    H *= rng.uniform(0.0, 1.0) / np.linalg.norm(H, 2)
    for _ in range(max_retries):
        R = hermitize(Rhat + G @ H @ G)
        if np.linalg.eigvalsh(R)[0] >= -PSD_TOL:
            return R
        H *= 0.5
    return Rhat
