"""Small Hermitian linear-algebra helpers shared across modules."""

import numpy as np
from scipy import linalg as sla

from .errors import SingularCovarianceError

# Eigenvalue floor for PSD feasibility checks.
PSD_TOL = 1e-10
HERMITIAN_RTOL = 1e-12


def hermitize(A):
    """Return the Hermitian part ``(A + A^H) / 2``."""
    A = np.asarray(A)
    return 0.5 * (A + A.conj().T)


def as_hermitian(R, name="matrix"):
    """Validate a square (near-)Hermitian matrix and return its Hermitian part.

    Asymmetry is measured relative to the largest entry so heavily loaded
    matrices are not rejected for rounding noise.
    """
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {R.shape}")
    scale = max(1.0, float(np.max(np.abs(R), initial=0.0)))
    skew = float(np.max(np.abs(R - R.conj().T), initial=0.0))
    if skew > HERMITIAN_RTOL * scale * 10:
        raise ValueError(f"{name} is not Hermitian (max |R - R^H| = {skew:.3g})")
    return hermitize(R)


def is_psd(R, tol=PSD_TOL):
    return bool(np.linalg.eigvalsh(hermitize(R))[0] >= -tol)


def condition_number(R):
    ev = np.linalg.eigvalsh(hermitize(R))
    if ev[0] <= 0:
        return np.inf
    return float(ev[-1] / ev[0])


def hpd_factor(R, name="covariance"):
    """Cholesky-factor an HPD matrix, raising with a condition estimate on failure."""
    R = as_hermitian(R, name)
    try:
        factor = sla.cho_factor(R, lower=True, check_finite=True)
    except sla.LinAlgError:
        raise SingularCovarianceError(f"{name} is not positive definite",
                                      condition_number(R)) from None
    # cho_factor happily factors matrices that are singular to working precision
    diag = np.abs(np.diag(factor[0]))
    if diag.min() <= 1e-8 * diag.max():
        raise SingularCovarianceError(f"{name} is numerically singular",
                                      condition_number(R))
    return factor


def hpd_solve(factor, b):
    return sla.cho_solve(factor, b, check_finite=False)


def inv_sqrt(M, name="matrix"):
    """``M^{-1/2}`` of an HPD matrix through its eigendecomposition."""
    lam, V = np.linalg.eigh(as_hermitian(M, name))
    if lam[0] <= PSD_TOL * max(1.0, abs(lam[-1])):
        raise SingularCovarianceError(f"{name} is not positive definite",
                                      np.inf if lam[0] <= 0 else lam[-1] / lam[0])
    return hermitize((V / np.sqrt(lam)) @ V.conj().T)
