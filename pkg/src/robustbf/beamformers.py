"""Weight and spectrum solvers.

All spectra are evaluated by factoring the (loaded) covariance once and
solving against the full steering matrix, never by explicit inversion.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize

from ._linalg import as_hermitian, hpd_factor, hpd_solve, inv_sqrt
from .array_model import steering_matrix
from .covariance import eigendecompose, gamma_matrix, partition_subspaces
from .errors import ConvergenceError, InfeasibleConstraintError, SingularCovarianceError


@dataclass(frozen=True)
class Singleton:
    """Feasible set ``{w : w^H a = 1}``: the steering vector is taken as exact."""

    steering: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.steering, dtype=complex)
        if not np.any(a):
            raise ValueError("steering vector must be nonzero")
        object.__setattr__(self, "steering", a)


@dataclass(frozen=True)
class QuadraticRegularized:
    """Feasible set ``{w : |w^H a|^2 - eps2 w^H reg w >= 1}``.

    ``reg`` defaults to the identity.
    """

    steering: np.ndarray
    eps2: float = 0.0
    reg: np.ndarray = None

    def __post_init__(self):
        a = np.asarray(self.steering, dtype=complex)
        if not np.any(a):
            raise ValueError("steering vector must be nonzero")
        if self.eps2 < 0:
            raise ValueError("eps2 must be nonnegative")
        object.__setattr__(self, "steering", a)
        reg = np.eye(a.size, dtype=complex) if self.reg is None else as_hermitian(self.reg, "reg")
        object.__setattr__(self, "reg", reg)

    @property
    def quadratic_form(self):
        a = self.steering
        return np.outer(a, a.conj()) - self.eps2 * self.reg


@dataclass(frozen=True, eq=False)
class Beamformer:
    weights: np.ndarray
    theta: float = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 1 or not np.any(w):
            raise ValueError("beamformer weights must be a nonzero vector")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thetas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("thetas and values must be 1-D arrays of equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("thetas must be strictly increasing")
        if np.any(v < 0):
            raise ValueError("spectrum values must be nonnegative")
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.thetas.size


def default_grid(points=200):
    """``points`` uniformly spaced angles covering [-pi/2, pi/2] inclusive."""
    if points < 2:
        raise ValueError("a grid needs at least two points")
    return np.linspace(-np.pi / 2, np.pi / 2, int(points))


def _weights(w):
    return np.asarray(getattr(w, "weights", w), dtype=complex)


def capon_weights(R, a):
    """Minimum-power distortionless weights ``R^{-1} a / (a^H R^{-1} a)``."""
    a = np.asarray(a, dtype=complex)
    Ria = hpd_solve(hpd_factor(R), a)
    return Beamformer(Ria / np.real(np.vdot(a, Ria)))


def capon_spectrum(R, grid, geometry):
    """``1 / (a(theta)^H R^{-1} a(theta))`` at every grid angle."""
    grid = np.asarray(grid, dtype=float)
    A = steering_matrix(geometry, grid)
    RiA = hpd_solve(hpd_factor(R), A)
    quad = np.real(np.sum(A.conj() * RiA, axis=0))
    return SpectrumGrid(grid, 1.0 / quad)


def beamformer_power(w, R):
    """Output power ``w^H R w`` (tiny negative rounding clipped to 0)."""
    w = _weights(w)
    R = np.asarray(R, dtype=complex)
    if R.shape != (w.size, w.size):
        raise ValueError(f"weights of length {w.size} do not match matrix {R.shape}")
    p = float(np.real(np.vdot(w, R @ w)))
    if p < 0:
        if p < -1e-10 * max(1.0, float(np.linalg.norm(R, 2)) * float(np.vdot(w, w).real)):
            raise ValueError(f"negative output power {p}: R is not PSD")
        p = 0.0
    return p


def worst_case_power(w, Rhat, Gamma):
    """Largest ``w^H R w`` over the interval set ``Rhat - Gamma <= R <= Rhat + Gamma``,
    attained at the dominant member ``Rhat + Gamma``."""
    return beamformer_power(w, np.asarray(Rhat) + np.asarray(Gamma))


def udl_loaded_covariance(Rhat, spec):
    """``Rhat + Gamma`` with Gamma loading the sample signal and noise subspaces
    at separate levels."""
    Rhat = as_hermitian(Rhat, "Rhat")
    return Rhat + gamma_matrix(eigendecompose(Rhat), spec)


def udl_spectrum(Rhat, K, spec, grid, geometry):
    """Capon spectrum of the unbalanced diagonally loaded covariance."""
    if spec.n_sources != K:
        raise ValueError(f"spec is for {spec.n_sources} sources, got K={K}")
    return capon_spectrum(udl_loaded_covariance(Rhat, spec), grid, geometry)


def music_pseudospectrum(R, K, grid, geometry):
    """``1 / (a^H U_v diag(lam_v)^{-1} U_v^H a)`` from the noise eigenpairs of ``R``."""
    part = partition_subspaces(eigendecompose(R), K)
    lam_v = part.noise_eigenvalues
    if lam_v[-1] <= 1e-12 * max(1.0, abs(part.signal_eigenvalues[0])):
        raise SingularCovarianceError("covariance has a zero noise eigenvalue",
                                      math.inf)
    grid = np.asarray(grid, dtype=float)
    A = steering_matrix(geometry, grid)
    proj = part.noise_basis.conj().T @ A
    quad = np.sum(np.abs(proj) ** 2 / lam_v[:, None], axis=0)
    return SpectrumGrid(grid, 1.0 / quad)


def regularized_constraint_weights(M, cset):
    """Minimize ``w^H M w`` subject to ``w^H Q w >= 1`` with
    ``Q = a a^H - eps2 reg``.

    After whitening by ``M^{-1/2}`` the problem is a Rayleigh quotient: the
    optimum is ``1 / lambda_max`` of ``M^{-1/2} Q M^{-1/2}``, attained along
    its top eigenvector. Raises InfeasibleConstraintError when
    ``lambda_max <= 0``.
    """
    if isinstance(cset, Singleton):
        cset = QuadraticRegularized(cset.steering)
    M = as_hermitian(M, "M")
    W = inv_sqrt(M, "M")
    B = W @ cset.quadratic_form @ W
    lam, U = np.linalg.eigh(0.5 * (B + B.conj().T))
    lam_max = float(lam[-1])
    if lam_max <= 1e-14 * max(1.0, float(np.abs(lam).max())):
        raise InfeasibleConstraintError(lam_max)
    return Beamformer(W @ U[:, -1] / np.sqrt(lam_max))


def _constrained_optimum(M, cset):
    """Optimal objective and weights of ``min w^H M w`` over the feasible set."""
    if isinstance(cset, Singleton):
        a = cset.steering
        Mia = hpd_solve(hpd_factor(M), a)
        q = float(np.real(np.vdot(a, Mia)))
        return 1.0 / q, Beamformer(Mia / q)
    bf = regularized_constraint_weights(M, cset)
    return beamformer_power(bf, M), bf


@dataclass(frozen=True)
class LoadingSolution:
    """Result of the budgeted loading search.

    ``k`` is ``math.inf`` when the budget equals the unloaded optimum; the
    corresponding loading ``1 / (4k)`` is then exactly zero.
    """

    k: float
    beamformer: Beamformer
    objective: float

    @property
    def unbounded(self):
        return math.isinf(self.k)

    @property
    def loading(self):
        return 0.0 if self.unbounded else 1.0 / (4.0 * self.k)


def globally_robust_loading(Rhat, cset, tau, weight=None, rtol=1e-12):
    """Find ``k`` with ``phi(k) = tau`` where
    ``phi(k) = min_{w in W} w^H (Rhat + weight / (4k)) w``.

    ``phi`` is continuous and strictly decreasing in ``k`` and unbounded as
    ``k -> 0``, so the root is bracketed in the loading ``ell = 1/(4k)`` and
    refined with Brent's method. A budget equal to the unloaded optimum
    (within ``rtol``) gives ``k = inf``.
    """
    Rhat = as_hermitian(Rhat, "Rhat")
    N = Rhat.shape[0]
    C = np.eye(N) if weight is None else as_hermitian(weight, "weight")
    phi0, bf0 = _constrained_optimum(Rhat, cset)
    if not np.isfinite(tau):
        raise ValueError("tau must be finite")
    if tau < phi0 * (1 - rtol):
        raise ValueError(f"tau={tau:.6g} is below the unloaded optimum {phi0:.6g}; no k solves it")
    if tau <= phi0 * (1 + rtol):
        return LoadingSolution(math.inf, bf0, phi0)

    def excess(ell):
        return _constrained_optimum(Rhat + ell * C, cset)[0] - tau

    hi = max(1.0, float(np.real(np.trace(Rhat))) / N)
    for _ in range(200):
        if excess(hi) >= 0:
            break
        hi *= 4.0
    else:
        raise ConvergenceError("could not bracket the loading level")
    ell, info = optimize.brentq(excess, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                                maxiter=500, full_output=True)
    if not info.converged:
        raise ConvergenceError(f"loading search did not converge: {info.flag}")
    if ell <= 0:
        return LoadingSolution(math.inf, bf0, phi0)
    obj, bf = _constrained_optimum(Rhat + ell * C, cset)
    return LoadingSolution(1.0 / (4.0 * ell), bf, obj)


def quartic_regularized_weights(Rhat, cset, k, maxiter=500):
    """Minimize ``w^H Rhat w + (w^H w)^2 / (4k)`` subject to ``a^H w = 1``.

    Stationarity gives ``(Rhat + s/(2k) I) w = lambda a`` with ``s = w^H w``,
    so the minimizer is the loaded Capon solution at the fixed point
    ``||w(s)||^2 = s``; ``g(s) = ||w(s)||^2 - s`` is strictly decreasing with
    ``g(0) > 0`` and ``g(||w(0)||^2) <= 0``.
    """
    if not isinstance(cset, Singleton):
        cset = Singleton(getattr(cset, "steering", cset))
    if not k > 0:
        raise ValueError("k must be positive")
    Rhat = as_hermitian(Rhat, "Rhat")
    a = cset.steering
    I = np.eye(Rhat.shape[0])
    if math.isinf(k):
        return capon_weights(Rhat, a)

    def w_of(s):
        return capon_weights(Rhat + (s / (2.0 * k)) * I, a).weights

    def g(s):
        w = w_of(s)
        return float(np.real(np.vdot(w, w))) - s

    hi = float(np.real(np.vdot(w_of(0.0), w_of(0.0))))
    if g(hi) >= 0:
        return Beamformer(w_of(hi))
    s, info = optimize.brentq(g, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                              maxiter=maxiter, full_output=True)
    if not info.converged:
        raise ConvergenceError(f"quartic fixed point did not converge: {info.flag}")
    return Beamformer(w_of(s))


def quartic_objective(w, Rhat, k):
    w = _weights(w)
    s = float(np.real(np.vdot(w, w)))
    return float(np.real(np.vdot(w, np.asarray(Rhat) @ w))) + s * s / (4.0 * k)
