"""Brute-force checks of the solvers against independent oracles.

Each check draws random instances, solves them with the library, and compares
against random sampling or direct dense linear algebra that does not share
the solver's code path. Every check returns an :class:`OracleReport`.
"""

from dataclasses import dataclass, field
import time

import numpy as np

from .array_model import (generate_snapshots, output_sinr, paper_scenario, steering_vector,
                          true_covariance)
from .beamformers import (QuadraticRegularized, Singleton, capon_weights,
                          globally_robust_loading, quartic_objective,
                          quartic_regularized_weights, regularized_constraint_weights)
from .covariance import (GammaSpec, bayesian_combine, eigendecompose, gamma_matrix,
                         sample_covariance, sample_interval_member)


@dataclass
class OracleReport:
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_hpd(rng, n, floor=0.05):
    X = rng.standard_normal((n, 2 * n)) + 1j * rng.standard_normal((n, 2 * n))
    R = X @ X.conj().T / (2 * n) + floor * np.eye(n)
    return 0.5 * (R + R.conj().T)


def random_steering(rng, n):
    theta = rng.uniform(-np.pi / 2, np.pi / 2)
    return np.exp(1j * np.pi * np.arange(n) * np.sin(theta))


def _quad(W, M):
    """``w^H M w`` for every column of ``W``."""
    return np.real(np.einsum("ij,ik,kj->j", W.conj(), M, W))


def _dense_capon(R, a):
    Ria = np.linalg.solve(R, a)
    return Ria / np.vdot(a, Ria), 1.0 / np.real(np.vdot(a, Ria))


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_dominance(seed=0, members=1000, n_weights=100, delta1=3.0, delta2=0.01):
    """Interval-set members never beat the dominant member ``Rhat + Gamma``.

    Also checks the min-max value: for the distortionless set, the worst case
    at the optimal weights equals the Capon optimum at ``Rhat + Gamma``.
    """
    rng = np.random.default_rng(seed)
    sc = paper_scenario()
    N, K = sc.n_elements, sc.n_sources
    Rhat = sample_covariance(generate_snapshots(sc, 25, int(rng.integers(2**32))))
    Gamma = gamma_matrix(eigendecompose(Rhat), GammaSpec(delta1, delta2, K))
    top = Rhat + Gamma
    Rs = np.stack([sample_interval_member(Rhat, Gamma, rng) for _ in range(members)])

    W = rng.standard_normal((N, n_weights)) + 1j * rng.standard_normal((N, n_weights))
    member_pow = np.real(np.einsum("ij,mik,kj->mj", W.conj(), Rs, W))
    slack = 1e-10 * np.sum(np.abs(W) ** 2, axis=0) * np.linalg.norm(Gamma, 2)
    excess = float(np.max(member_pow - (_quad(W, top) + slack)))

    # interval membership of the samples themselves
    lo = np.array([np.linalg.eigvalsh(R - (Rhat - Gamma))[0] for R in Rs])
    hi = np.array([np.linalg.eigvalsh(top - R)[0] for R in Rs])
    psd = np.array([np.linalg.eigvalsh(R)[0] for R in Rs])
    membership = float(min(lo.min(), hi.min(), psd.min()))

    minmax_gap = 0.0
    for theta in np.deg2rad([-60.0, -30.0, -26.0, 0.0, 30.0, 45.0]):
        a = steering_vector(sc.geometry, theta)
        w_star, opt = _dense_capon(top, a)
        worst = max(float(np.max(_quad(w_star[:, None], Rs[i]))) for i in range(members))
        worst = max(worst, float(np.real(np.vdot(w_star, top @ w_star))))
        minmax_gap = max(minmax_gap, abs(worst - opt) / opt)
        # every member's own optimum is below the robust optimum
        own = np.array([_dense_capon(R + 1e-12 * np.eye(N), a)[1] for R in Rs[:50]])
        minmax_gap = max(minmax_gap, float(np.max(own - opt)) / opt if np.any(own > opt * (1 + 1e-10)) else 0.0)

    passed = excess <= 0 and membership >= -1e-10 and minmax_gap <= 1e-10
    return OracleReport(
        "dominance", passed,
        f"max excess {excess:.3g}, membership floor {membership:.3g}, min-max gap {minmax_gap:.3g}",
        {"excess": excess, "membership": membership, "minmax_gap": minmax_gap})


@_timed
def check_globally_robust(seed=0, instances=50, tol=1e-8):
    """Budgeted loading hits its budget and reproduces loaded Capon weights."""
    rng = np.random.default_rng(seed)
    worst_phi = worst_w = 0.0
    t0_ok = True
    for _ in range(instances):
        n = int(rng.integers(3, 11))
        R, a = random_hpd(rng, n), random_steering(rng, n)
        _, phi0 = _dense_capon(R, a)
        t = phi0 * 10 ** rng.uniform(-3, 1)
        sol = globally_robust_loading(R, Singleton(a), phi0 + t)
        w_direct, phi = _dense_capon(R + np.eye(n) / (4 * sol.k), a)
        worst_phi = max(worst_phi, abs(phi - (phi0 + t)) / (phi0 + t))
        worst_w = max(worst_w, np.linalg.norm(sol.beamformer.weights - w_direct) / np.linalg.norm(w_direct))
        zero = globally_robust_loading(R, Singleton(a), phi0)
        w0, _ = _dense_capon(R, a)
        t0_ok &= zero.unbounded and np.allclose(zero.beamformer.weights, w0, rtol=1e-10, atol=1e-12)
    passed = worst_phi <= tol and worst_w <= tol and t0_ok
    return OracleReport(
        "globally-robust", passed,
        f"max |phi-tau|/tau {worst_phi:.3g}, max weight mismatch {worst_w:.3g}, t=0 -> k=inf: {t0_ok}",
        {"phi_err": worst_phi, "weight_err": worst_w, "t0_ok": bool(t0_ok)})


def _random_feasible(rng, a, count):
    """Points with ``a^H w = 1``: minimum-norm solution plus a random
    component orthogonal to ``a``, at random scales."""
    n = a.size
    Z = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    Z -= np.outer(a, a.conj() @ Z) / np.vdot(a, a).real
    Z *= 10 ** rng.uniform(-3, 0.5, size=count) / np.linalg.norm(Z, axis=0)
    return a[:, None] / np.vdot(a, a).real + Z


@_timed
def check_quartic(seed=0, instances=50, samples=100_000, tol=1e-8):
    """Quartic fixed point beats random feasible points and is stationary."""
    rng = np.random.default_rng(seed)
    worst_gap = -np.inf
    worst_res = 0.0
    for _ in range(instances):
        n = 3
        R, a = random_hpd(rng, n), random_steering(rng, n)
        k = 10 ** rng.uniform(-2, 2)
        w = quartic_regularized_weights(R, Singleton(a), k).weights
        obj = quartic_objective(w, R, k)
        W = _random_feasible(rng, a, samples)
        s = np.sum(np.abs(W) ** 2, axis=0)
        best = float(np.min(_quad(W, R) + s * s / (4 * k)))
        worst_gap = max(worst_gap, obj - best)
        g = R @ w + (np.vdot(w, w).real / (2 * k)) * w
        lam = np.vdot(a, g) / np.vdot(a, a).real
        worst_res = max(worst_res, float(np.linalg.norm(g - lam * a)))
        worst_res = max(worst_res, abs(np.vdot(a, w) - 1))
    passed = worst_gap <= tol and worst_res <= tol
    return OracleReport(
        "quartic", passed,
        f"max (solver - best sample) {worst_gap:.3g}, max stationarity residual {worst_res:.3g}",
        {"gap": worst_gap, "residual": worst_res})


def _ratio(W, M, Q):
    num, den = _quad(W, M), _quad(W, Q)
    out = np.full(W.shape[1], np.inf)
    ok = den > 0
    out[ok] = num[ok] / den[ok]
    return out


def random_search_min(rng, M, Q, samples=1_000_000):
    """Minimum of ``w^H M w`` over ``w^H Q w >= 1`` by derivative-free random
    search: a global stage, then shrinking perturbations of the incumbent.
    Any ``w`` with ``w^H Q w > 0`` scales to a feasible point with objective
    ``w^H M w / w^H Q w``."""
    n = M.shape[0]
    n_global = samples // 5
    rounds, per_round = 80, (samples - n_global) // 80
    W = rng.standard_normal((n, n_global)) + 1j * rng.standard_normal((n, n_global))
    r = _ratio(W, M, Q)
    i = int(np.argmin(r))
    best, w = float(r[i]), W[:, i] / np.linalg.norm(W[:, i])
    radius = 0.3
    for _ in range(rounds):
        P = w[:, None] + radius * (rng.standard_normal((n, per_round))
                                   + 1j * rng.standard_normal((n, per_round))) / np.sqrt(2 * n)
        r = _ratio(P, M, Q)
        i = int(np.argmin(r))
        if r[i] < best:
            best, w = float(r[i]), P[:, i] / np.linalg.norm(P[:, i])
        radius *= 0.9
    return best


@_timed
def check_regularized(seed=0, instances=50, samples=1_000_000, rtol=1e-3):
    """Generalized-eigen solver vs random search; ``eps2 = 0`` vs Capon."""
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    below = 0.0
    worst_capon = 0.0
    done = 0
    while done < instances:
        n = 3
        M, a, R2 = random_hpd(rng, n), random_steering(rng, n), random_hpd(rng, n)
        eps2 = rng.uniform(0.01, 1.0)
        cset = QuadraticRegularized(a, eps2, R2)
        if np.linalg.eigvalsh(cset.quadratic_form)[-1] <= 0:
            continue
        done += 1
        w = regularized_constraint_weights(M, cset).weights
        obj = float(np.real(np.vdot(w, M @ w)))
        feas = float(np.real(np.vdot(w, cset.quadratic_form @ w)))
        best = random_search_min(rng, M, cset.quadratic_form, samples)
        worst_rel = max(worst_rel, (best - obj) / obj)
        below = max(below, (obj - best) / obj, abs(feas - 1))
        w0 = regularized_constraint_weights(M, QuadraticRegularized(a, 0.0)).weights
        capon_val = 1.0 / np.real(np.vdot(a, np.linalg.solve(M, a)))
        worst_capon = max(worst_capon, abs(np.real(np.vdot(w0, M @ w0)) - capon_val) / capon_val)
    passed = worst_rel <= rtol and below <= 1e-10 and worst_capon <= 1e-10
    return OracleReport(
        "regularized-constraint", passed,
        f"max (search - solver)/solver {worst_rel:.3g}, solver undercut/feasibility {below:.3g}, "
        f"eps2=0 vs Capon {worst_capon:.3g}",
        {"search_gap": worst_rel, "undercut": below, "capon_err": worst_capon})


@_timed
def check_bayesian(seed=0, instances=50, tol=1e-10):
    """Mixing form and additive-regularizer form give the same weights."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    beta0_exact = True
    for _ in range(instances):
        n = int(rng.integers(3, 11))
        Rhat, Rbar, a = random_hpd(rng, n), random_hpd(rng, n), random_steering(rng, n)
        beta = rng.uniform(0.0, 0.99)
        eps = beta / (1 - beta)
        w_mix = capon_weights(bayesian_combine(Rhat, Rbar, beta), a).weights
        w_reg = capon_weights(Rhat + eps * Rbar, a).weights
        worst = max(worst, float(np.max(np.abs(w_mix - w_reg)) / np.max(np.abs(w_reg))))
        beta0_exact &= np.array_equal(capon_weights(bayesian_combine(Rhat, Rbar, 0.0), a).weights,
                                      capon_weights(Rhat, a).weights)
    passed = worst <= tol and beta0_exact
    return OracleReport("bayesian-equivalence", passed,
                        f"max weight difference {worst:.3g}, beta=0 exact: {beta0_exact}",
                        {"weight_err": worst, "beta0_exact": bool(beta0_exact)})


@_timed
def check_sinr(seed=0, samples=1000, slack=1e-10):
    """Capon weights on the true covariance maximize output SINR."""
    rng = np.random.default_rng(seed)
    sc = paper_scenario()
    a1 = steering_vector(sc.geometry, sc.sources[sc.soi_index].doa)
    h_opt = output_sinr(capon_weights(true_covariance(sc), a1), sc)
    W = rng.standard_normal((sc.n_elements, samples)) + 1j * rng.standard_normal((sc.n_elements, samples))
    best = max(output_sinr(W[:, j], sc) for j in range(samples))
    passed = best <= h_opt * (1 + slack)
    return OracleReport("sinr-optimality", passed,
                        f"Capon SINR {h_opt:.6g}, best random {best:.6g}",
                        {"capon": h_opt, "best_random": best})


ALL_CHECKS = (check_dominance, check_globally_robust, check_quartic, check_regularized,
              check_bayesian, check_sinr)


def run_all(seed=0):
    return [check(seed=seed) for check in ALL_CHECKS]


__all__ = ["OracleReport", "run_all", "random_search_min", "random_hpd", "random_steering",
           *[c.__name__ for c in ALL_CHECKS]]
