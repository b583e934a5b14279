"""The oracles must themselves be trustworthy before they judge the solvers."""

import numpy as np
import pytest

from robustbf import oracles


def test_random_search_finds_known_rayleigh_minimum(rng):
    # min w^H M w s.t. w^H Q w >= 1 with diagonal M, Q = e0 e0^H: optimum M[0,0]
    M = np.diag([2.0, 1.0, 3.0]).astype(complex)
    Q = np.zeros((3, 3), complex)
    Q[0, 0] = 1.0
    best = oracles.random_search_min(rng, M, Q, samples=100_000)
    assert best == pytest.approx(2.0, rel=1e-3)
    assert best >= 2.0 * (1 - 1e-12)


def test_random_search_infeasible_returns_inf(rng):
    assert oracles.random_search_min(rng, np.eye(2), -np.eye(2), samples=5000) == np.inf


def test_feasible_sampler_satisfies_constraint(rng):
    a = oracles.random_steering(rng, 4)
    W = oracles._random_feasible(rng, a, 1000)
    np.testing.assert_allclose(a.conj() @ W, 1.0, atol=1e-12)


def test_random_hpd_is_hpd(rng):
    R = oracles.random_hpd(rng, 5)
    np.testing.assert_array_equal(R, R.conj().T)
    assert np.linalg.eigvalsh(R)[0] >= 0.05 - 1e-12


@pytest.mark.parametrize("check", [oracles.check_globally_robust, oracles.check_bayesian,
                                   oracles.check_sinr])
def test_cheap_checks_pass_on_other_seeds(check):
    for seed in (1, 2):
        rep = check(seed=seed)
        assert rep.passed, rep.line()


def test_oracle_detects_wrong_solver(monkeypatch):
    # sabotage the quartic solver: the oracle must notice
    from robustbf import beamformers

    def bad(R, cset, k, maxiter=500):
        return beamformers.capon_weights(R + np.eye(R.shape[0]), cset.steering)

    monkeypatch.setattr(oracles, "quartic_regularized_weights", bad)
    assert not oracles.check_quartic(seed=0, instances=5, samples=20_000).passed
