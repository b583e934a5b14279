"""Robustness and resolution diagnostics for spectra and pattern ensembles."""

from dataclasses import dataclass

import numpy as np

from .beamformers import worst_case_power


@dataclass(frozen=True, eq=False)
class PatternEnsemble:
    """``T`` patterns (rows of ``patterns``) sampled on a shared angle grid."""

    grid: np.ndarray
    patterns: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        P = np.atleast_2d(np.asarray(self.patterns, dtype=float))
        if P.shape[0] < 1 or P.size == 0:
            raise ValueError("ensemble must hold at least one pattern")
        if P.shape[1] != grid.size:
            raise ValueError(f"patterns have {P.shape[1]} points, grid has {grid.size}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "patterns", P)

    def __len__(self):
        return self.patterns.shape[0]

    def normalized(self):
        return PatternEnsemble(self.grid, normalize_pattern(self.patterns))

    def mean_pattern(self):
        return self.patterns.mean(axis=0)


def normalize_pattern(values):
    """Divide a pattern (or each row of a stack of patterns) by its maximum."""
    v = np.asarray(values, dtype=float)
    peak = v.max(axis=-1, keepdims=True)
    if np.any(~(peak > 0)):
        raise ValueError("cannot normalize a pattern whose maximum is not positive")
    return v / peak


def dispersion(ens, normalize=True):
    """Mean l2 distance of each pattern from the ensemble mean.

    With ``normalize`` (the default) every pattern is first peak-normalized;
    pass ``normalize=False`` to measure raw powers.
    """
    if len(ens) == 0:
        raise ValueError("empty ensemble")
    P = normalize_pattern(ens.patterns) if normalize else ens.patterns
    return float(np.mean(np.linalg.norm(P - P.mean(axis=0), axis=1)))


def dispersion_contributions(ens, normalize=True):
    """Per-pattern terms ``||P_i - P_mean|| / T`` that sum to the dispersion."""
    P = normalize_pattern(ens.patterns) if normalize else ens.patterns
    return np.linalg.norm(P - P.mean(axis=0), axis=1) / P.shape[0]


def one_sided_robustness_measure(w, Rhat, Gamma, p0):
    """Smallest ``k >= 0`` bounding the power excess ``w^H R w - p0`` over the
    interval set ``Rhat - Gamma <= R <= Rhat + Gamma``."""
    return max(0.0, worst_case_power(w, Rhat, Gamma) - p0)


def find_peaks(spectrum, count):
    """Angles of the ``count`` largest strict interior local maxima, by
    decreasing value. Returns fewer when fewer exist."""
    if count < 1:
        raise ValueError("count must be at least 1")
    v = spectrum.values
    if v.size < 3:
        return []
    mid = v[1:-1]
    idx = np.flatnonzero((mid > v[:-2]) & (mid > v[2:])) + 1
    order = idx[np.argsort(-v[idx], kind="stable")]
    return [float(spectrum.thetas[i]) for i in order[:count]]


def resolution_check(spectrum, doa_a, doa_b, tol_deg):
    """True when the two largest peaks land within ``tol_deg`` of the two
    targets, one peak per target."""
    if doa_a == doa_b:
        raise ValueError("the two target directions must differ")
    peaks = find_peaks(spectrum, 2)
    if len(peaks) < 2:
        return False
    tol = np.deg2rad(tol_deg)
    p, q = peaks
    straight = abs(p - doa_a) <= tol and abs(q - doa_b) <= tol
    crossed = abs(p - doa_b) <= tol and abs(q - doa_a) <= tol
    return straight or crossed
