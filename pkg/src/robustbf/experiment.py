"""Seeded Monte-Carlo harness for spectrum dispersion and resolution studies.

Every trial draws one snapshot set from a seed derived from
``(master_seed, trial)``; all methods in that trial share the same sample
covariance. Trials are independent, so they may run in any order or
concurrently; aggregation only depends on trial indices.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import hashlib
import logging

import numpy as np
import yaml

from .array_model import ArrayGeometry, SourceScenario, generate_snapshots, steering_matrix, \
    true_covariance
from .beamformers import (QuadraticRegularized, Singleton, SpectrumGrid, beamformer_power,
                          capon_spectrum, default_grid, globally_robust_loading,
                          music_pseudospectrum, regularized_constraint_weights,
                          udl_loaded_covariance)
from .covariance import (GammaSpec, bayesian_combine, diagonal_load, eigen_threshold,
                         eigendecompose, gamma_matrix, sample_covariance)
from .errors import BeamformingError
from .metrics import PatternEnsemble, dispersion, dispersion_contributions, normalize_pattern

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Constraint sets used to evaluate spectra
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstraintSpec:
    """``singleton`` (distortionless) or ``quadratic`` with level ``eps2``
    and identity regularizer."""

    kind: str = "singleton"
    eps2: float = 0.0

    def __post_init__(self):
        if self.kind not in ("singleton", "quadratic"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.eps2 < 0:
            raise ValueError("eps2 must be nonnegative")

    def build(self, a):
        if self.kind == "singleton":
            return Singleton(a)
        return QuadraticRegularized(a, self.eps2)


def constrained_spectrum(M, grid, geometry, constraint):
    """Optimal objective of ``min w^H M w`` over the constraint set at each angle."""
    if constraint.kind == "singleton":
        return capon_spectrum(M, grid, geometry)
    A = steering_matrix(geometry, grid)
    values = np.empty(A.shape[1])
    for j in range(A.shape[1]):
        bf = regularized_constraint_weights(M, constraint.build(A[:, j]))
        values[j] = beamformer_power(bf, M)
    return SpectrumGrid(np.asarray(grid, dtype=float), values)


# --------------------------------------------------------------------------
# Methods
# --------------------------------------------------------------------------

def _fmt(x):
    return f"{x:g}"


@dataclass(frozen=True)
class Capon:
    name = "Capon"

    def label(self):
        return self.name

    def parameter(self):
        return ""

    def matrix(self, Rhat, n_sources):
        return Rhat

    def spectrum(self, Rhat, n_sources, grid, geometry, constraint):
        return constrained_spectrum(self.matrix(Rhat, n_sources), grid, geometry, constraint)


@dataclass(frozen=True)
class CaponDL(Capon):
    eps: float = 0.0
    name = "Capon-DL"

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("loading level must be nonnegative")

    def label(self):
        return f"{self.name}({_fmt(self.eps)})"

    def parameter(self):
        return _fmt(self.eps)

    def matrix(self, Rhat, n_sources):
        return diagonal_load(Rhat, self.eps)


@dataclass(frozen=True)
class CaponUDL(Capon):
    delta1: float = 1.0
    delta2: float = 0.01
    name = "Capon-UDL"

    def __post_init__(self):
        GammaSpec(self.delta1, self.delta2, 0)

    def label(self):
        return f"{self.name}({_fmt(self.delta1)},{_fmt(self.delta2)})"

    def parameter(self):
        return f"delta1={_fmt(self.delta1)};delta2={_fmt(self.delta2)}"

    def matrix(self, Rhat, n_sources):
        return udl_loaded_covariance(Rhat, GammaSpec(self.delta1, self.delta2, n_sources))


@dataclass(frozen=True)
class EigThreshold(Capon):
    mu: float = 0.0
    name = "Capon-ET"

    def __post_init__(self):
        if not 0 <= self.mu <= 1:
            raise ValueError("mu must lie in [0, 1]")

    def label(self):
        return f"{self.name}({_fmt(self.mu)})"

    def parameter(self):
        return _fmt(self.mu)

    def matrix(self, Rhat, n_sources):
        return eigen_threshold(Rhat, self.mu)


@dataclass(frozen=True)
class PriorSpec:
    """Prior covariance: ``identity`` or the subspace loading matrix of the
    sample covariance (``gamma`` with ``delta1``, ``delta2``)."""

    kind: str = "identity"
    delta1: float = 1.0
    delta2: float = 0.01

    def __post_init__(self):
        if self.kind not in ("identity", "gamma"):
            raise ValueError(f"unknown prior kind {self.kind!r}")
        GammaSpec(self.delta1, self.delta2, 0)

    def matrix(self, Rhat, n_sources):
        if self.kind == "identity":
            return np.eye(Rhat.shape[0], dtype=complex)
        return gamma_matrix(eigendecompose(Rhat), GammaSpec(self.delta1, self.delta2, n_sources))

    def describe(self):
        if self.kind == "identity":
            return "identity"
        return f"gamma({_fmt(self.delta1)},{_fmt(self.delta2)})"


@dataclass(frozen=True)
class Bayesian(Capon):
    beta: float = 0.5
    prior: PriorSpec = field(default_factory=PriorSpec)
    name = "Capon-Bayes"

    def __post_init__(self):
        if not 0 <= self.beta <= 1:
            raise ValueError("beta must lie in [0, 1]")

    def label(self):
        return f"{self.name}({_fmt(self.beta)},{self.prior.describe()})"

    def parameter(self):
        return f"beta={_fmt(self.beta)};prior={self.prior.describe()}"

    def matrix(self, Rhat, n_sources):
        return bayesian_combine(Rhat, self.prior.matrix(Rhat, n_sources), self.beta)


@dataclass(frozen=True)
class Music(Capon):
    name = "MUSIC"

    def matrix(self, Rhat, n_sources):
        raise TypeError("MUSIC is not a loaded-covariance method")

    def spectrum(self, Rhat, n_sources, grid, geometry, constraint):
        return music_pseudospectrum(Rhat, n_sources, grid, geometry)


@dataclass(frozen=True)
class GloballyRobust(Capon):
    """Budgeted loading: at each angle the loading is chosen so that the
    loaded optimum exceeds the sample optimum by ``t``; the reported value is
    the resulting beamformer's power ``w^H Rhat w``."""

    t: float = 0.0
    weight: PriorSpec = field(default_factory=PriorSpec)
    name = "Capon-GR"

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("objective excess t must be nonnegative")

    def label(self):
        return f"{self.name}({_fmt(self.t)},{self.weight.describe()})"

    def parameter(self):
        return f"t={_fmt(self.t)};weight={self.weight.describe()}"

    def matrix(self, Rhat, n_sources):
        raise TypeError("globally robust loading is chosen per angle")

    def spectrum(self, Rhat, n_sources, grid, geometry, constraint):
        C = self.weight.matrix(Rhat, n_sources)
        unloaded = constrained_spectrum(Rhat, grid, geometry, constraint).values
        A = steering_matrix(geometry, grid)
        values = np.empty(A.shape[1])
        for j in range(A.shape[1]):
            sol = globally_robust_loading(Rhat, constraint.build(A[:, j]),
                                          unloaded[j] + self.t, weight=C)
            values[j] = beamformer_power(sol.beamformer, Rhat)
        return SpectrumGrid(np.asarray(grid, dtype=float), values)


METHOD_KINDS = {
    "capon": Capon,
    "capon_dl": CaponDL,
    "capon_udl": CaponUDL,
    "eig_threshold": EigThreshold,
    "bayesian": Bayesian,
    "music": Music,
    "globally_robust": GloballyRobust,
}


def method_from_dict(d):
    d = dict(d)
    kind = d.pop("kind", None)
    if kind not in METHOD_KINDS:
        raise ValueError(f"unknown method kind {kind!r}; expected one of {sorted(METHOD_KINDS)}")
    for key in ("prior", "weight"):
        if key in d:
            v = d[key]
            d[key] = PriorSpec(kind=v) if isinstance(v, str) else PriorSpec(**v)
    try:
        return METHOD_KINDS[kind](**d)
    except TypeError as exc:
        raise ValueError(f"bad parameters for method {kind!r}: {exc}") from None


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    scenario: SourceScenario
    methods: tuple
    grid_points: int = 200
    trials: int = 10
    snapshots: int = 25
    master_seed: int = 0
    constraint: ConstraintSpec = field(default_factory=ConstraintSpec)

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.snapshots < 1:
            raise ValueError("snapshots must be at least 1")
        if not self.methods:
            raise ValueError("no methods configured")
        labels = [m.label() for m in self.methods]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate methods: {labels}")

    @property
    def grid(self):
        return default_grid(self.grid_points)

    def replace(self, **changes):
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(changes)
        return ExperimentConfig(**d)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        sc = dict(d.pop("scenario", {}))
        unknown_sc = set(sc) - {"n_elements", "spacing_wavelengths", "doas_deg", "powers",
                                "noise_power", "soi_index"}
        if unknown_sc:
            raise ValueError(f"unknown scenario keys: {sorted(unknown_sc)}")
        doas = [float(x) for x in sc.get("doas_deg", [])]
        powers = sc.get("powers", [1.0] * len(doas))
        if len(powers) != len(doas):
            raise ValueError("powers and doas_deg must have the same length")
        scenario = SourceScenario(
            geometry=ArrayGeometry(int(sc.get("n_elements", 10)),
                                   float(sc.get("spacing_wavelengths", 0.5))),
            sources=[(np.deg2rad(t), float(p)) for t, p in zip(doas, powers)],
            noise_power=float(sc.get("noise_power", 1 / 32)),
            soi_index=int(sc.get("soi_index", 0)),
        )
        methods = [method_from_dict(m) for m in d.pop("methods", [])]
        constraint = ConstraintSpec(**d.pop("constraint", {}))
        unknown = set(d) - {"grid_points", "trials", "snapshots", "master_seed"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(scenario=scenario, methods=methods, constraint=constraint,
                   **{k: int(v) for k, v in d.items()})

    @classmethod
    def from_yaml(cls, path):
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh) or {})


def paper_config(methods=None, **overrides):
    """Ten-element ULA, sources at -30/-26/30 deg, noise 1/32, 10 trials of
    25 snapshots, 200-point grid."""
    from .array_model import paper_scenario

    methods = methods if methods is not None else (Capon(),)
    return ExperimentConfig(scenario=paper_scenario(), methods=methods, **overrides)


TABLE_PRESETS = {
    "table1": lambda: tuple(CaponDL(e) for e in (0.0, 0.01, 0.025, 0.05)),
    "table2": lambda: (Capon(),) + tuple(CaponUDL(d, 0.01) for d in (1.0, 2.0, 3.0, 10.0)),
    "table3": lambda: (Capon(),) + tuple(CaponUDL(d, 0.025) for d in (1.0, 3.0, 5.0, 10.0)),
}


def table_config(name, master_seed=0, **overrides):
    if name not in TABLE_PRESETS:
        raise ValueError(f"unknown table {name!r}; expected one of {sorted(TABLE_PRESETS)}")
    return paper_config(TABLE_PRESETS[name](), master_seed=master_seed, **overrides)


# --------------------------------------------------------------------------
# Monte-Carlo
# --------------------------------------------------------------------------

def trial_seed(master_seed, trial):
    """64-bit snapshot seed for one trial, a hash of ``(master_seed, trial)``."""
    ss = np.random.SeedSequence([int(master_seed), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def covariance_digest(R):
    return hashlib.sha256(np.ascontiguousarray(R).tobytes()).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class RunRecord:
    method: str
    trial: int
    seed: int
    covariance_digest: str
    values: np.ndarray
    error: str = None
    contribution: float = float("nan")

    @property
    def failed(self):
        return self.error is not None


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    config: ExperimentConfig
    grid: np.ndarray
    records: tuple
    ensembles: dict
    dispersions: dict

    def dispersion_rows(self):
        """``(method, parameter, dispersion)`` in configured method order."""
        return [(m.label(), m.parameter(), self.dispersions[m.label()])
                for m in self.config.methods]

    def mean_pattern(self, label):
        """Average of the per-trial peak-normalized patterns."""
        ens = self.ensembles[label]
        if ens is None:
            return np.full(self.grid.size, np.nan)
        return normalize_pattern(ens.patterns).mean(axis=0)

    def records_for(self, label):
        return [r for r in self.records if r.method == label]


def _run_trial(config, trial, grid, exact_r0=False):
    sc = config.scenario
    if exact_r0:
        seed = -1
        Rhat = true_covariance(sc)
    else:
        seed = trial_seed(config.master_seed, trial)
        Rhat = sample_covariance(generate_snapshots(sc, config.snapshots, seed))
    digest = covariance_digest(Rhat)
    out = []
    for m in config.methods:
        try:
            values = m.spectrum(Rhat, sc.n_sources, grid, sc.geometry, config.constraint).values
            err = None
        except (BeamformingError, np.linalg.LinAlgError, ValueError) as exc:
            log.warning("%s failed in trial %d: %s", m.label(), trial, exc)
            values, err = np.full(grid.size, np.nan), f"{type(exc).__name__}: {exc}"
        out.append(RunRecord(m.label(), trial, seed, digest, values, err))
    return out


def run_monte_carlo(config, workers=1, exact_r0=False):
    """Run every configured method on ``config.trials`` shared snapshot sets.

    Failed (method, trial) cells are kept as NaN records; a method's
    dispersion is computed from its successful trials only.
    """
    grid = config.grid
    trials = range(1 if exact_r0 else config.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(lambda t: _run_trial(config, t, grid, exact_r0), trials))
    else:
        per_trial = [_run_trial(config, t, grid, exact_r0) for t in trials]

    records, ensembles, dispersions = [], {}, {}
    for m in config.methods:
        label = m.label()
        mine = [r for trial_recs in per_trial for r in trial_recs if r.method == label]
        good = [r for r in mine if not r.failed]
        if good:
            ens = PatternEnsemble(grid, np.stack([r.values for r in good]))
            contrib = iter(dispersion_contributions(ens))
            dispersions[label] = dispersion(ens)
        else:
            ens, contrib = None, iter(())
            dispersions[label] = float("nan")
        ensembles[label] = ens
        for r in mine:
            c = float("nan") if r.failed else next(contrib)
            records.append(RunRecord(r.method, r.trial, r.seed, r.covariance_digest,
                                     r.values, r.error, c))
    return MonteCarloResult(config, grid, tuple(records), ensembles, dispersions)
