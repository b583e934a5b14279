"""Ground-truth narrowband signal model for a uniform linear array.

Element ``n`` (0-based) of the steering vector toward ``theta`` is
``exp(1j * 2*pi * d * n * sin(theta))`` with ``d`` the spacing in
wavelengths; at half-wavelength spacing this is ``exp(1j*pi*n*sin(theta))``.
Spectra are insensitive to conjugating this convention or to a global phase.
"""

from dataclasses import dataclass, field
import hashlib

import numpy as np

from ._linalg import as_hermitian, hpd_factor, hpd_solve


@dataclass(frozen=True)
class ArrayGeometry:
    n_elements: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 2:
            raise ValueError(f"need at least 2 elements, got {self.n_elements}")
        if not self.spacing_wavelengths > 0:
            raise ValueError("element spacing must be positive")


@dataclass(frozen=True)
class Source:
    doa: float  # radians
    power: float


@dataclass(frozen=True)
class SourceScenario:
    """Array, far-field sources and white noise level.

    ``sources`` may be empty (noise only). ``soi_index`` picks the signal of
    interest used by the SINR and interference-plus-noise quantities.
    """

    geometry: ArrayGeometry
    sources: tuple = ()
    noise_power: float = 1.0
    soi_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(
            s if isinstance(s, Source) else Source(*s) for s in self.sources))
        if not self.noise_power > 0:
            raise ValueError("noise power must be positive")
        for s in self.sources:
            if not -np.pi / 2 <= s.doa <= np.pi / 2:
                raise ValueError(f"DoA {s.doa} outside [-pi/2, pi/2]")
            if not s.power > 0:
                raise ValueError(f"source power must be positive, got {s.power}")
        if len(self.sources) >= self.geometry.n_elements:
            raise ValueError("number of sources must be smaller than the number of elements")
        if self.sources and not 0 <= self.soi_index < len(self.sources):
            raise ValueError(f"soi_index {self.soi_index} out of range")

    @property
    def n_elements(self):
        return self.geometry.n_elements

    @property
    def n_sources(self):
        return len(self.sources)

    @property
    def doas(self):
        return np.array([s.doa for s in self.sources])

    @property
    def powers(self):
        return np.array([s.power for s in self.sources])


def paper_scenario():
    """Ten-element half-wavelength ULA, unit-power sources at -30, -26 and 30
    degrees, noise power 1/32 (15 dB SNR)."""
    return SourceScenario(
        geometry=ArrayGeometry(10),
        sources=[(np.deg2rad(d), 1.0) for d in (-30.0, -26.0, 30.0)],
        noise_power=1 / 32,
    )


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    """``L`` array snapshots stored column-wise in an ``N x L`` matrix."""

    snapshots: np.ndarray
    seed: int = None
    _digest: str = field(default=None, init=False, repr=False)

    def __post_init__(self):
        X = np.asarray(self.snapshots, dtype=complex)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValueError("snapshot set must contain at least one length-N vector")
        X.setflags(write=False)
        object.__setattr__(self, "snapshots", X)

    @property
    def n_elements(self):
        return self.snapshots.shape[0]

    def __len__(self):
        return self.snapshots.shape[1]

    def digest(self):
        """SHA-256 of the raw snapshot bytes."""
        if self._digest is None:
            h = hashlib.sha256(np.ascontiguousarray(self.snapshots).tobytes()).hexdigest()
            object.__setattr__(self, "_digest", h)
        return self._digest


def steering_vector(geometry, theta):
    if not -np.pi / 2 <= theta <= np.pi / 2:
        raise ValueError(f"theta = {theta} outside [-pi/2, pi/2]")
    n = np.arange(geometry.n_elements)
    return np.exp(2j * np.pi * geometry.spacing_wavelengths * n * np.sin(theta))


def steering_matrix(geometry, thetas):
    """Steering vectors for every angle in ``thetas``, as columns (``N x M``)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if np.any(np.abs(thetas) > np.pi / 2):
        raise ValueError("all angles must lie in [-pi/2, pi/2]")
    n = np.arange(geometry.n_elements)[:, None]
    return np.exp(2j * np.pi * geometry.spacing_wavelengths * n * np.sin(thetas)[None, :])


def _covariance(scenario, indices):
    N = scenario.n_elements
    R = scenario.noise_power * np.eye(N, dtype=complex)
    for k in indices:
        src = scenario.sources[k]
        a = steering_vector(scenario.geometry, src.doa)
        R += src.power * np.outer(a, a.conj())
    return R


def true_covariance(scenario):
    """``sum_k p_k a_k a_k^H + sigma^2 I``."""
    return _covariance(scenario, range(scenario.n_sources))


def interference_noise_covariance(scenario):
    """True covariance with the signal of interest removed."""
    return _covariance(scenario, [k for k in range(scenario.n_sources)
                                  if k != scenario.soi_index])


def _complex_normal(rng, shape, power):
    # real and imaginary blocks drawn in that order; pseudo-covariance is zero
    scale = np.sqrt(np.asarray(power, dtype=float) / 2)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return scale * (re + 1j * im)


def snapshot_rng(seed):
    """Counter-based generator used for snapshot draws."""
    return np.random.Generator(np.random.Philox(seed))


def generate_snapshots(scenario, L, seed):
    """Draw ``L`` i.i.d. snapshots ``x = sum_k a_k s_k + v``.

    Source amplitudes and noise are circularly-symmetric complex Gaussian.
    The output is a pure function of ``(scenario, L, seed)``.
    """
    if int(L) != L or L < 1:
        raise ValueError(f"need at least one snapshot, got L={L}")
    L = int(L)
    rng = snapshot_rng(seed)
    K, N = scenario.n_sources, scenario.n_elements
    S = _complex_normal(rng, (K, L), scenario.powers[:, None] if K else 1.0)
    V = _complex_normal(rng, (N, L), scenario.noise_power)
    X = V
    if K:
        X = steering_matrix(scenario.geometry, scenario.doas) @ S + V
    return SnapshotSet(X, seed=seed)


def output_sinr(w, scenario):
    """Output SINR ``p_1 |w^H a_1|^2 / (w^H R_n w)`` for the signal of interest."""
    w = getattr(w, "weights", w)
    w = np.asarray(w, dtype=complex)
    if not np.any(w):
        raise ValueError("SINR undefined for the zero beamformer")
    if scenario.n_sources == 0:
        return 0.0
    src = scenario.sources[scenario.soi_index]
    a1 = steering_vector(scenario.geometry, src.doa)
    Rn = interference_noise_covariance(scenario)
    signal = src.power * abs(np.vdot(w, a1)) ** 2
    return float(signal / np.real(np.vdot(w, Rn @ w)))


def mvdr_weights(Rn, a):
    """Minimum-variance distortionless weights ``Rn^{-1} a / (a^H Rn^{-1} a)``."""
    from .beamformers import Beamformer

    a = np.asarray(a, dtype=complex)
    factor = hpd_factor(as_hermitian(Rn, "Rn"), "Rn")
    Ria = hpd_solve(factor, a)
    return Beamformer(Ria / np.real(np.vdot(a, Ria)))
