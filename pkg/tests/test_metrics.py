import numpy as np
import pytest

import robustbf as rb


def test_dispersion_single_pattern_zero():
    ens = rb.PatternEnsemble(np.arange(4.0), [[1.0, 2.0, 3.0, 4.0]])
    assert rb.dispersion(ens) == 0.0


def test_dispersion_hand_computed():
    # normalized rows [1, 0] and [0, 1]; mean [0.5, 0.5]; each distance sqrt(0.5)
    ens = rb.PatternEnsemble(np.arange(2.0), [[2.0, 0.0], [0.0, 5.0]])
    assert rb.dispersion(ens) == pytest.approx(np.sqrt(0.5))
    assert rb.dispersion(ens, normalize=False) == pytest.approx(np.hypot(1.0, 2.5))
    assert rb.dispersion_contributions(ens).sum() == pytest.approx(rb.dispersion(ens))


def test_dispersion_scale_invariant(rng):
    P = rng.uniform(0.1, 1.0, (6, 20))
    scaled = P * rng.uniform(0.5, 5.0, (6, 1))
    g = np.arange(20.0)
    assert rb.dispersion(rb.PatternEnsemble(g, P)) == pytest.approx(
        rb.dispersion(rb.PatternEnsemble(g, scaled)), rel=1e-12)


def test_ensemble_shape_checks():
    with pytest.raises(ValueError):
        rb.PatternEnsemble(np.arange(3.0), np.ones((2, 4)))
    with pytest.raises(ValueError):
        rb.normalize_pattern([0.0, 0.0])


def test_find_peaks_strict_interior():
    s = rb.SpectrumGrid(np.arange(7.0), [5.0, 1.0, 3.0, 3.0, 2.0, 4.0, 0.0])
    # the endpoint 5 and the plateau at 3 are not strict interior maxima
    assert rb.find_peaks(s, 3) == [5.0]
    s = rb.SpectrumGrid(np.arange(6.0), [0.0, 2.0, 1.0, 3.0, 0.5, 0.0])
    assert rb.find_peaks(s, 2) == [3.0, 1.0]
    assert rb.find_peaks(s, 1) == [3.0]
    with pytest.raises(ValueError):
        rb.find_peaks(s, 0)


def test_resolution_check():
    g = np.deg2rad(np.arange(-40.0, -15.0, 0.5))
    two = np.exp(-((np.rad2deg(g) + 30) ** 2)) + np.exp(-((np.rad2deg(g) + 26) ** 2))
    one = np.exp(-((np.rad2deg(g) + 28) ** 2) / 20)
    a, b = np.deg2rad(-30.0), np.deg2rad(-26.0)
    assert rb.resolution_check(rb.SpectrumGrid(g, two), a, b, 1.5)
    assert rb.resolution_check(rb.SpectrumGrid(g, two), b, a, 1.5)
    assert not rb.resolution_check(rb.SpectrumGrid(g, one), a, b, 1.5)
    with pytest.raises(ValueError):
        rb.resolution_check(rb.SpectrumGrid(g, two), a, a, 1.5)
