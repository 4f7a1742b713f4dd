import math

import numpy as np
import pytest

from arithwaves import field, nodal


def _cos_grid(G):
    i = np.arange(G) / G
    return math.sqrt(2) * np.cos(2 * math.pi * i)[:, None] * np.ones((1, G))


def test_synthetic_vertical_lines():
    # sqrt(2) cos(2 pi x1) vanishes on two vertical circles of total length 2
    segs = nodal.nodal_segments(_cos_grid(64))
    assert nodal.segment_lengths(segs).sum() == pytest.approx(2.0, abs=1e-6)


def test_constant_sign_no_segments():
    assert len(nodal.nodal_segments(np.ones((16, 16)))) == 0
    assert len(nodal.nodal_segments(-np.ones((16, 16)))) == 0


def test_scale_invariance():
    w = field.sample_wave(17, 3, 0)
    v = field.evaluate_grid(w, 66)
    s1 = nodal.nodal_segments(v)
    s2 = nodal.nodal_segments(2.0 * v)
    assert np.allclose(np.sort(s1.ravel()), np.sort(s2.ravel()))


def test_exact_zero_corner_handled():
    v = np.ones((8, 8))
    v[2, 2] = 0.0  # perturbed internally, must not crash or emit NaN
    segs = nodal.nodal_segments(v)
    assert np.all(np.isfinite(segs))


def test_richardson_resolution():
    w = field.sample_wave(17, 5, 2)
    l16 = nodal.nodal_length(w, "full", grid_per_wavelength=16)
    l32 = nodal.nodal_length(w, "full", grid_per_wavelength=32)
    assert abs(l16 - l32) / l32 < 0.005


def test_ball_clipping_geometry():
    # a single horizontal chord through the center: clipped length = 2s
    G = 64
    i = np.arange(G) / G
    v = np.sin(2 * math.pi * (i - 0.5))[None, :] * np.ones((G, 1))
    segs = nodal.nodal_segments(v)
    for s in (0.1, 0.25, 0.4):
        # zero set: the two horizontal lines x2 = 0.5 and x2 = 0 (periodic);
        # only the first crosses the ball at (1/2, 1/2)
        assert nodal.ball_length(segs, s) == pytest.approx(2 * s, rel=1e-6)


def test_ball_strictly_smaller_than_full():
    w = field.sample_wave(17, 1, 0)
    full = nodal.nodal_length(w, "full", grid_per_wavelength=16)
    ball = nodal.nodal_length(w, "ball", s=0.49, grid_per_wavelength=16)
    assert 0 < ball < full


def test_nodal_length_validation():
    w = field.sample_wave(17, 1, 0)
    with pytest.raises(ValueError):
        nodal.nodal_length(w, "ball", s=0.6)
    with pytest.raises(ValueError):
        nodal.nodal_length(w, "full", grid_per_wavelength=4)


def test_monte_carlo_small():
    st = nodal.monte_carlo(17, 0.2, 40, seed=0, grid_per_wavelength=12)
    assert st.trials == 40
    assert len(st.samples_full) == 40
    assert st.var_full >= 0 and st.var_restricted >= 0
    assert -1.0 <= st.corr <= 1.0
    # statistics recomputable from samples
    assert st.mean_full == pytest.approx(st.samples_full.mean())
    assert st.var_full == pytest.approx(st.samples_full.var(ddof=1))
    assert "var_restricted" in st.bootstrap and "identity_gap" in st.bootstrap


def test_monte_carlo_two_trials_boundary():
    st = nodal.monte_carlo(17, 0.2, 2, seed=0, grid_per_wavelength=12)
    assert np.isfinite(st.var_full)
    with pytest.raises(ValueError):
        nodal.monte_carlo(17, 0.2, 1)


def test_m_eta_forced_values():
    assert nodal.m_eta_value(0.0, 0.0, 0.0) == pytest.approx(2.0)
    assert nodal.m_eta_value(1.0, 0.0, 0.0) == pytest.approx(2.0 / math.sqrt(2.0))


@pytest.mark.parametrize("eta", [0.0, 0.28, 1.0])
def test_m_eta_moments(eta):
    x = nodal.m_eta(eta, 1_000_000, seed=1)
    assert abs(x.mean()) < 0.01
    assert x.var() == pytest.approx(4.0, abs=0.05)


def test_distribution_compare_self_and_gaussian():
    rng = np.random.default_rng(0)
    own = nodal.m_eta(0.3, 2000, seed=7)
    res = nodal.distribution_compare(own, 0.3, seed=4)
    assert res["verdict"]
    assert res["w1"] <= res["null95"]
    gauss = rng.standard_normal(2000)
    res = nodal.distribution_compare(gauss, 0.3, seed=4)
    assert not res["verdict"]
    with pytest.raises(ValueError):
        nodal.distribution_compare(gauss[:100], 0.3)


def test_kac_rice_bracket_small_n():
    b = nodal.kac_rice_variance(1, 0.3, mc_samples=3000, seed=0)
    assert b["lower"] < b["upper"]
    # bracket narrows as the excision radius shrinks
    b2 = nodal.kac_rice_variance(1, 0.3, h0=0.005, mc_samples=3000, seed=0)
    assert b2["envelope"] < b["envelope"]
