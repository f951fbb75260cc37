import numpy as np
import pytest

from voicelab.exceptions import ConfigurationError, DomainError
from voicelab.grids import (GridParams, VoiceField, build_grid, cauchy_verdict, dyadic_windows, log_trapezoid_weights,
                            lp_norm, window_profile)
from voicelab.groups import AFFINE, AFFINE_CIRCLE, LINE, poly_weight
from voicelab.signals import sinc_kernel


def test_line_grid_nodes_and_weights():
    g = build_grid(LINE, GridParams(b_halfwidth=2, n_b=8))
    assert np.allclose(g.b, np.arange(-2, 2, 0.5))
    assert np.allclose(g.weights(), 0.5)


def test_affine_circle_box_mass():
    g = build_grid(AFFINE_CIRCLE, GridParams(b_halfwidth=2, n_b=16, a_min=0.5, a_max=2, n_a=17, n_phi=8))
    assert abs(g.box_mass() - 2 * 2 * (2 - 0.5)) / 6 < 1e-10


def test_default_box_mass():
    g = build_grid(AFFINE)
    exact = 2 * g.b_halfwidth * (1 / g.a[0] - 1 / g.a[-1])
    assert abs(g.box_mass() - exact) / exact < 1e-10


def test_log_trapezoid_is_exact_for_one_and_exp():
    a = np.geomspace(0.1, 10, 23)
    w = log_trapezoid_weights(a)
    t = np.log(a)
    assert np.sum(w) == pytest.approx(t[-1] - t[0], rel=1e-13)
    assert np.sum(w * np.exp(-t)) == pytest.approx(np.exp(-t[0]) - np.exp(-t[-1]), rel=1e-13)


def test_affine_needs_two_scales():
    with pytest.raises(ConfigurationError):
        build_grid(AFFINE, GridParams(n_a=1))


def test_lp_norm_constant_on_unit_mass():
    g = build_grid(LINE, GridParams(b_halfwidth=0.5, n_b=8))
    F = VoiceField(g, np.full(8, 3.0 + 0j))
    for p in (1, 2, 4.5, np.inf):
        assert lp_norm(F, p) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        lp_norm(F, 0.5)


def test_sinc_l2_norm_is_one(line_grid):
    K = VoiceField(line_grid, sinc_kernel(0.5, line_grid).samples.astype(complex))
    assert abs(lp_norm(K, 2) - 1.0) < 1e-3


def test_homogeneity_and_weights(small_affine, rng):
    F = VoiceField(small_affine, rng.normal(size=small_affine.shape) + 0j)
    for p in (1, 2, 3):
        assert lp_norm(F * (2 - 1j), p) == pytest.approx(abs(2 - 1j) * lp_norm(F, p), rel=1e-13)
    assert lp_norm(F, 2, poly_weight(1.0)) > lp_norm(F, 2)


def test_window_profiles(line_grid):
    K = VoiceField(line_grid, sinc_kernel(0.5, line_grid).samples.astype(complex))
    windows = [10, 30, 100, 300, 1000]
    p1 = window_profile(K, 1, windows)
    p2 = window_profile(K, 2, windows)
    assert p1[-1][1] / p1[0][1] > 1.5  # logarithmic growth
    assert abs(p2[-1][1] - p2[-2][1]) / p2[-1][1] < 1e-3
    vals = [v for _, v in p1]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert cauchy_verdict(window_profile(K, 1, dyadic_windows())) == "divergent"
    assert cauchy_verdict(window_profile(K, 2, dyadic_windows())) == "convergent"
    zero = VoiceField(line_grid, np.zeros(line_grid.n_b, complex))
    assert all(v == 0 for _, v in window_profile(zero, 2, windows))


def test_grid_refinement_second_order():
    def norm(n_b, n_a):
        g = build_grid(AFFINE, GridParams(b_halfwidth=8, n_b=n_b, a_min=0.125, a_max=8, n_a=n_a))
        B, A = g.coords()
        vals = np.exp(-B ** 2 - 4 * np.log(A) ** 2) * np.cos(np.log(A))
        return lp_norm(VoiceField(g, vals + 0j), 1)

    n1, n2, n3 = norm(32, 9), norm(64, 17), norm(128, 33)
    assert abs(n3 - n2) < 4 * abs(n2 - n1) + 1e-14
