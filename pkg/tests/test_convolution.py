import numpy as np
import pytest

from voicelab.convolution import (ModeField, algebra_check, convolve_affine, convolve_affine_circle, convolve_line,
                                  direct_affine, direct_affine_circle, direct_line, young_suite)
from voicelab.exceptions import ConfigurationError, DomainError
from voicelab.grids import GridParams, VoiceField, build_grid
from voicelab.groups import AFFINE, AFFINE_CIRCLE
from voicelab.signals import Signal1D


def test_delta_is_identity(rng):
    f = Signal1D(rng.normal(size=64) + 0j, 0.5, -16.0)
    d = np.zeros(64, complex)
    d[32] = 1 / 0.5
    out = convolve_line(f, Signal1D(d, 0.5, -16.0))
    i = int(round((f.x0 - out.x0) / 0.5))
    assert np.allclose(out.samples[i: i + 64], f.samples)


def test_box_convolved_with_box_is_triangle():
    dx = 1 / 64
    box = Signal1D(np.where(np.abs((np.arange(256) - 128) * dx) < 0.5, 1.0, 0.0), dx)
    tri = convolve_line(box, box)
    x = tri.x
    assert np.max(np.abs(tri.samples.real - np.clip(1 - np.abs(x), 0, None))) < 2 * dx


def test_fft_engine_matches_direct_sum(rng):
    f = Signal1D(rng.normal(size=128) + 1j * rng.normal(size=128), 0.25, 3.0)
    g = Signal1D(rng.normal(size=128) + 0j, 0.25, -1.0)
    a, b = convolve_line(f, g), direct_line(f, g)
    assert a.x0 == b.x0
    assert np.max(np.abs(a.samples - b.samples)) < 1e-12
    with pytest.raises(ConfigurationError):
        convolve_line(f, Signal1D(g.samples, 0.5))


def _bump_field(grid, b0, la0, rng):
    B, A = grid.coords()
    c = rng.normal() + 1j * rng.normal()
    return VoiceField(grid, c * np.exp(-((B - b0) / 2) ** 2 - ((np.log(A) - la0) / 0.25) ** 2))


def test_affine_engine_matches_direct(rng):
    g = build_grid(AFFINE, GridParams.dyadic(n_b=64, db=0.5, n_a=16, per_octave=4))
    F, G = _bump_field(g, 1.0, 0.2, rng), _bump_field(g, -1.0, -0.2, rng)
    a, b = convolve_affine(F, G), direct_affine(F, G)
    assert np.max(np.abs(a.values - b.values)) / np.max(np.abs(b.values)) < 1e-9


def test_affine_convolution_is_bilinear(rng):
    g = build_grid(AFFINE, GridParams.dyadic(n_b=64, db=0.5, n_a=16, per_octave=4))
    F, G, H = (_bump_field(g, 0.0, 0.0, rng) for _ in range(3))
    lhs = convolve_affine(F * 2.0 + H * 1j, G)
    rhs = convolve_affine(F, G) * 2.0 + convolve_affine(H, G) * 1j
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12 * np.max(np.abs(rhs.values))


def test_disjoint_modes_give_zero(rng):
    g = build_grid(AFFINE_CIRCLE, GridParams.dyadic(n_b=32, db=0.5, n_a=8, per_octave=4, n_phi=8))
    ag = g.affine()
    F = ModeField({1: _bump_field(ag, 0, 0, rng)}, 8)
    G = ModeField({2: _bump_field(ag, 0, 0, rng)}, 8)
    H = convolve_affine_circle(F, G)
    assert all(np.max(np.abs(m.values)) == 0 for m in H.modes.values())


def test_mode_engine_matches_direct(rng):
    g = build_grid(AFFINE_CIRCLE, GridParams.dyadic(n_b=32, db=0.5, n_a=8, per_octave=4, n_phi=8))
    ag = g.affine()
    F = ModeField({n: _bump_field(ag, 0.5, 0.1, rng) for n in (-1, 0, 2)}, 8)
    G = ModeField({n: _bump_field(ag, -0.5, 0.0, rng) for n in (-1, 2)}, 8)
    fast = convolve_affine_circle(F, G).assemble(g)
    slow = direct_affine_circle(F.assemble(g), G.assemble(g))
    assert np.max(np.abs(fast.values - slow.values)) / np.max(np.abs(slow.values)) < 1e-8


def test_young_line(rng):
    f = Signal1D(np.exp(-np.linspace(-8, 8, 256, endpoint=False) ** 2) + 0j, 1 / 16)
    g = Signal1D(rng.normal(size=256) * np.exp(-np.linspace(-4, 4, 256, endpoint=False) ** 2) + 0j, 1 / 16)
    for p, q in [(1, 2), (2, 2), (1.5, 1.5)]:
        rep = young_suite(f, g, p, q)
        assert rep.slack >= -1e-12
    assert young_suite(f, g, 2, 2).norms["r"] == np.inf
    with pytest.raises(DomainError):
        young_suite(f, g, 3, 3)


def test_line_algebra_identities(rng):
    x = np.arange(512) * 0.25 - 64
    ops = [Signal1D(np.exp(-((x - c) / 3) ** 2) * (1 + 0.3j * c), 0.25) for c in (-3, 0, 4)]
    rep = algebra_check(*ops, 2.5)
    assert max(rep.residuals.values()) < 1e-10
