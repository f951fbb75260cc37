import math

import numpy as np
import pytest

from voicelab.convolution import affine_left
from voicelab.exceptions import DomainError, InadmissibleError
from voicelab.grids import GridParams, build_grid, lp_norm
from voicelab.groups import AFFINE, AFFINE_CIRCLE, LINE
from voicelab.signals import Signal1D, SpectralProfile, random_band_signal
from voicelab.voice import (BandAtom, PaulAtom, Representation, RepKind, ShannonAtom, calderon, decay_sum,
                            default_decay, kernel, kernel_symmetry_residual, normalize_admissible, polar_inverse,
                            polar_norm, polar_unitary, random_mode_signal, schrodinger_flow,
                            schrodinger_flow_residual, schrodingerlet_rep, synthesize, translation_rep, vector_change,
                            voice, wavelet_rep)


def test_translation_voice_of_band_signal_is_itself(line_grid, rng):
    v = random_band_signal(rng, line_grid.n_b, line_grid.db, line_grid.b0, band=(0.02, 0.45))
    V = voice(v, translation_rep(0.5), line_grid)
    assert np.max(np.abs(V.values - v.samples)) < 1e-12 * np.max(np.abs(v.samples))


def test_calderon_constants():
    assert calderon(ShannonAtom()) == pytest.approx(math.log(2), rel=1e-12)
    assert calderon(ShannonAtom(), -1) == pytest.approx(math.log(2), rel=1e-12)
    assert calderon(ShannonAtom(positive_only=True), -1) == 0.0
    p = PaulAtom(order=6, peak=0.3)
    assert calderon(p) == pytest.approx(p.calderon_exact(), rel=1e-10)


def test_calderon_of_sampled_profile_warns_at_zero():
    from voicelab.voice import CalderonDivergenceWarning

    prof = SpectralProfile(np.ones(64), 0.01, -0.32, 0.0)
    with pytest.warns(CalderonDivergenceWarning):
        calderon(prof)


def test_normalize_admissible():
    rep, report = normalize_admissible(Representation(RepKind.WAVELET, ShannonAtom()))
    assert report.admissible
    assert report.normalization_factor == pytest.approx(1 / math.sqrt(math.log(2)))
    with pytest.raises(InadmissibleError):
        normalize_admissible(Representation(RepKind.WAVELET, ShannonAtom(positive_only=True)))
    half = translation_rep(0.5).scaled(0.5)
    with pytest.raises(InadmissibleError):
        normalize_admissible(half)


def test_schrodingerlet_modes_are_admissible():
    rep, report = normalize_admissible(schrodingerlet_rep("paul", radius=4, normalize=False))
    assert report.admissible
    assert set(report.constants) == set(range(-4, 5))
    assert decay_sum(default_decay(4), 2.0) == pytest.approx(1 + 2 * sum(2 ** (-n / 2) for n in range(1, 5)))


def test_wavelet_voice_is_isometric(small_affine, rng):
    rep = wavelet_rep(PaulAtom(order=12, peak=0.25))
    v = random_band_signal(rng, small_affine.n_b, small_affine.db, small_affine.b0, band=(0.08, 0.45))
    V = voice(v, rep, small_affine)
    assert lp_norm(V, 2) == pytest.approx(v.norm(), rel=1e-6)


def test_wavelet_covariance(rng):
    g = build_grid(AFFINE, GridParams.dyadic(n_b=1024))
    rep = wavelet_rep(PaulAtom(order=12, peak=0.25))
    v = random_band_signal(rng, g.n_b, g.db, g.b0, band=(0.1, 0.4), spread=20)
    x = (g.db * 6, 1.0)
    # lambda(x) v for a = 1 is a shift by six samples (v is negligible near the edges)
    lhs = voice(Signal1D(np.roll(v.samples, 6), v.dx, v.x0), rep, g)
    rhs = affine_left(voice(v, rep, g), x)
    inner = slice(64, -64)
    err = np.abs(lhs.values[inner] - rhs.values[inner]).max() / np.abs(rhs.values).max()
    assert err < 1e-8


def test_kernel_is_hermitian(small_affine):
    K = kernel(wavelet_rep(PaulAtom(order=12, peak=0.25)), small_affine)
    assert kernel_symmetry_residual(K) < 1e-8
    L = kernel(translation_rep(0.5), build_grid(LINE))
    assert kernel_symmetry_residual(L) < 1e-14


def test_synthesis_inverts_voice_on_line(line_grid, rng):
    rep = translation_rep(0.5)
    v = random_band_signal(rng, line_grid.n_b, line_grid.db, line_grid.b0, band=(0.02, 0.45))
    w = synthesize(voice(v, rep, line_grid), rep)
    assert np.max(np.abs(w.samples - v.samples)) < 1e-12


def test_vector_change_for_translations(line_grid, rng):
    v = random_band_signal(rng, line_grid.n_b, line_grid.db, line_grid.b0, band=(0.02, 0.45))
    r = vector_change(v, translation_rep(0.5), translation_rep(0.5, phase=(3.0, 0.0, 1.0)), line_grid)
    assert r < 1e-10


def test_schrodingerlet_voice_norm(rng):
    g = build_grid(AFFINE_CIRCLE, GridParams.dyadic(n_b=1024))
    rep = schrodingerlet_rep("paul", radius=4)
    v = random_mode_signal(rng, rep, g, modes=[0, 1, -2])
    V = voice(v, rep, g)
    assert V.norm2() == pytest.approx(v.norm(), rel=1e-5)
    with pytest.raises(DomainError):
        voice(v.mode(0), rep, g)


def test_polar_unitary_preserves_gaussian_norm():
    zeta = np.linspace(-6, 6, 241)
    Z1, Z2 = np.meshgrid(zeta, zeta, indexing="ij")
    v = np.exp(-np.pi * (Z1 ** 2 + Z2 ** 2)) * (1 + 0.5j * Z1)
    exact = math.sqrt(0.5 * (1 + 0.25 / (4 * math.pi)))
    theta = 2 * np.pi * np.arange(64) / 64
    errs = []
    for n in (1201, 2401, 4801):
        xi = np.linspace(0, 30, n)
        errs.append(abs(polar_norm(polar_unitary(v, zeta, xi, theta), xi, theta) / exact - 1))
    assert errs[-1] < 1e-4
    assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5  # second order in the xi step
    theta = 2 * np.pi * np.arange(128) / 128
    back = polar_inverse(polar_unitary(v, zeta, xi, theta), xi, theta, zeta)
    # z1 = sqrt(xi) cos(theta) is not smooth in xi at the origin, so check the bulk and the L^2 error
    assert np.max(np.abs(back - v)[Z1 ** 2 + Z2 ** 2 > 0.25]) < 1e-5
    assert np.linalg.norm(back - v) / np.linalg.norm(v) < 1e-3


def test_schrodinger_flow():
    x = (np.arange(128) - 64) * 0.1
    X, Y = np.meshgrid(x, x, indexing="ij")
    f = np.exp(-((X - 1) ** 2 + Y ** 2)) * np.exp(2j * np.pi * 0.5 * X)
    assert np.allclose(schrodinger_flow(f, 0.1, 0.0), f)
    g = schrodinger_flow(f, 0.1, 0.3)
    assert np.linalg.norm(g) == pytest.approx(np.linalg.norm(f), rel=1e-12)
    assert np.allclose(schrodinger_flow(g, 0.1, -0.3), f)
    assert schrodinger_flow_residual(f, 0.1, 0.3, h=1e-4) < 1e-6


def test_band_atom_phase_has_unit_modulus():
    xi = np.linspace(-0.49, 0.49, 101)
    assert np.allclose(np.abs(BandAtom(phase=(3.0, 0.0, 1.0)).hat(xi)), 1.0)
