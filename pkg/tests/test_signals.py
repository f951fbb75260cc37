import numpy as np
import pytest

from voicelab.exceptions import ConfigurationError, DomainError
from voicelab.signals import (PacketSignal, Signal1D, bandlimit_project, bessel_packet, bump_cdf, fourier,
                              inv_fourier, mollifier, random_band_signal, read_signal_bin, read_signal_csv,
                              shannon_hat, shannon_time, shannon_wavelet, sinc_kernel, theta_modes,
                              write_signal_bin, write_signal_csv)


def test_gaussian_is_self_dual():
    x = (np.arange(1024) - 512) * 0.02
    f = Signal1D(np.exp(-np.pi * x ** 2), 0.02)
    F = fourier(f)
    assert np.max(np.abs(F.values - np.exp(-np.pi * F.freqs ** 2))) < 1e-12


def test_fourier_round_trip(rng):
    f = Signal1D(rng.normal(size=256) + 1j * rng.normal(size=256), 0.3, 1.7)
    g = inv_fourier(fourier(f))
    assert g.same_axis(f)
    assert np.max(np.abs(g.samples - f.samples)) < 1e-12


def test_plancherel(rng):
    f = Signal1D(rng.normal(size=512) + 0j, 0.5)
    assert fourier(f).norm() == pytest.approx(f.norm(), rel=1e-12)


def test_length_must_be_power_of_two():
    with pytest.raises(ConfigurationError):
        Signal1D(np.ones(100))


def test_declared_band_is_checked(rng):
    with pytest.raises(DomainError):
        Signal1D(rng.normal(size=64), 1.0, band=(-0.1, 0.1))


def test_bandlimit_projection_is_idempotent(rng):
    f = Signal1D(rng.normal(size=512) + 0j, 0.5)
    p = bandlimit_project(f, (-0.3, 0.4))
    pp = bandlimit_project(p, (-0.3, 0.4))
    assert np.max(np.abs(pp.samples - p.samples)) < 1e-12
    assert p.norm() <= f.norm()
    with pytest.raises(DomainError):
        bandlimit_project(f, (-2.0, 0.5))


def test_theta_modes_recover_known_modes():
    x = np.linspace(-4, 4, 64, endpoint=False)
    theta = 2 * np.pi * np.arange(16) / 16
    g = np.exp(-x ** 2)
    raw = g[:, None] * (2 + 3 * np.exp(2j * theta) - 1j * np.exp(-5j * theta))[None, :]
    s = theta_modes(raw, theta, 0.125, radius=4)
    assert np.allclose(s.mode(0).samples, 2 * g)
    assert np.allclose(s.mode(2).samples, 3 * g)
    assert s.mode(-5) is None
    assert s.truncation_error == pytest.approx(np.sum(g ** 2) * 0.125)
    assert np.allclose(theta_modes(s.to_raw(16), theta, 0.125).mode(2).samples, 3 * g)


def test_mollifier_is_band_indicator_away_from_edges():
    g = mollifier(0.05, 0.5)
    xi = g.freqs
    assert np.allclose(g.values[np.abs(xi) < 0.45], 1.0)
    assert np.allclose(g.values[np.abs(xi) > 0.55], 0.0)
    assert np.all((g.values >= -1e-15) & (g.values <= 1 + 1e-15))
    assert bump_cdf(np.array([-2.0, 0.0, 2.0])) == pytest.approx([0.0, 0.5, 1.0])
    with pytest.raises(DomainError):
        mollifier(0.6, 0.5)


def test_sinc_kernel_zeros_and_peak():
    k = sinc_kernel(0.5, (64, 0.25, -8.0))
    x = k.x
    assert k.samples[x == 0][0] == pytest.approx(1.0)
    ints = (x != 0) & (np.abs(x - np.round(x)) < 1e-12)
    assert np.max(np.abs(k.samples[ints])) < 1e-15
    with pytest.raises(DomainError):
        sinc_kernel(0.5, (64, 1.0, -32.0))


def test_shannon_time_matches_spectrum():
    s = shannon_wavelet((4096, 0.25, -512.0))
    F = fourier(s)
    inside = (np.abs(np.abs(F.freqs) - 0.25) > 0.01) & (np.abs(np.abs(F.freqs) - 0.5) > 0.01)
    err = np.abs(F.values - shannon_hat(F.freqs))[inside]
    assert np.sqrt(np.mean(err ** 2)) < 0.05
    assert shannon_time(0.0) == pytest.approx(0.5)


def test_random_band_signal_respects_band(rng):
    f = random_band_signal(rng, 1024, 0.5, band=(0.1, 0.3), two_sided=False)
    F = fourier(f)
    assert np.max(np.abs(F.values[(F.freqs < 0.1) | (F.freqs > 0.3)])) < 1e-12


def test_bessel_packet_transform():
    x = (np.arange(4096) - 2048) * 0.25
    f = Signal1D(bessel_packet(x, 0.3), 0.25)
    F = fourier(f)
    want = np.clip(1 - (F.freqs / 0.3) ** 2, 0, None) ** 4
    assert np.max(np.abs(F.values - want)) < 1e-6


def test_packet_signal_norms(rng):
    ps = PacketSignal.random(rng, count=2)
    n1, n2 = ps.lp_norms([1.0, 2.0])
    assert n2 == pytest.approx(ps.lp_norm(2.0))
    sampled = ps.sample(8192, 0.5)
    assert sampled.norm(2) == pytest.approx(n2, rel=1e-3)
    assert n1 > 0


def test_csv_and_binary_round_trip(tmp_path, rng):
    f = Signal1D(rng.normal(size=32) + 1j * rng.normal(size=32), 0.5, -3.0)
    write_signal_csv(tmp_path / "s.csv", f)
    g = read_signal_csv(tmp_path / "s.csv")
    assert g.same_axis(f) and np.allclose(g.samples, f.samples, rtol=1e-11, atol=1e-12)  # 12 digits
    write_signal_bin(tmp_path / "s.bin", f)
    h = read_signal_bin(tmp_path / "s.bin", 0.5, -3.0)
    assert np.array_equal(h.samples, f.samples)
