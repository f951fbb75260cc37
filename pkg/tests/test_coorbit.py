import numpy as np
import pytest

from voicelab.coorbit import (coorbit_batch, coorbit_norm, integrability_profile, reproduce, reproducing_kernel,
                              write_batch_csv)
from voicelab.exceptions import DomainError
from voicelab.grids import VoiceField
from voicelab.signals import Signal1D, random_band_signal
from voicelab.voice import PaulAtom, translation_rep, voice, wavelet_rep


def test_zero_signal_has_zero_norm(line_grid):
    rep = translation_rep(0.5)
    r = coorbit_norm(Signal1D(np.zeros(line_grid.n_b), line_grid.db, line_grid.b0), rep, line_grid)
    assert r.coorbit_norm == 0.0 and r.residual == 0.0 and r.member


def test_homogeneity_and_comparison(line_grid, rng):
    rep = translation_rep(0.5)
    v = random_band_signal(rng, line_grid.n_b, line_grid.db, line_grid.b0, band=(0.02, 0.45))
    r1 = coorbit_norm(v, rep, line_grid, p=1.5)
    r2 = coorbit_norm(v * (3 - 4j), rep, line_grid, p=1.5)
    assert r2.coorbit_norm == pytest.approx(5 * r1.coorbit_norm, rel=1e-12)
    assert r1.coorbit_norm == pytest.approx(r1.comparison_norm, rel=1e-10)
    assert r1.member
    with pytest.raises(DomainError):
        coorbit_norm(v, rep, line_grid, p=0.5)


def test_voices_are_reproduced(small_affine, rng):
    rep = wavelet_rep(PaulAtom(order=12, peak=0.25))
    v = random_band_signal(rng, small_affine.n_b, small_affine.db, small_affine.b0, band=(0.08, 0.45),
                           spread=50)  # keep the packets away from the edges of the short window
    K = reproducing_kernel(rep, small_affine)
    _, resid = reproduce(voice(v, rep, small_affine), K)
    assert resid < 1e-6


def test_noise_is_not_in_the_range(line_grid, rng):
    K = reproducing_kernel(translation_rep(0.5), line_grid)
    noise = VoiceField(line_grid, rng.normal(size=line_grid.n_b) + 0j)
    _, resid = reproduce(noise, K)
    assert 0.3 < resid < 1.5


def test_batch_rows(tmp_path, line_grid, rng):
    rep = translation_rep(0.5)
    sigs = [random_band_signal(rng, line_grid.n_b, line_grid.db, line_grid.b0, band=(0.02, 0.45))
            for _ in range(2)]
    rows, reports = coorbit_batch(sigs, rep, line_grid, [1, 2])
    assert [(r[0], r[1]) for r in rows] == [(0, 1.0), (0, 2.0), (1, 1.0), (1, 2.0)]
    assert all(r[4] == "member" for r in rows)
    write_batch_csv(tmp_path / "c.csv", rows)
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "signal_id,p,coorbit_norm,residual,verdict"


def test_integrability_verdicts(line_grid):
    K = reproducing_kernel(translation_rep(0.5), line_grid)
    rows = {r.p: r for r in integrability_profile(K, [1.0, 2.0, 3.0])}
    assert rows[1.0].verdict == "divergent"
    assert rows[2.0].verdict == "convergent"
    assert rows[3.0].verdict == "convergent"
    assert rows[2.0].final_norm == pytest.approx(1.0, rel=1e-3)
    with pytest.raises(DomainError):
        integrability_profile(K, [0.5])
