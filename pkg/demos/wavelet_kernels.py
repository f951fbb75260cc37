"""
Wavelet kernels on the affine group
===================================

On the affine group ``(b, a)`` the voice transform is the continuous
wavelet transform.  This demo compares two analyzing wavelets: the Shannon
wavelet, whose spectrum is an indicator function, and a Cauchy-Paul
wavelet with a smooth spectrum.

Both are normalized so the Calderon constant equals one, which makes the
transform an isometry.  Their reproducing kernels behave very
differently: the Shannon kernel decays like ``1/|b|`` and is not
integrable, while the smooth wavelet gives a kernel whose L^1 norm
converges as the window grows.
"""

import numpy as np

from voicelab.coorbit import integrability_profile, reproduce
from voicelab.grids import GridParams, build_grid, lp_norm
from voicelab.groups import AFFINE
from voicelab.signals import random_band_signal
from voicelab.voice import PaulAtom, ShannonAtom, Representation, RepKind, kernel, normalize_admissible, voice

rng = np.random.default_rng(1)
grid = build_grid(AFFINE, GridParams.dyadic(n_b=2048))
v = random_band_signal(rng, grid.n_b, grid.db, grid.b0, band=(0.08, 0.45), spread=100)

for atom in (ShannonAtom(), PaulAtom(order=12, peak=0.25)):
    rep, report = normalize_admissible(Representation(RepKind.WAVELET, atom))
    print(f"\n{atom.name} wavelet, normalization factor {report.normalization_factor:.6f}")

    ###########################################################################
    # Isometry: ``||V v||_2 = ||v||_2`` up to the scale range of the grid.
    V = voice(v, rep, grid)
    print(f"  ||V v|| / ||v||      : {lp_norm(V, 2) / v.norm():.8f}")

    ###########################################################################
    # The voice is reproduced by its kernel.
    K = kernel(rep, grid)
    print(f"  reproducing residual : {reproduce(V, K)[1]:.3e}")

    ###########################################################################
    # Integrability of the kernel over growing b-windows.
    for row in integrability_profile(K, [1.0, 2.0], windows=[16, 32, 64, 128, 256, 512]):
        print(f"  p = {row.p:3.1f}: {row.verdict:10s} last increment {row.increment:.2e}")
