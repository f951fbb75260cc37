"""
Band-limited signals and the sinc kernel
========================================

Translations acting on the band-limited signals with spectrum in
``[-1/2, 1/2]`` form the simplest example of a voice transform.  The
analyzing vector is the sinc function, the voice of a band-limited signal
is the signal itself, and the reproducing kernel is the sinc kernel.

This demo checks the reproducing formula on the line and shows why the
sinc kernel is square integrable but not integrable: its L^1 norm over a
window of halfwidth ``W`` grows like ``log W``.
"""

import numpy as np

from voicelab.coorbit import integrability_profile, reproduce, reproducing_kernel
from voicelab.grids import build_grid
from voicelab.groups import LINE
from voicelab.signals import random_band_signal
from voicelab.voice import translation_rep, voice

rng = np.random.default_rng(0)
grid = build_grid(LINE)
rep = translation_rep(0.5)

###############################################################################
# A random band-limited signal and its voice transform.  The two agree to
# rounding error because the sinc atom has a flat spectrum on the band.

v = random_band_signal(rng, grid.n_b, grid.db, grid.b0, band=(0.02, 0.45))
V = voice(v, rep, grid)
print("max |V v - v|          :", np.abs(V.values - v.samples).max())

###############################################################################
# The reproducing formula ``V v * K = V v`` with the sinc kernel sampled on
# a grid twice as long, so every lag of the window is present.

K = reproducing_kernel(rep, grid)
_, residual = reproduce(V, K)
print("reproducing residual   :", residual)

###############################################################################
# Window profiles of the kernel.  The p = 1 norm keeps growing with the
# window, while p = 2 settles at ||K||_2 = 1.

for row in integrability_profile(K, [1.0, 1.5, 2.0]):
    norms = ", ".join(f"{n:.4f}" for _, n in row.profile)
    print(f"p = {row.p:3.1f}  {row.verdict:10s}  windows: {norms}")
