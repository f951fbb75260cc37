"""voicelab: voice transforms and reproducing kernels of three group representations.

Translations on Paley-Wiener spaces, affine wavelets and Schrodingerlets on
``(R x R+) x S^1`` are discretized on quadrature grids of the Haar measure.
The package computes voice transforms, reproducing kernels and their
convolution algebra, coorbit norms and kernel integrability profiles.
"""

from .exceptions import (ConfigurationError, DomainError, InadmissibleError, InvalidWeightError,
                         VoicelabError)
from .groups import AFFINE, AFFINE_CIRCLE, LINE, ONE, GroupKind, GroupSpec, poly_weight, weight_from_name
from .grids import GridParams, GroupGrid, VoiceField, build_grid, lp_norm, window_profile
from .signals import Signal1D, Signal2D, SpectralProfile, fourier, inv_fourier
from .convolution import ModeField, convolve, convolve_affine, convolve_affine_circle, convolve_line
from .voice import (BandAtom, BumpAtom, PaulAtom, Representation, RepKind, ShannonAtom, calderon, kernel,
                    normalize_admissible, schrodingerlet_rep, synthesize, translation_rep, voice, wavelet_rep)
from .coorbit import coorbit_norm, integrability_profile, reproduce, reproducing_kernel

__version__ = "0.1.0"

__all__ = [
    "AFFINE", "AFFINE_CIRCLE", "LINE", "ONE", "BandAtom", "BumpAtom", "ConfigurationError", "DomainError",
    "GridParams", "GroupGrid", "GroupKind", "GroupSpec", "InadmissibleError", "InvalidWeightError", "ModeField",
    "PaulAtom", "RepKind", "Representation", "ShannonAtom", "Signal1D", "Signal2D", "SpectralProfile",
    "VoiceField", "VoicelabError", "build_grid", "calderon", "convolve", "convolve_affine",
    "convolve_affine_circle", "convolve_line", "coorbit_norm", "fourier", "integrability_profile", "inv_fourier",
    "kernel", "lp_norm", "normalize_admissible", "poly_weight", "reproduce", "reproducing_kernel",
    "schrodingerlet_rep", "synthesize", "translation_rep", "voice", "wavelet_rep", "weight_from_name",
    "window_profile",
]
