"""Representations, voice transforms, kernels and the structural maps.

Three representations are implemented:

* translations on the Paley-Wiener space ``B^2_Omega`` (group: the line),
  ``V v = F^{-1}(v^ conj(u^))``;
* affine wavelets (group: ``b, a``), computed per scale in frequency,
  ``F_b V v(., a)(beta) = v^(beta) a^{1/2} conj(u^(a beta))``;
* Schrodingerlets on ``(R x R+) x S^1``, a Fourier series in ``phi`` whose
  n-th mode is the wavelet voice of ``v_n`` against ``u_n``.

Analyzing vectors are :class:`Atom` objects described by their spectrum,
which can be evaluated exactly at dilated frequencies.  ``Atom.sample``
returns the :class:`~voicelab.signals.Signal1D` view on a given axis.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import RectBivariateSpline

from . import _io
from .convolution import ModeField, affine_check, convolve_affine, convolve_line, line_check
from .exceptions import ConfigurationError, DomainError, InadmissibleError
from .grids import GroupGrid, VoiceField, build_grid, lp_norm
from .groups import AFFINE, AFFINE_CIRCLE, LINE, GroupKind
from .signals import (Signal1D, Signal2D, SpectralProfile, bump, fft_freqs, fourier, shannon_hat,
                      shannon_time)


class CalderonDivergenceWarning(RuntimeWarning):
    """The profile carries mass at the lowest positive frequency."""


# ----------------------------------------------------------------------
# atoms
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """An analyzing vector given by its spectrum ``u^``.

    Subclasses implement ``_hat`` (spectrum before the amplitude factor),
    ``pieces`` (positive-frequency intervals on which ``|u^|^2`` is smooth)
    and optionally ``_time`` (closed-form inverse transform).
    """

    amplitude: float = 1.0
    positive_only: bool = False

    name = "atom"

    def hat(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        out = self.amplitude * self._hat(xi)
        if self.positive_only:
            out = np.where(xi > 0, out, 0.0)
        return out

    def time(self, x) -> np.ndarray | None:
        t = self._time(np.asarray(x, dtype=float))
        return None if t is None else self.amplitude * t

    def _time(self, x):
        return None

    def pieces(self, side: int = 1) -> list:
        raise NotImplementedError

    def scaled(self, c: float) -> "Atom":
        return replace(self, amplitude=self.amplitude * c)

    def dilate(self, s: float) -> "Atom":
        """The atom ``s u(s x)``, whose spectrum is ``u^(xi / s)``."""
        return DilatedAtom(base=self, factor=float(s))

    def sample(self, n: int, dx: float, x0: float | None = None) -> Signal1D:
        """Samples on an axis; closed form if known, else the inverse DFT of the spectrum."""
        x0 = -n * dx / 2 if x0 is None else x0
        x = x0 + dx * np.arange(n)
        t = self.time(x)
        if t is not None:
            return Signal1D(t, dx, x0)
        xi = fft_freqs(n, dx)
        spec = self.hat(xi) * np.exp(2j * np.pi * xi * x0)
        return Signal1D(np.fft.ifft(np.fft.ifftshift(spec)) / dx, dx, x0)


@dataclass(frozen=True)
class ShannonAtom(Atom):
    """``u^ = chi_[1/4, 1/2](|xi|)`` (value ``1/sqrt 2`` at the edges)."""

    name = "shannon"

    def _hat(self, xi):
        return shannon_hat(xi)

    def _time(self, x):
        if self.positive_only:
            return None
        return shannon_time(x)

    def pieces(self, side=1):
        if side < 0 and self.positive_only:
            return []
        return [(0.25, 0.5)]


@dataclass(frozen=True)
class PaulAtom(Atom):
    """Cauchy-Paul atom ``(|xi|/eta)^k exp(-k (|xi|/eta - 1))``, peak value 1 at ``|xi| = eta``.

    Its inverse transform has the closed form
    ``e^k k! eta^-k / (k/eta - 2 pi i x)^(k+1)`` for the positive half.
    """

    order: int = 12
    peak: float = 0.25

    name = "paul"

    def _hat(self, xi):
        s = np.abs(xi) / self.peak
        with np.errstate(under="ignore"):
            return np.where(s > 0, np.exp(self.order * (np.log(np.where(s > 0, s, 1.0)) - s + 1.0)), 0.0)

    def _time(self, x):
        k, eta = self.order, self.peak
        logc = k + math.lgamma(k + 1) - k * math.log(eta)
        pos = np.exp(logc - (k + 1) * np.log(k / eta - 2j * np.pi * x))
        return pos if self.positive_only else 2.0 * pos.real

    def pieces(self, side=1):
        if side < 0 and self.positive_only:
            return []
        # |u^|^2 = exp(2k (t - e^t + 1)) in t = log(xi/eta); below 1e-40 outside
        span_lo = 1.0 + 46.0 / self.order
        lo = self.peak * math.exp(-span_lo - 1.0)
        hi = self.peak * (1.0 + math.sqrt(92.0 / self.order) + 46.0 / self.order)
        return [(lo, hi)]

    def calderon_exact(self) -> float:
        """Closed form ``e^{2k} Gamma(2k) / (2k)^{2k}`` per side (before amplitude)."""
        k = self.order
        return math.exp(2 * k + math.lgamma(2 * k) - 2 * k * math.log(2 * k))


@dataclass(frozen=True)
class BumpAtom(Atom):
    """Smooth bump ``exp(-1/(1 - t^2))`` on ``lo < |xi| < hi``."""

    lo: float = 0.25
    hi: float = 0.5

    name = "bump"

    def _hat(self, xi):
        c = 0.5 * (self.lo + self.hi)
        r = 0.5 * (self.hi - self.lo)
        return bump((np.abs(xi) - c) / r)

    def pieces(self, side=1):
        if side < 0 and self.positive_only:
            return []
        return [(self.lo, self.hi)]


@dataclass(frozen=True)
class BandAtom(Atom):
    """Translation-rep atom ``chi_Omega(xi) exp(i phase(xi))``.

    ``phase`` is a tuple of polynomial coefficients (highest first) so the
    atom stays hashable; ``()`` means the sinc kernel itself.
    """

    lo: float = -0.5
    hi: float = 0.5
    phase: tuple = ()

    name = "band"

    def _hat(self, xi):
        chi = ((xi > self.lo) & (xi < self.hi)).astype(float)
        chi[(xi == self.lo) | (xi == self.hi)] = np.sqrt(0.5)
        if self.phase:
            chi = chi * np.exp(1j * np.polyval(self.phase, xi))
        return chi

    def _time(self, x):
        if self.phase:
            return None
        width = self.hi - self.lo
        center = 0.5 * (self.hi + self.lo)
        return width * np.sinc(width * x) * np.exp(2j * np.pi * center * x)

    def pieces(self, side=1):
        return []


@dataclass(frozen=True)
class DilatedAtom(Atom):
    """``s u(s x)``: spectrum ``u^(xi / s)``."""

    base: Atom | None = None
    factor: float = 1.0

    name = "dilated"

    def hat(self, xi):
        return self.amplitude * self.base.hat(np.asarray(xi, dtype=float) / self.factor)

    def _time(self, x):
        t = self.base.time(self.factor * x)
        return None if t is None else self.factor * t

    def pieces(self, side=1):
        return [(self.factor * lo, self.factor * hi) for lo, hi in self.base.pieces(side)]

    @property
    def positive(self) -> bool:
        return self.base.positive_only


def atom_from_name(name: str, positive_only: bool = False, **kw) -> Atom:
    table = {"shannon": ShannonAtom, "paul": PaulAtom, "bump": BumpAtom}
    if name not in table:
        raise ConfigurationError(f"unknown atom {name!r}")
    return table[name](positive_only=positive_only, **kw)


# ----------------------------------------------------------------------
# Calderon constant
# ----------------------------------------------------------------------

def _log_trapezoid_piece(fn, lo: float, hi: float, n: int = 4097) -> float:
    """Trapezoid rule in ``t = log xi`` with one-sided values at the ends."""
    t = np.linspace(math.log(lo), math.log(hi), n)
    xi = np.exp(t)
    xi[0] = np.nextafter(lo, np.inf)
    xi[-1] = np.nextafter(hi, -np.inf)
    g = fn(xi)
    h = t[1] - t[0]
    return float(h * (np.sum(g) - 0.5 * (g[0] + g[-1])))


def calderon(profile, side: int = 1) -> float:
    """Calderon constant ``int_0^inf |u^(xi)|^2 dxi / xi`` (or the ``xi < 0`` half).

    Parameters
    ----------
    profile : Atom or SpectralProfile
        An atom is integrated piecewise in ``log xi`` with the trapezoid
        rule between its breakpoints.  A sampled profile is integrated with
        the trapezoid rule in ``log xi`` over its positive (or negative) bins.
    side : {1, -1}
        Which half-line to integrate.

    Warns
    -----
    CalderonDivergenceWarning
        If a sampled profile has mass at its lowest nonzero frequency bin,
        where ``1 / xi`` is not resolved.
    """
    if isinstance(profile, Atom):
        total = 0.0
        for lo, hi in profile.pieces(side):
            total += _log_trapezoid_piece(lambda xi: np.abs(profile.hat(side * xi)) ** 2, lo, hi)
        return total
    xi = profile.freqs
    vals = np.abs(profile.values) ** 2
    sel = side * xi > 0
    x, g = side * xi[sel], vals[sel]
    order = np.argsort(x)
    x, g = x[order], g[order]
    if g.size == 0 or not np.any(g):
        return 0.0
    if g[0] > 1e-12 * g.max() or np.any(vals[xi == 0] > 1e-12 * g.max()):
        warnings.warn("spectral profile touches xi = 0; the Calderon integral may diverge",
                      CalderonDivergenceWarning, stacklevel=2)
    t = np.log(x)
    return float(np.sum(np.diff(t) * 0.5 * (g[1:] + g[:-1])))


# ----------------------------------------------------------------------
# representations
# ----------------------------------------------------------------------

class RepKind(enum.Enum):
    TRANSLATION = "translation"
    WAVELET = "wavelet"
    SCHRODINGERLET = "schrodingerlet"


@dataclass(frozen=True)
class Representation:
    """One of the three representations together with its analyzing vector.

    Attributes
    ----------
    kind : RepKind
    atom : Atom
        ``u`` for translations and wavelets, the seed ``u_0`` for
        Schrodingerlets.
    band : tuple or None
        ``Omega`` for translations.
    decay : tuple
        Pairs ``(n, a_n)`` defining the Schrodingerlet modes
        ``u_n^(xi) = u_0^(xi / a_n)``.
    """

    kind: RepKind
    atom: Atom
    band: tuple | None = None
    decay: tuple = ()

    @property
    def group(self):
        return {RepKind.TRANSLATION: LINE, RepKind.WAVELET: AFFINE,
                RepKind.SCHRODINGERLET: AFFINE_CIRCLE}[self.kind]

    @property
    def modes(self) -> dict:
        return dict(self.decay)

    def mode_atom(self, n: int) -> Atom:
        a_n = self.modes[int(n)]
        return self.atom.dilate(a_n)

    def scaled(self, c: float) -> "Representation":
        return replace(self, atom=self.atom.scaled(c))


def translation_rep(omega=0.5, phase: tuple = ()) -> Representation:
    """Translations on ``B^2_Omega``; ``omega`` is a half-width or an interval."""
    lo, hi = (-float(omega), float(omega)) if np.ndim(omega) == 0 else map(float, omega)
    return Representation(RepKind.TRANSLATION, BandAtom(lo=lo, hi=hi, phase=tuple(phase)), band=(lo, hi))


def wavelet_rep(atom: Atom | str = "shannon", normalize: bool = True) -> Representation:
    """Affine wavelets; Shannon by default, divided by ``sqrt(ln 2)``."""
    if isinstance(atom, str):
        atom = atom_from_name(atom)
    rep = Representation(RepKind.WAVELET, atom)
    return normalize_admissible(rep)[0] if normalize else rep


def default_decay(radius: int = 16, base: float = 2.0) -> tuple:
    """``a_n = base^{-|n|}`` for ``|n| <= radius``."""
    return tuple((n, base ** (-abs(n))) for n in range(-radius, radius + 1))


def schrodingerlet_rep(u0: Atom | str = "shannon", decay=None, radius: int = 16,
                       normalize: bool = True) -> Representation:
    """Schrodingerlets built from a positive-frequency seed ``u0``."""
    if isinstance(u0, str):
        u0 = atom_from_name(u0, positive_only=True)
    elif not u0.positive_only:
        u0 = replace(u0, positive_only=True)
    atom2d = build_schrodingerlet_atom(u0, decay if decay is not None else default_decay(radius))
    rep = Representation(RepKind.SCHRODINGERLET, u0, decay=atom2d.decay)
    return normalize_admissible(rep)[0] if normalize else rep


@dataclass(frozen=True)
class SchrodingerletAtom:
    """Modes ``u_n(x) = a_n u_0(a_n x)`` of a Schrodingerlet analyzing vector."""

    u0: Atom
    decay: tuple
    norm2_estimate: float

    def mode(self, n: int) -> Atom:
        return self.u0.dilate(dict(self.decay)[int(n)])

    def to_signal2d(self, n: int, dx: float, x0: float | None = None) -> Signal2D:
        """Sample every mode on its own axis ``(n, dx / a_n, x0 / a_n)``."""
        x0 = -n * dx / 2 if x0 is None else x0
        radius = max(abs(k) for k, _ in self.decay)
        return Signal2D({k: self.mode(k).sample(n, dx / a, x0 / a) for k, a in self.decay}, radius)


def build_schrodingerlet_atom(u0: Atom, decay=None) -> SchrodingerletAtom:
    """Dilated family ``u_n^(xi) = u_0^(xi / a_n)``.

    Parameters
    ----------
    u0 : Atom
        Positive-frequency seed, normalized for the wavelet rep.
    decay : sequence of (n, a_n) or callable
        Defaults to ``a_n = 2^{-|n|}``, ``|n| <= 16``.

    Raises
    ------
    ConfigurationError
        If some ``a_n`` is not positive and finite, or the sequence does not
        decrease in ``|n|`` (a surrogate for non-summability that a finite
        truncation can detect).
    """
    if decay is None:
        decay = default_decay()
    elif callable(decay):
        decay = tuple((n, float(decay(n))) for n in range(-16, 17))
    decay = tuple(sorted((int(n), float(a)) for n, a in decay))
    vals = dict(decay)
    if any(not (np.isfinite(a) and a > 0) for a in vals.values()):
        raise ConfigurationError("decay values must be positive and finite")
    radius = max(abs(n) for n in vals)
    for n in vals:
        for m in (n + 1, n - 1):
            if m in vals and abs(m) > abs(n) and vals[m] > vals[n]:
                raise ConfigurationError("decay must be nonincreasing in |n| to be summable")
    if radius > 0 and all(vals.get(s * radius, 0) >= vals.get(0, np.inf) for s in (-1, 1)):
        raise ConfigurationError("decay does not decrease: the mode series is not summable")
    norm_u0 = math.sqrt(sum(_log_trapezoid_piece(lambda xi: np.abs(u0.hat(xi)) ** 2 * xi, lo, hi)
                            for lo, hi in u0.pieces(1)))
    est = sum(a for a in vals.values()) * norm_u0 ** 2
    return SchrodingerletAtom(u0, decay, est)


def mode_axis(grid: GroupGrid, a_n: float) -> tuple:
    """``(n, dx, x0)`` of the b-axis used for mode ``n`` with dilation ``a_n``."""
    return grid.n_b, grid.db / a_n, grid.b0 / a_n


def lift_mode(base: Signal1D, a_n: float) -> Signal1D:
    """``a_n w(a_n x)`` sampled on the dilated axis, from samples of ``w``."""
    return Signal1D(a_n * base.samples, base.dx / a_n, base.x0 / a_n)


def random_mode_signal(rng, rep: "Representation", grid: GroupGrid, modes=None, **kw) -> Signal2D:
    """Seeded Schrodingerlet test signal.

    Mode ``n`` is ``c_n a_n w_n(a_n x)`` with ``w_n`` drawn by
    :func:`~voicelab.signals.random_band_signal` (positive frequencies only)
    on the grid's b-axis, so every mode is resolved on its own axis.
    """
    from .signals import random_band_signal

    decay = rep.modes
    chosen = sorted(decay) if modes is None else sorted(int(n) for n in modes)
    out = {}
    for n in chosen:
        base = random_band_signal(rng, grid.n_b, grid.db, grid.b0, two_sided=False, **kw)
        out[n] = lift_mode(base, decay[n])
    return Signal2D(out, max(abs(n) for n in decay))


def decay_sum(decay, p: float) -> float:
    """``sum_n a_n^(1 - 1/p)`` over the truncated mode set."""
    return float(sum(a ** (1.0 - 1.0 / p) for _, a in decay))


# ----------------------------------------------------------------------
# admissibility
# ----------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    kind: str
    constants: dict = field(default_factory=dict)
    band_residual: float | None = None
    admissible: bool = False
    normalization_factor: float = 1.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "constants": {str(k): v for k, v in self.constants.items()},
            "band_residual": self.band_residual,
            "admissible": self.admissible,
            "normalization_factor": self.normalization_factor,
        }

    def to_json(self) -> str:
        return _io.dumps_json(self.to_dict())


def normalize_admissible(rep: Representation, tol: float = 1e-6):
    """Scale the analyzing vector so the voice transform is isometric.

    Returns
    -------
    (Representation, AdmissibilityReport)
        The report lists Calderon constants after normalization.

    Raises
    ------
    InadmissibleError
        Zero Calderon constant, unequal halves for a two-sided wavelet, or
        ``| |u^| - 1 |`` above 1e-9 inside ``Omega`` for translations.
    """
    if rep.kind is RepKind.TRANSLATION:
        lo, hi = rep.band
        xi = np.linspace(lo, hi, 20001)[1:-1]
        resid = float(np.max(np.abs(np.abs(rep.atom.hat(xi)) - 1.0)))
        if resid > 1e-9:
            raise InadmissibleError(f"|u^| deviates from 1 on Omega by {resid:.3g}")
        return rep, AdmissibilityReport("translation", {}, resid, True, 1.0)

    if rep.kind is RepKind.WAVELET:
        cp, cm = calderon(rep.atom, 1), calderon(rep.atom, -1)
        if cp <= 0 or cm <= 0:
            raise InadmissibleError("Calderon constant vanishes on one half-line")
        if abs(cp - cm) > tol * max(cp, cm):
            raise InadmissibleError("the two Calderon halves differ; no scalar normalization exists")
        factor = 1.0 / math.sqrt(cp)
        new = rep.scaled(factor)
        consts = {"+": calderon(new.atom, 1), "-": calderon(new.atom, -1)}
        ok = all(abs(c - 1.0) < tol for c in consts.values())
        return new, AdmissibilityReport("wavelet", consts, None, ok, factor)

    c0 = calderon(rep.atom, 1)
    if c0 <= 0:
        raise InadmissibleError("Calderon constant of the seed vanishes")
    factor = 1.0 / math.sqrt(c0)
    new = rep.scaled(factor)
    consts = {n: calderon(new.mode_atom(n), 1) for n in new.modes}
    ok = all(abs(c - 1.0) < tol for c in consts.values())
    return new, AdmissibilityReport("schrodingerlet", consts, None, ok, factor)


# ----------------------------------------------------------------------
# voice transforms
# ----------------------------------------------------------------------

def _spectrum(v: Signal1D):
    F = fourier(v)
    return F.freqs, F.values


def _inverse_rows(rows: np.ndarray, dx: float, x0: float, xi: np.ndarray) -> np.ndarray:
    """Inverse of :func:`signals.fourier` applied to each row (centered bins)."""
    return np.fft.ifft(np.fft.ifftshift(rows * np.exp(2j * np.pi * xi * x0), axes=-1), axis=-1) / dx


def _check_axis(v: Signal1D, grid: GroupGrid):
    if v.n != grid.n_b or not np.isclose(v.dx, grid.db, rtol=1e-12) or not np.isclose(
            v.x0, grid.b0, rtol=1e-12, atol=1e-12 * grid.db):
        raise DomainError("signal axis does not match the grid's b-axis")


def _wavelet_voice(v: Signal1D, atom: Atom, grid: GroupGrid) -> VoiceField:
    _check_axis(v, grid)
    xi, vh = _spectrum(v)
    a = grid.a
    rows = vh[None, :] * np.sqrt(a)[:, None] * np.conj(atom.hat(np.outer(a, xi)))
    return VoiceField(grid, _inverse_rows(rows, v.dx, v.x0, xi).T)


def mode_grid(v: Signal1D, grid: GroupGrid) -> GroupGrid:
    """Affine grid with the b-axis of ``v`` and the scale axis of ``grid``."""
    return GroupGrid(AFFINE, v.x0, v.dx, v.n, grid.a, grid.a_weights, 1)


def voice(v, rep: Representation, grid: GroupGrid):
    """Voice transform ``V v(x) = <v, pi(x) u>`` sampled on ``grid``.

    Returns
    -------
    VoiceField or ModeField
        A :class:`~voicelab.convolution.ModeField` for Schrodingerlets.
    """
    if grid.spec != rep.group:
        raise DomainError(f"{rep.kind.value} voices live on the {rep.group.kind.value} grid")
    if rep.kind is RepKind.TRANSLATION:
        if not isinstance(v, Signal1D):
            raise DomainError("translation voices need a Signal1D")
        _check_axis(v, grid)
        xi, vh = _spectrum(v)
        vals = _inverse_rows(vh * np.conj(rep.atom.hat(xi)), v.dx, v.x0, xi)
        return VoiceField(grid, vals)
    if rep.kind is RepKind.WAVELET:
        if not isinstance(v, Signal1D):
            raise DomainError("wavelet voices need a Signal1D")
        return _wavelet_voice(v, rep.atom, grid.affine() if grid.spec.kind is GroupKind.AFFINE_CIRCLE else grid)
    if not isinstance(v, Signal2D):
        raise DomainError("Schrodingerlet voices need a Signal2D")
    modes = {}
    for n, vn in v.modes.items():
        if n not in rep.modes:
            continue
        modes[n] = _wavelet_voice(vn, rep.mode_atom(n), mode_grid(vn, grid))
    return ModeField(modes, grid.n_phi)


def cross_kernel(rep_u: Representation, rep_t: Representation, grid: GroupGrid):
    """``V_u t`` for the analyzing vector ``t`` of ``rep_t``, computed spectrally."""
    if rep_u.kind is RepKind.TRANSLATION:
        xi = fft_freqs(grid.n_b, grid.db)
        rows = rep_t.atom.hat(xi) * np.conj(rep_u.atom.hat(xi))
        return VoiceField(grid, _inverse_rows(rows, grid.db, grid.b0, xi))
    if rep_u.kind is RepKind.WAVELET:
        return _cross_wavelet(rep_t.atom, rep_u.atom, grid)
    modes = {}
    for n in rep_u.modes:
        ax = _mode_axis_grid(grid, rep_u.modes[n])
        modes[n] = _cross_wavelet(rep_t.mode_atom(n), rep_u.mode_atom(n), ax)
    return ModeField(modes, grid.n_phi)


def _cross_wavelet(t: Atom, u: Atom, grid: GroupGrid) -> VoiceField:
    xi = fft_freqs(grid.n_b, grid.db)
    a = grid.a
    rows = t.hat(xi)[None, :] * np.sqrt(a)[:, None] * np.conj(u.hat(np.outer(a, xi)))
    return VoiceField(grid, _inverse_rows(rows, grid.db, grid.b0, xi).T)


def _mode_axis_grid(grid: GroupGrid, a_n: float) -> GroupGrid:
    """Per-mode affine grid: spacing ``db / a_n`` so the dilated mode is resolved alike."""
    return GroupGrid(AFFINE, grid.b0 / a_n, grid.db / a_n, grid.n_b, grid.a, grid.a_weights, 1)


def kernel(rep: Representation, grid: GroupGrid):
    """Reproducing kernel ``K = V u``.

    For translations this is the continuum kernel ``F^{-1}|u^|^2``, the sinc
    kernel of the band.  For wavelets the per-scale spectrum
    ``u^(xi) a^{1/2} conj(u^(a xi))`` is inverted on the grid.
    Schrodingerlet modes use the per-mode grids of :func:`_mode_axis_grid`.
    """
    if rep.kind is RepKind.TRANSLATION:
        lo, hi = rep.band
        width, center = hi - lo, 0.5 * (hi + lo)
        b = grid.b
        vals = width * np.sinc(width * b) * np.exp(2j * np.pi * center * b)
        return VoiceField(grid, vals)
    return cross_kernel(rep, rep, grid)


def kernel_symmetry_residual(K) -> float:
    """``max |conj(K(x)) - K(x^{-1})| / max |K|`` on the grid."""
    if isinstance(K, ModeField):
        return max(kernel_symmetry_residual(m) for m in K.modes.values())
    if K.grid.spec.kind is GroupKind.LINE:
        vals = K.values
        # x -> -x on a grid symmetric about the node 0 (b0 = -n_b db / 2)
        ref = np.empty_like(vals)
        ref[1:] = vals[1:][::-1]
        ref[0] = vals[0]
        return float(np.max(np.abs(np.conj(vals[1:]) - ref[1:])) / np.max(np.abs(vals)))
    chk = affine_check(K)
    return float(np.max(np.abs(np.conj(K.values) - chk.values)) / np.max(np.abs(K.values)))


def synthesize(f, rep: Representation):
    """``pi(f) u = int f(x) pi(x) u dx`` by quadrature over the grid.

    Computed in frequency: translations give ``f^ u^``; wavelets give
    ``sum_k tau_k a_k^{-1/2} u^(a_k xi) f^(xi, a_k)``; Schrodingerlet modes
    are synthesized separately and returned as a :class:`Signal2D`.
    """
    if rep.kind is RepKind.SCHRODINGERLET:
        modes = {n: _synth_wavelet(m, rep.mode_atom(n)) for n, m in f.modes.items() if n in rep.modes}
        radius = max(abs(n) for n in rep.modes)
        return Signal2D(modes, radius)
    grid = f.grid
    xi = fft_freqs(grid.n_b, grid.db)
    if rep.kind is RepKind.TRANSLATION:
        fh = fourier(Signal1D(f.values, grid.db, grid.b0)).values
        vals = _inverse_rows(fh * rep.atom.hat(xi), grid.db, grid.b0, xi)
        return Signal1D(vals, grid.db, grid.b0)
    return _synth_wavelet(f, rep.atom)


def _synth_wavelet(f: VoiceField, atom: Atom) -> Signal1D:
    grid = f.grid
    xi = fft_freqs(grid.n_b, grid.db)
    rows = np.ascontiguousarray(f.values.T)
    fh = grid.db * np.fft.fftshift(np.fft.fft(rows, axis=-1), axes=-1) * np.exp(-2j * np.pi * xi * grid.b0)
    a = grid.a
    coef = (grid.a_weights / np.sqrt(a))[:, None] * atom.hat(np.outer(a, xi))
    total = np.sum(coef * fh, axis=0)
    return Signal1D(_inverse_rows(total, grid.db, grid.b0, xi), grid.db, grid.b0)


def _field_rel_diff(a, b) -> float:
    if isinstance(a, ModeField):
        num = (a - b).norm2()
        den = b.norm2()
    else:
        num = lp_norm(a - b, 2)
        den = lp_norm(b, 2)
    return num / den if den > 0 else 0.0


def _line_filter_convolve(F: VoiceField, H: VoiceField) -> VoiceField:
    """``F * conj(H)^check`` on the line, cropped back to F's grid.

    ``H`` may live on a longer lattice-aligned axis (see ``GroupGrid.lag_grid``).
    """
    grid = F.grid
    filt = line_check(Signal1D(np.conj(H.values), H.grid.db, H.grid.b0))
    out = convolve_line(Signal1D(F.values, grid.db, grid.b0), filt)
    off = int(round((grid.b0 - out.x0) / grid.db))
    return VoiceField(grid, out.samples[off: off + grid.n_b])


def vector_change(v, rep_u: Representation, rep_t: Representation, grid: GroupGrid) -> float:
    """Relative residual of ``V_t v = V_u v * conj(V_u t)^check``.

    The filter ``conj(V_u t)^check`` is obtained from the sampled field
    ``V_u t`` by reflection on the grid (band-limited interpolation on the
    affine group), not from a closed form.
    """
    if rep_u.kind is not rep_t.kind:
        raise DomainError("both analyzing vectors must belong to the same representation")
    lhs = voice(v, rep_t, grid)
    Fu = voice(v, rep_u, grid)
    H = cross_kernel(rep_u, rep_t, grid)
    if rep_u.kind is RepKind.TRANSLATION:
        H = cross_kernel(rep_u, rep_t, grid.lag_grid())
        return _field_rel_diff(_line_filter_convolve(Fu, H), lhs)
    if rep_u.kind is RepKind.WAVELET:
        filt = affine_check(H.conj())
        return _field_rel_diff(convolve_affine(Fu, filt), lhs)
    modes = {}
    for n, Fn in Fu.modes.items():
        Hn = _cross_wavelet(rep_t.mode_atom(n), rep_u.mode_atom(n), Fn.grid)
        modes[n] = convolve_affine(Fn, affine_check(Hn.conj()))
    return _field_rel_diff(ModeField(modes, grid.n_phi), lhs)


def direct_voice_3d(v_modes: dict, u_modes: dict, b, a, phi, x, n_theta: int = 16) -> np.ndarray:
    """Brute-force ``<v, pi(b, a, phi) u>`` on ``L^2(R x S^1)``.

    Both functions are evaluated on the product of the x-nodes and a uniform
    theta grid and the inner product
    ``sum_x sum_theta v(x, theta) conj(a^{-1/2} u((x - b)/a, theta - phi)) dx / n_theta``
    is summed directly, without any mode algebra.

    Parameters
    ----------
    v_modes, u_modes : dict
        ``n -> callable`` returning the mode functions at real points.
    b, a, phi : ndarray
        Evaluation nodes; the result has shape ``(len(b), len(a), len(phi))``.
    x : ndarray
        Uniform quadrature nodes on the line.
    n_theta : int
        Number of theta nodes.
    """
    b, a, phi, x = (np.asarray(t, dtype=float) for t in (b, a, phi, x))
    dx = x[1] - x[0]
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    v = sum(fn(x)[:, None] * np.exp(1j * n * theta)[None, :] for n, fn in v_modes.items())
    out = np.zeros((b.size, a.size, phi.size), complex)
    step = 2.0 * np.pi / n_theta
    shifts = phi / step
    aligned = np.allclose(shifts, np.round(shifts), rtol=0, atol=1e-12)
    vc = np.conj(v)
    for j, aj in enumerate(a):
        arg = (x[None, :] - b[:, None]) / aj
        u_vals = {n: fn(arg) / math.sqrt(aj) for n, fn in u_modes.items()}
        if aligned:
            # u(., theta_t - phi_q) is u(., theta_{t - s_q}): a roll along theta
            u0 = sum(uv[:, :, None] * np.exp(1j * n * theta)[None, None, :] for n, uv in u_vals.items())
        for q, ph in enumerate(phi):
            if aligned:
                u = np.roll(u0, int(round(shifts[q])), axis=2)
            else:
                u = sum(uv[:, :, None] * np.exp(1j * n * (theta - ph))[None, None, :]
                        for n, uv in u_vals.items())
            out[:, j, q] = np.conj(np.einsum("xt,bxt->b", vc, u)) * dx / n_theta
    return out


# ----------------------------------------------------------------------
# polar unitary and the Schrodinger flow
# ----------------------------------------------------------------------

def polar_unitary(values, zeta, xi, theta):
    """``Psi v(xi, theta) = pi^{1/2} v(sqrt(xi) cos theta, sqrt(xi) sin theta)``.

    Parameters
    ----------
    values : ndarray, shape (n, n)
        ``v`` on the Cartesian grid ``zeta x zeta`` (first index ``zeta_1``).
    zeta : ndarray
        Uniform ascending nodes of both axes.
    xi, theta : ndarray
        Target nodes; ``theta`` uniform on ``[0, 2 pi)``.

    Returns
    -------
    ndarray, shape (len(xi), len(theta))
        Bicubic-spline interpolation of ``v`` at the polar points.
    """
    values = np.asarray(values)
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    r = np.sqrt(xi)[:, None]
    z1, z2 = r * np.cos(theta)[None, :], r * np.sin(theta)[None, :]
    out = _spline_eval(values, zeta, zeta, z1, z2)
    return math.sqrt(math.pi) * out


def polar_inverse(values, xi, theta, zeta):
    """Inverse of :func:`polar_unitary` back onto the Cartesian grid ``zeta x zeta``."""
    values = np.asarray(values)
    theta = np.asarray(theta, dtype=float)
    n_t = theta.size
    # periodic extension in theta for the spline
    ext = np.concatenate([values[:, -3:], values, values[:, :3]], axis=1)
    th_ext = np.concatenate([theta[-3:] - 2 * np.pi, theta, theta[:3] + 2 * np.pi])
    Z1, Z2 = np.meshgrid(zeta, zeta, indexing="ij")
    rho2 = Z1 ** 2 + Z2 ** 2
    ang = np.mod(np.arctan2(Z2, Z1), 2 * np.pi)
    out = _spline_eval(ext, xi, th_ext, rho2, ang)
    inside = rho2 <= xi[-1]
    del n_t
    return np.where(inside, out / math.sqrt(math.pi), 0.0)


def _spline_eval(values, x, y, px, py):
    re = RectBivariateSpline(x, y, np.real(values), kx=3, ky=3)
    im = RectBivariateSpline(x, y, np.imag(values), kx=3, ky=3)
    return re.ev(px, py) + 1j * im.ev(px, py)


def polar_norm(values, xi, theta) -> float:
    """L^2 norm on ``R+ x S^1`` with ``dxi dtheta / 2 pi`` (trapezoid in xi)."""
    w = np.full(xi.size, xi[1] - xi[0])
    w[0] = w[-1] = 0.5 * (xi[1] - xi[0])
    return float(np.sqrt(np.sum(np.abs(values) ** 2 * w[:, None]) / theta.size))


def _freq2(n: int, dx: float):
    k = np.fft.fftfreq(n, dx)
    return k[:, None] ** 2 + k[None, :] ** 2


def schrodinger_flow(f, dx: float, b: float) -> np.ndarray:
    """``mu_b f = F^{-1}(exp(-2 pi i b |xi|^2) f^)`` on a square periodic grid."""
    f = np.asarray(f, dtype=complex)
    k2 = _freq2(f.shape[0], dx)
    return np.fft.ifft2(np.exp(-2j * np.pi * b * k2) * np.fft.fft2(f))


def schrodinger_flow_residual(f, dx: float, b: float, h: float = 1e-3) -> float:
    """``||(2 pi i d_b + Laplacian) mu_b f|| / ||f||``.

    ``d_b`` is a centered difference with step ``h``; the Laplacian is
    applied spectrally as the multiplier ``-4 pi^2 |xi|^2``.
    """
    f = np.asarray(f, dtype=complex)
    k2 = _freq2(f.shape[0], dx)
    mu = schrodinger_flow(f, dx, b)
    d_b = (schrodinger_flow(f, dx, b + h) - schrodinger_flow(f, dx, b - h)) / (2 * h)
    lap = np.fft.ifft2(-4 * np.pi ** 2 * k2 * np.fft.fft2(mu))
    res = 2j * np.pi * d_b + lap
    return float(np.linalg.norm(res) / np.linalg.norm(f))


def flow_peak_phase(f, dx: float, b: float) -> tuple:
    """Phase ratio of the flowed spectrum at the spectral peak of ``f``.

    Returns ``(measured, expected)`` where ``expected = exp(-2 pi i b |xi_0|^2)``.
    """
    f = np.asarray(f, dtype=complex)
    fh = np.fft.fft2(f)
    i, j = np.unravel_index(np.argmax(np.abs(fh)), fh.shape)
    k = np.fft.fftfreq(f.shape[0], dx)
    gh = np.fft.fft2(schrodinger_flow(f, dx, b))
    ratio = gh[i, j] / fh[i, j]
    expected = np.exp(-2j * np.pi * b * (k[i] ** 2 + k[j] ** 2))
    return complex(ratio / abs(ratio)), complex(expected)
