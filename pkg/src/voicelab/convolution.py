"""Group convolutions on R, on the affine group and on its product with S^1.

Affine convolution
------------------
For fields on a :class:`~voicelab.grids.GroupGrid` of the affine group,

    (F * G)(b, a) = int int F(beta, alpha) G((b - beta)/alpha, a/alpha) dbeta dalpha / alpha^2.

Taking the Fourier transform in ``b`` gives, per source scale ``alpha``,

    F_b(F * G)(xi, a) = sum_k w_k alpha_k F^(xi, alpha_k) G^(alpha_k xi, a/alpha_k),

where ``w_k`` is the Haar weight of scale node ``k``.  The b-axis is zero
padded to ``M = 2 n_b`` samples, spectra live on the bins of the padded
axis, and the dilated spectrum ``G^(alpha xi)`` is the discrete-time
Fourier transform of the slice evaluated on a chirp grid (band limited to
the Nyquist band of the slice).  The target scale ``a / alpha`` is looked up
exactly when it is a node and log-linearly interpolated otherwise.

The same rule defines the value of the rescaled slice at any lag ``z``,

    G~_alpha(z) = 1/(M db) sum_n exp(2 pi i eta_n z) |alpha| G^(alpha eta_n),

and :func:`direct_affine` evaluates the double sum over ``(beta, alpha)``
with that formula, without FFTs.  It is the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import czt

from . import _io
from .exceptions import ConfigurationError, DomainError
from .grids import GroupGrid, VoiceField, lp_norm
from .groups import GroupKind
from .signals import Signal1D

_SNAP = 1e-9


# ----------------------------------------------------------------------
# spectral primitives on one b-axis
# ----------------------------------------------------------------------

def _padded_freqs(n_b: int, db: float) -> np.ndarray:
    """Bins of the zero-padded axis (length 2 n_b) in FFT order."""
    return np.fft.fftfreq(2 * n_b, db)


def _padded_spectrum(slices: np.ndarray, db: float, b0: float) -> np.ndarray:
    """Spectra of the slices (rows) on the padded bins, FFT order."""
    n_b = slices.shape[-1]
    eta = _padded_freqs(n_b, db)
    return np.fft.fft(slices, n=2 * n_b, axis=-1) * db * np.exp(-2j * np.pi * eta * b0)


def _dilated_spectrum(slices: np.ndarray, db: float, b0: float, alpha: float) -> np.ndarray:
    """``|alpha| G^(alpha eta_n)`` on the padded bins (FFT order), band limited.

    ``G^`` is the DTFT of the samples; frequencies ``alpha eta`` beyond the
    slice's Nyquist band are set to zero.
    """
    n_b = slices.shape[-1]
    m = 2 * n_b
    n = np.arange(-(m // 2), m - m // 2)
    f = alpha * n / (m * db)
    w = np.exp(-2j * np.pi * alpha / m)
    a = np.exp(-1j * np.pi * alpha * (m // 2) * 2 / m)
    x = czt(slices, m=m, w=w, a=a, axis=-1) * db * np.exp(-2j * np.pi * f * b0)
    nyq = 1.0 / (2.0 * db)
    x[..., np.abs(f) >= nyq * (1 - 1e-12)] = 0.0
    return np.fft.ifftshift(abs(alpha) * x, axes=-1)


def _from_padded(spec: np.ndarray, db: float, b0: float) -> np.ndarray:
    """Inverse of the padded transform, cropped to the original window."""
    m = spec.shape[-1]
    eta = np.fft.fftfreq(m, db)
    full = np.fft.ifft(spec * np.exp(2j * np.pi * eta * b0), axis=-1) / db
    return full[..., : m // 2]


def stretch_slices(slices: np.ndarray, db: float, b0: float, alpha: float, shift: float = 0.0) -> np.ndarray:
    """Samples of ``b -> g((b - shift)/alpha)`` on the same window, per row.

    ``alpha`` may be negative (reflection).  Uses band-limited
    interpolation on the zero-padded axis.
    """
    slices = np.atleast_2d(slices)
    n_b = slices.shape[-1]
    eta = _padded_freqs(n_b, db)
    spec = _dilated_spectrum(slices, db, b0, alpha) * np.exp(-2j * np.pi * eta * shift)
    return _from_padded(spec, db, b0)


def resample_axis(slices: np.ndarray, db: float, b0: float, y0: float, dy: float, n_out: int) -> np.ndarray:
    """Band-limited values of the rows at ``y0 + i dy``, ``i < n_out``.

    The interpolant is the trigonometric polynomial of the zero-padded
    axis, so nodes of the source axis are reproduced exactly.
    """
    slices = np.atleast_2d(slices)
    n_b = slices.shape[-1]
    m = 2 * n_b
    spec = _padded_spectrum(slices, db, b0)
    spec = np.fft.fftshift(spec, axes=-1)
    eta0 = -(m // 2) / (m * db)
    # g(y) = 1/(m db) sum_n spec_n exp(2 pi i (eta0 + n/(m db)) y)
    y = y0 + dy * np.arange(n_out)
    w = np.exp(2j * np.pi * dy / (m * db))
    a = np.exp(-2j * np.pi * y0 / (m * db))
    out = czt(spec, m=n_out, w=w, a=a, axis=-1)
    return out * np.exp(2j * np.pi * eta0 * y) / (m * db)


def resample_points(slices: np.ndarray, db: float, b0: float, y) -> np.ndarray:
    """The interpolant of :func:`resample_axis` at arbitrary points ``y``."""
    slices = np.atleast_2d(slices)
    m = 2 * slices.shape[-1]
    spec = np.fft.fftshift(_padded_spectrum(slices, db, b0), axes=-1)
    eta = (np.arange(m) - m // 2) / (m * db)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return spec @ np.exp(2j * np.pi * np.outer(eta, y)) / (m * db)


# ----------------------------------------------------------------------
# scale lookups
# ----------------------------------------------------------------------

def _scale_lookup(grid: GroupGrid, target_log_a: np.ndarray):
    """Split ``log a`` targets into (lower node, upper node, fraction).

    Targets outside the scale range get node -1 (the field is zero there).
    Near-integer positions snap to the node exactly.
    """
    t = (np.asarray(target_log_a) - np.log(grid.a[0])) / grid.log_step
    near = np.round(t)
    snap = np.abs(t - near) < _SNAP
    t = np.where(snap, near, t)
    lo = np.floor(t).astype(int)
    frac = t - lo
    n_a = grid.n_a
    lo = np.where((t < 0) | (t > n_a - 1), -1, lo)
    hi = np.where(frac > 0, lo + 1, lo)
    hi = np.where(hi > n_a - 1, -1, hi)
    return lo, hi, frac


def _blend(stack: dict, lo: int, hi: int, frac: float, shape):
    """Log-linear blend of two cached rows (``-1`` means zero)."""
    if lo < 0:
        return np.zeros(shape, complex)
    if frac == 0.0:
        return stack[lo]
    return (1.0 - frac) * stack[lo] + frac * stack[hi]


# ----------------------------------------------------------------------
# line
# ----------------------------------------------------------------------

def _check_spacing(f: Signal1D, g: Signal1D):
    if not np.isclose(f.dx, g.dx, rtol=1e-12, atol=0):
        raise ConfigurationError(f"spacing mismatch: {f.dx} vs {g.dx}")


def convolve_line(f: Signal1D, g: Signal1D) -> Signal1D:
    """Linear convolution ``int f(y) g(x - y) dy`` via zero-padded FFTs.

    The result has ``2 max(N_f, N_g)`` samples starting at ``f.x0 + g.x0``,
    which covers the whole support.
    """
    _check_spacing(f, g)
    m = 2 * max(f.n, g.n)
    out = np.fft.ifft(np.fft.fft(f.samples, m) * np.fft.fft(g.samples, m)) * f.dx
    return Signal1D(out, f.dx, f.x0 + g.x0)


def direct_line(f: Signal1D, g: Signal1D) -> Signal1D:
    """O(N^2) reference for :func:`convolve_line`."""
    _check_spacing(f, g)
    m = 2 * max(f.n, g.n)
    out = np.zeros(m, complex)
    full = np.convolve(f.samples, g.samples) * f.dx
    out[: full.size] = full
    return Signal1D(out, f.dx, f.x0 + g.x0)


def line_check(f: Signal1D) -> Signal1D:
    """``x -> f(-x)``; exact on the reflected axis."""
    return Signal1D(f.samples[::-1].copy(), f.dx, -(f.x0 + (f.n - 1) * f.dx))


def line_left(f: Signal1D, x: float) -> Signal1D:
    """``lambda(x) f = f(. - x)``, an exact axis shift."""
    return Signal1D(f.samples, f.dx, f.x0 + float(x))


def line_right(f: Signal1D, x: float) -> Signal1D:
    """``rho(x) f = f(. + x)``."""
    return Signal1D(f.samples, f.dx, f.x0 - float(x))


def line_difference(f: Signal1D, g: Signal1D) -> float:
    """Relative L^2 distance of two signals on grid-aligned axes."""
    _check_spacing(f, g)
    lo = min(f.x0, g.x0)
    off_f = int(round((f.x0 - lo) / f.dx))
    off_g = int(round((g.x0 - lo) / f.dx))
    if abs(lo + off_f * f.dx - f.x0) > 1e-9 * f.dx or abs(lo + off_g * f.dx - g.x0) > 1e-9 * f.dx:
        raise ConfigurationError("signals are not on a common lattice")
    n = max(off_f + f.n, off_g + g.n)
    a = np.zeros(n, complex)
    b = np.zeros(n, complex)
    a[off_f: off_f + f.n] = f.samples
    b[off_g: off_g + g.n] = g.samples
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    return float(np.linalg.norm(a - b) / scale) if scale > 0 else 0.0


# ----------------------------------------------------------------------
# affine group
# ----------------------------------------------------------------------

def _require_affine(F: VoiceField, G: VoiceField | None = None):
    if F.grid.spec.kind is not GroupKind.AFFINE:
        raise ConfigurationError("affine convolution needs fields on an affine grid")
    if G is not None and not F.grid.same_as(G.grid):
        raise ConfigurationError("fields live on different grids")


def convolve_affine(F: VoiceField, G: VoiceField) -> VoiceField:
    """Affine-group convolution with the left Haar measure ``db da / a^2``.

    Parameters
    ----------
    F, G : VoiceField
        Fields on the same affine grid.

    Returns
    -------
    VoiceField
        ``F * G`` on the same grid.
    """
    _require_affine(F, G)
    grid = F.grid
    db, b0, n_a = grid.db, grid.b0, grid.n_a
    Fv = np.ascontiguousarray(F.values.T)  # (n_a, n_b)
    Gv = np.ascontiguousarray(G.values.T)
    if not np.any(Fv) or not np.any(Gv):
        return VoiceField(grid, np.zeros(grid.shape, complex))
    Fh = _padded_spectrum(Fv, db, b0)
    g_live = np.array([np.any(row) for row in Gv])
    out = np.zeros_like(Fh)
    log_a = np.log(grid.a)
    weights = grid.scale_weights
    for k in range(n_a):
        if not np.any(Fv[k]):
            continue
        alpha = grid.a[k]
        lo, hi, frac = _scale_lookup(grid, log_a - np.log(alpha))
        need = sorted({int(i) for i in np.concatenate([lo, hi]) if i >= 0 and g_live[i]})
        if not need:
            continue
        dil = _dilated_spectrum(Gv[need], db, b0, alpha)
        cache = dict(zip(need, dil))
        acc = np.zeros_like(Fh)
        for j in range(n_a):
            l, h, fr = int(lo[j]), int(hi[j]), float(frac[j])
            if l < 0 or (l not in cache and (fr == 0.0 or h not in cache)):
                continue
            zero = np.zeros(Fh.shape[1], complex)
            gl = cache.get(l, zero)
            acc[j] = gl if fr == 0.0 else (1.0 - fr) * gl + fr * cache.get(h, zero)
        out += (weights[k] * Fh[k])[None, :] * acc
    return VoiceField(grid, _from_padded(out, db, b0).T)


def _direct_rescaled(Gv: np.ndarray, grid: GroupGrid, alpha: float) -> np.ndarray:
    """``G~_alpha(z)`` for every lag ``z = q db``, ``|q| < n_b``, by explicit sums.

    Returns an array of shape ``(2 n_b - 1, n_a)`` indexed by ``q + n_b - 1``.
    """
    n_b, db, b0 = grid.n_b, grid.db, grid.b0
    m = 2 * n_b
    eta = np.fft.fftfreq(m, db)
    f = alpha * eta
    keep = np.abs(f) < (1.0 / (2.0 * db)) * (1 - 1e-12)
    nodes = b0 + db * np.arange(n_b)
    dtft = db * np.exp(-2j * np.pi * np.outer(f, nodes)) @ Gv  # (m, n_a)
    dtft[~keep] = 0.0
    lags = db * np.arange(-(n_b - 1), n_b)
    synth = np.exp(2j * np.pi * np.outer(lags, eta)) / (m * db)
    return synth @ (abs(alpha) * dtft)


def direct_affine(F: VoiceField, G: VoiceField) -> VoiceField:
    """Brute-force double sum over ``(beta, alpha)`` for small grids."""
    _require_affine(F, G)
    grid = F.grid
    n_b, n_a, db = grid.n_b, grid.n_a, grid.db
    Fv, Gv = F.values, G.values
    out = np.zeros((n_b, n_a), complex)
    log_a = np.log(grid.a)
    idx = np.arange(n_b)
    lag_index = idx[:, None] - idx[None, :] + n_b - 1  # (i, l)
    for k in range(n_a):
        alpha = grid.a[k]
        Gt = _direct_rescaled(Gv, grid, alpha)  # (lags, n_a)
        lo, hi, frac = _scale_lookup(grid, log_a - np.log(alpha))
        for j in range(n_a):
            if lo[j] < 0:
                continue
            col = Gt[:, lo[j]] if frac[j] == 0 else (1 - frac[j]) * Gt[:, lo[j]] + frac[j] * Gt[:, hi[j]]
            kern = col[lag_index]  # (i, l)
            out[:, j] += grid.scale_weights[k] * db * (kern @ Fv[:, k])
    return VoiceField(grid, out)


# ----------------------------------------------------------------------
# translations, reflection on the affine grid
# ----------------------------------------------------------------------

def _resample_field(F: VoiceField, source_log_a, alpha_of_j, shift_of_j) -> VoiceField:
    """Generic ``out(b, a_j) = F((b - s_j)/alpha_j, c_j)`` with ``log c_j`` given."""
    grid = F.grid
    Fv = np.ascontiguousarray(F.values.T)
    lo, hi, frac = _scale_lookup(grid, source_log_a)
    out = np.zeros((grid.n_a, grid.n_b), complex)
    for j in range(grid.n_a):
        if lo[j] < 0:
            continue
        rows = [int(lo[j])] if frac[j] == 0 else [int(lo[j]), int(hi[j])]
        vals = stretch_slices(Fv[rows], grid.db, grid.b0, alpha_of_j[j], shift_of_j[j])
        out[j] = vals[0] if frac[j] == 0 else (1 - frac[j]) * vals[0] + frac[j] * vals[1]
    return VoiceField(grid, out.T)


def affine_left(F: VoiceField, x) -> VoiceField:
    """``(lambda(x) F)(b, a) = F((b - b0)/a0, a/a0)`` for ``x = (b0, a0)``."""
    _require_affine(F)
    b0, a0 = map(float, x)
    log_a = np.log(F.grid.a)
    n_a = F.grid.n_a
    return _resample_field(F, log_a - np.log(a0), np.full(n_a, a0), np.full(n_a, b0))


def affine_right(F: VoiceField, x) -> VoiceField:
    """``(rho(x) F)(b, a) = F(b + a b0, a a0)``."""
    _require_affine(F)
    b0, a0 = map(float, x)
    a = F.grid.a
    return _resample_field(F, np.log(a) + np.log(a0), np.ones_like(a), -a * b0)


def affine_check(F: VoiceField) -> VoiceField:
    """``F^check(b, a) = F(-b/a, 1/a)``."""
    _require_affine(F)
    a = F.grid.a
    return _resample_field(F, -np.log(a), -a, np.zeros_like(a))


def modular_inverse_factor(grid: GroupGrid, x) -> float:
    """``Delta(x^{-1})``: ``a0`` on the affine groups, 1 on the line."""
    if grid.spec.kind is GroupKind.LINE:
        return 1.0
    return float(x[1])


# ----------------------------------------------------------------------
# affine group times the circle: mode-wise
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModeField:
    """A field on (R x R+) x S^1 stored as ``F(b, a, phi) = sum_n F_n(b, a) e^{i n phi}``.

    Each mode is a :class:`VoiceField` on an affine grid; modes may use
    different b-axes but share the scale axis.
    """

    modes: dict
    n_phi: int = 64

    def __post_init__(self):
        object.__setattr__(self, "modes", {int(n): m for n, m in sorted(self.modes.items())})

    def norm2(self) -> float:
        """L^2 norm by Parseval across modes."""
        return float(np.sqrt(sum(lp_norm(m, 2) ** 2 for m in self.modes.values())))

    def mode(self, n: int) -> VoiceField | None:
        return self.modes.get(int(n))

    def assemble(self, grid: GroupGrid) -> VoiceField:
        """Sum the modes on a common affine-circle grid.

        Modes whose b-axis differs from the grid's are evaluated at the grid
        nodes by band-limited interpolation.
        """
        if grid.spec.kind is not GroupKind.AFFINE_CIRCLE:
            raise ConfigurationError("assemble needs an affine-circle grid")
        phi = grid.phi
        out = np.zeros(grid.shape, complex)
        for n, m in self.modes.items():
            vals = mode_on_axis(m, grid)
            out += vals[:, :, None] * np.exp(1j * n * phi)[None, None, :]
        return VoiceField(grid, out)

    @classmethod
    def from_field(cls, F: VoiceField) -> "ModeField":
        """Split a field on an affine-circle grid into its phi-Fourier modes."""
        grid = F.grid
        if grid.spec.kind is not GroupKind.AFFINE_CIRCLE:
            raise ConfigurationError("from_field needs an affine-circle grid")
        n_phi = grid.n_phi
        coeff = np.fft.fft(F.values, axis=2) / n_phi
        ag = grid.affine()
        ns = range(-(n_phi // 2), n_phi - n_phi // 2)
        return cls({n: VoiceField(ag, coeff[:, :, n % n_phi]) for n in ns}, n_phi)

    def scaled(self, c) -> "ModeField":
        return ModeField({n: m * c for n, m in self.modes.items()}, self.n_phi)

    def lp_norm(self, p=2.0, window: float | None = None, w=None) -> float:
        """L^p norm of ``sum_n F_n(b, a) e^{i n phi}`` over the whole group.

        Modes may sit on b-axes of different spacing.  The b-line is cut
        into nested regions at the halfwidths of the mode axes; in each
        region every mode whose axis covers it is evaluated by band-limited
        interpolation at midpoint nodes of the finest spacing present, the
        characters are summed on ``n_phi`` angles and ``|.|^p`` is
        integrated.  A mode is zero outside its own axis.

        Parameters
        ----------
        p : float
            Exponent in ``[1, inf]``.
        window : float, optional
            Restrict mode ``n`` to ``|b| <= window * s_n`` where ``s_n`` is its
            b-spacing relative to the finest mode, i.e. a window measured in
            the mode's own coordinate.  ``None`` keeps every axis whole.
        w : Weight, optional
            Weight evaluated at ``(b, a, phi)``.
        """
        return _mode_lp(self, [p], window, w)[0]

    def lp_norms(self, ps, window: float | None = None, w=None) -> list:
        """:meth:`lp_norm` for several exponents in one pass over the nodes."""
        return _mode_lp(self, ps, window, w)

    def __sub__(self, other: "ModeField") -> "ModeField":
        keys = sorted(set(self.modes) | set(other.modes))
        out = {}
        for n in keys:
            a, b = self.modes.get(n), other.modes.get(n)
            if a is None:
                out[n] = b * -1
            elif b is None:
                out[n] = a
            else:
                out[n] = a - b
        return ModeField(out, self.n_phi)


def _mode_lp(F: ModeField, ps, window=None, w=None, chunk: int = 256) -> list:
    """Shared worker of :meth:`ModeField.lp_norm` for several exponents."""
    ps = [float(p) for p in ps]
    if any(not p >= 1 for p in ps):
        raise DomainError("p must be >= 1 or inf")
    modes = F.modes
    if not modes:
        return [0.0] * len(ps)
    radius = max(abs(n) for n in modes)
    n_phi = F.n_phi
    if n_phi < 2 * radius + 1:
        raise ConfigurationError("n_phi too small for the modes present")
    first = next(iter(modes.values())).grid
    db_min = min(m.grid.db for m in modes.values())
    half = {}
    for n, m in modes.items():
        g = m.grid
        hw = min(-g.b0, g.b0 + (g.n_b - 1) * g.db)
        if window is not None:
            hw = min(hw, float(window) * g.db / db_min)
        half[n] = hw
    levels = sorted(set(half.values()))
    live = np.zeros(first.n_a, bool)
    for m in modes.values():
        live |= np.any(m.values != 0, axis=0)
    scale_w = first.scale_weights[live]
    a = first.a[live]
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    acc = [0.0] * len(ps)
    prev = 0.0
    for h in levels:
        present = [n for n in modes if half[n] >= h]
        step = min(modes[n].grid.db for n in present)
        if prev == 0.0:
            count = int(np.ceil(2 * h / step))
            pieces = [(-h, 2 * h / count, count)]
        else:
            count = int(np.ceil((h - prev) / step))
            dy = (h - prev) / count
            pieces = [(-h, dy, count), (prev, dy, count)]
        for start, dy, count in pieces:
            y0 = start + 0.5 * dy
            vals = {}
            for n in present:
                g = modes[n].grid
                vals[n] = resample_axis(np.ascontiguousarray(modes[n].values[:, live].T), g.db, g.b0,
                                        y0, dy, count).T  # (count, live scales)
            for lo in range(0, count, chunk):
                hi = min(count, lo + chunk)
                coef = np.zeros((hi - lo, a.size, n_phi), complex)
                for n in present:
                    coef[:, :, n % n_phi] = vals[n][lo:hi]
                field = np.fft.ifft(coef, axis=2) * n_phi
                mag = np.abs(field)
                if w is not None:
                    b = y0 + dy * np.arange(lo, hi)
                    B, A, P = np.meshgrid(b, a, phi, indexing="ij")
                    mag = mag * w(B, A, P)
                quad = dy * scale_w[None, :, None] / n_phi
                for i, p in enumerate(ps):
                    if np.isinf(p):
                        acc[i] = max(acc[i], float(mag.max()))
                    else:
                        acc[i] += float(np.sum(_power(mag, p) * quad))
        prev = h
    return [acc[i] if np.isinf(p) else acc[i] ** (1.0 / p) for i, p in enumerate(ps)]


def _power(mag: np.ndarray, p: float) -> np.ndarray:
    """``mag ** p`` with cheaper paths for the common exponents."""
    if p == 1.0:
        return mag
    if p == 2.0:
        return mag * mag
    if p == 3.0:
        return mag * mag * mag
    if p == 1.5:
        return mag * np.sqrt(mag)
    return mag ** p


def mode_window_profile(F: ModeField, ps, windows) -> dict:
    """Partial L^p norms of a mode field over mode-scaled windows.

    Returns ``{p: [(halfwidth, partial_norm), ...]}``.
    """
    windows = np.asarray(windows, dtype=float)
    if np.any(np.diff(windows) <= 0):
        raise DomainError("windows must be strictly increasing")
    out = {float(p): [] for p in ps}
    for hw in windows:
        vals = _mode_lp(F, ps, window=hw)
        for p, v in zip(ps, vals):
            out[float(p)].append((float(hw), v))
    return out


def mode_on_axis(m: VoiceField, grid: GroupGrid) -> np.ndarray:
    """Values of an affine mode field at the b-nodes of ``grid`` (shape (n_b, n_a))."""
    g = m.grid
    if g.n_a != grid.n_a or not np.allclose(g.a, grid.a, rtol=1e-12, atol=0):
        raise ConfigurationError("mode and target grid have different scale axes")
    if g.n_b == grid.n_b and np.isclose(g.db, grid.db, rtol=1e-12) and np.isclose(g.b0, grid.b0, rtol=1e-12):
        return m.values
    vals = resample_axis(np.ascontiguousarray(m.values.T), g.db, g.b0, grid.b0, grid.db, grid.n_b)
    return vals.T


def convolve_affine_circle(F: ModeField, G: ModeField) -> ModeField:
    """Mode-wise convolution ``(F * G)_n = F_n * G_n``.

    Characters present in only one operand give a zero mode (omitted).
    """
    out = {}
    for n in sorted(set(F.modes) & set(G.modes)):
        if not F.modes[n].grid.same_as(G.modes[n].grid):
            raise ConfigurationError(f"mode {n} lives on different grids in the two operands")
        out[n] = convolve_affine(F.modes[n], G.modes[n])
    return ModeField(out, F.n_phi)


def direct_affine_circle(F: VoiceField, G: VoiceField) -> VoiceField:
    """Brute-force triple sum on an affine-circle grid (phi differences exact)."""
    grid = F.grid
    if grid.spec.kind is not GroupKind.AFFINE_CIRCLE or not grid.same_as(G.grid):
        raise ConfigurationError("direct_affine_circle needs two fields on one affine-circle grid")
    ag = grid.affine()
    n_phi = grid.n_phi
    out = np.zeros(grid.shape, complex)
    for p in range(n_phi):
        for q in range(n_phi):
            fq = VoiceField(ag, F.values[:, :, q])
            gq = VoiceField(ag, G.values[:, :, (p - q) % n_phi])
            out[:, :, p] += direct_affine(fq, gq).values / n_phi
    return VoiceField(grid, out)


# ----------------------------------------------------------------------
# reports: Young inequalities and algebra identities
# ----------------------------------------------------------------------

@dataclass
class ConvReport:
    """Norms, inequality slack and identity residuals of one check."""

    kind: str
    group: str
    norms: dict = field(default_factory=dict)
    result_norm: float | None = None
    bound: float | None = None
    slack: float | None = None
    residuals: dict = field(default_factory=dict)
    convolvable: bool = True
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "norms": dict(self.norms),
            "result_norm": self.result_norm,
            "bound": self.bound,
            "slack": self.slack,
            "residuals": dict(self.residuals),
            "convolvable": self.convolvable,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return _io.dumps_json(self.to_dict())


def _conj_exponent(p: float, q: float) -> float:
    inv_r = 1.0 / p + 1.0 / q - 1.0
    if inv_r < -1e-15:
        raise DomainError(f"1/p + 1/q = {1 / p + 1 / q:g} < 1: no Young inequality")
    return np.inf if inv_r <= 1e-15 else 1.0 / inv_r


def _norm(obj, p) -> float:
    if isinstance(obj, Signal1D):
        return obj.norm(p)
    return lp_norm(obj, p)


def _check_norm(g, q) -> float:
    """``||g^check||_q``; on the affine grid via ``int |g|^q Delta(x^{-1}) dx``."""
    if isinstance(g, Signal1D):
        return g.norm(q)
    if np.isinf(q):
        return float(np.abs(g.values).max())
    grid = g.grid
    a = grid.coords()[1]
    return float(np.sum(np.abs(g.values) ** q * a * grid.weights()) ** (1.0 / q))


def convolve(f, g):
    """Dispatch to the line or affine engine."""
    if isinstance(f, Signal1D):
        return convolve_line(f, g)
    if isinstance(f, ModeField):
        return convolve_affine_circle(f, g)
    return convolve_affine(f, g)


def young_suite(f, g, p: float, q: float) -> ConvReport:
    """Check the Young-type bound for ``f * g`` with exponents ``p, q``.

    ``r`` solves ``1/p + 1/q = 1 + 1/r``.  The certified bound is

        ||f * g||_r <= ||f||_p ||g||_q^(q/r) ||g^check||_q^(1 - q/r),

    which is the classical ``||f||_p ||g||_q`` when ``||g^check||_q = ||g||_q``
    (always on the line).  For ``r = inf`` it reads ``||f||_p ||g^check||_q``.
    The slack is ``(bound - lhs) / bound``.
    """
    p, q = float(p), float(q)
    if p < 1 or q < 1:
        raise DomainError("exponents must be >= 1")
    r = _conj_exponent(p, q)
    h = convolve(f, g)
    lhs = _norm(h, r)
    nf, ng, ngc = _norm(f, p), _norm(g, q), _check_norm(g, q)
    if np.isinf(r):
        bound = nf * ngc
    elif np.isinf(q):
        bound = nf * ng
    else:
        bound = nf * ng ** (q / r) * ngc ** (1.0 - q / r)
    slack = (bound - lhs) / bound if bound > 0 else 0.0
    group = "line" if isinstance(f, Signal1D) else f.grid.spec.kind.value
    return ConvReport(
        kind="young",
        group=group,
        norms={"p": p, "q": q, "r": r, "f_p": nf, "g_q": ng, "g_check_q": ngc},
        result_norm=lhs,
        bound=bound,
        slack=float(slack),
        notes="bound uses ||g||_q^(q/r) ||g^check||_q^(1-q/r); equals ||f||_p ||g||_q when the two norms agree",
    )


def _finite(obj) -> bool:
    vals = obj.samples if isinstance(obj, Signal1D) else obj.values
    return bool(np.all(np.isfinite(vals)))


def _abs(obj):
    if isinstance(obj, Signal1D):
        return Signal1D(np.abs(obj.samples), obj.dx, obj.x0)
    return VoiceField(obj.grid, np.abs(obj.values))


def _rel(a, b) -> float:
    if isinstance(a, Signal1D):
        return line_difference(a, b)
    scale = max(lp_norm(a, 2), lp_norm(b, 2))
    return lp_norm(a - b, 2) / scale if scale > 0 else 0.0


def algebra_check(f, g, h, x) -> ConvReport:
    """Residuals of the convolution-algebra identities for one operand triple.

    Identities (``lambda`` left, ``rho`` right translation, ``Delta`` the
    modular function):

    * ``check``: ``(f*g)^check = g^check * f^check``
    * ``left``: ``lambda(x) f * g = lambda(x)(f*g)``
    * ``right_left``: ``rho(x) f * g = Delta(x^-1) f * lambda(x^-1) g``
    * ``left_right``: ``f * lambda(x) g = Delta(x^-1) rho(x^-1) f * g``
    * ``right``: ``f * rho(x) g = rho(x)(f*g)``
    * ``assoc``: ``f*(g*h) = (f*g)*h``, only when ``|f|*|g|`` and
      ``(|f|*|g|)*|h|`` are finite on the grid.

    Parameters
    ----------
    f, g, h : Signal1D or VoiceField
        Operands on the line or on one affine grid.
    x : float or tuple
        Group element; ``b`` on the line, ``(b, a)`` on the affine group.
    """
    line = isinstance(f, Signal1D)
    if line:
        xb = float(x[0] if isinstance(x, (tuple, list)) else x)
        left, right, chk = (lambda F, y: line_left(F, y)), (lambda F, y: line_right(F, y)), line_check
        xe, xinv, dinv = xb, -xb, 1.0
        group = "line"
    else:
        _require_affine(f, g)
        _require_affine(f, h)
        left, right, chk = affine_left, affine_right, affine_check
        xe = tuple(map(float, x))
        xinv = (-xe[0] / xe[1], 1.0 / xe[1])
        dinv = xe[1]
        group = "affine"
    res = {}
    fg = convolve(f, g)
    res["check"] = _rel(chk(fg), convolve(chk(g), chk(f)))
    res["left"] = _rel(convolve(left(f, xe), g), left(fg, xe))
    res["right_left"] = _rel(convolve(right(f, xe), g), dinv * convolve(f, left(g, xinv)))
    res["left_right"] = _rel(convolve(f, left(g, xe)), dinv * convolve(right(f, xinv), g))
    res["right"] = _rel(convolve(f, right(g, xe)), right(fg, xe))
    absfg = convolve(_abs(f), _abs(g))
    convolvable = _finite(absfg) and _finite(convolve(absfg, _abs(h)))
    if convolvable:
        res["assoc"] = _rel(convolve(f, convolve(g, h)), convolve(fg, h))
    report = ConvReport(kind="algebra", group=group, residuals=res, convolvable=convolvable,
                        norms={"f_2": _norm(f, 2), "g_2": _norm(g, 2), "h_2": _norm(h, 2)},
                        result_norm=_norm(fg, 2))
    if not convolvable:
        report.notes = "associativity skipped: |f|*|g| not finite on grid"
    return report
