"""Sampled signals on R and R x S^1, Fourier transforms and canonical atoms.

Fourier convention: ``F f(xi) = int f(x) exp(-2 pi i xi x) dx``.  A signal
with ``N`` samples ``f_j = f(x0 + j dx)`` has its spectrum on the bins
``xi_n = n / (N dx)``, ``n = -N/2 .. N/2 - 1`` (fftshift order), so that the
discrete pair is unitary for the measures ``dx`` and ``dxi = 1 / (N dx)``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _io
from .exceptions import ConfigurationError, DomainError


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def fft_freqs(n: int, dx: float) -> np.ndarray:
    """Centered frequency bins ``n / (N dx)`` in ascending order."""
    return (np.arange(n) - n // 2) / (n * dx)


@dataclass(frozen=True, eq=False)
class Signal1D:
    """Samples ``f(x0 + j dx)``, ``j = 0 .. N-1``.

    Parameters
    ----------
    samples : array_like
        Complex samples; the length must be a power of two.
    dx : float
        Sample spacing.
    x0 : float, optional
        Position of the first sample; defaults to ``-N dx / 2`` so the
        axis is centered.
    band : tuple, optional
        Frequency interval the signal is known to be limited to.
    """

    samples: np.ndarray = field(repr=False)
    dx: float = 1.0
    x0: float | None = None
    band: tuple | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or not _is_pow2(s.size):
            raise ConfigurationError(f"signal length must be a power of two, got {s.shape}")
        if not self.dx > 0:
            raise ConfigurationError("dx must be positive")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "dx", float(self.dx))
        if self.x0 is None:
            object.__setattr__(self, "x0", -s.size * self.dx / 2)
        object.__setattr__(self, "x0", float(self.x0))
        if self.band is not None:
            lo, hi = map(float, self.band)
            object.__setattr__(self, "band", (lo, hi))
            spec = fourier(self)
            mass = np.sum(np.abs(spec.values) ** 2)
            out = np.sum(np.abs(spec.values[(spec.freqs < lo) | (spec.freqs > hi)]) ** 2)
            if mass > 0 and out > 1e-9 * mass:
                raise DomainError("spectral mass outside the declared band exceeds 1e-9")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def norm(self, p=2.0) -> float:
        """Grid L^p norm ``(sum |f|^p dx)^(1/p)``."""
        p = float(p)
        if np.isinf(p):
            return float(np.abs(self.samples).max())
        return float(np.sum(np.abs(self.samples) ** p * self.dx) ** (1.0 / p))

    def with_samples(self, samples, band=None) -> "Signal1D":
        return Signal1D(samples, self.dx, self.x0, band)

    def same_axis(self, other: "Signal1D") -> bool:
        return (self.n == other.n and np.isclose(self.dx, other.dx, rtol=1e-12, atol=0)
                and np.isclose(self.x0, other.x0, rtol=1e-12, atol=1e-12 * self.dx))

    def __add__(self, other):
        return Signal1D(self.samples + other.samples, self.dx, self.x0)

    def __sub__(self, other):
        return Signal1D(self.samples - other.samples, self.dx, self.x0)

    def __mul__(self, c):
        return Signal1D(self.samples * c, self.dx, self.x0, self.band)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Spectrum values on a uniform ascending frequency grid.

    ``x0`` records the time origin of the signal it came from so the
    transform can be inverted onto the same axis.
    """

    values: np.ndarray = field(repr=False)
    dxi: float = 1.0
    xi0: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if not np.all(np.isfinite(v)):
            raise DomainError("spectral values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def freqs(self) -> np.ndarray:
        return self.xi0 + self.dxi * np.arange(self.values.size)

    @property
    def support(self) -> tuple | None:
        """Smallest closed interval containing all nonzero entries."""
        nz = np.nonzero(np.abs(self.values) > 0)[0]
        if nz.size == 0:
            return None
        f = self.freqs
        return (float(f[nz[0]]), float(f[nz[-1]]))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dxi))

    @classmethod
    def from_function(cls, fn, n: int, dxi: float, xi0: float | None = None) -> "SpectralProfile":
        xi0 = -(n // 2) * dxi if xi0 is None else xi0
        xi = xi0 + dxi * np.arange(n)
        return cls(fn(xi), dxi, xi0)


def fourier(f: Signal1D) -> SpectralProfile:
    """Unitary Fourier transform with the ``exp(-2 pi i xi x)`` convention.

    Examples
    --------
    >>> x = (np.arange(1024) - 512) / 16
    >>> F = fourier(Signal1D(np.exp(-np.pi * x**2), 1 / 16))
    >>> bool(np.allclose(F.values, np.exp(-np.pi * F.freqs**2), atol=1e-9))
    True
    """
    n, dx = f.n, f.dx
    xi = fft_freqs(n, dx)
    vals = dx * np.fft.fftshift(np.fft.fft(f.samples)) * np.exp(-2j * np.pi * xi * f.x0)
    return SpectralProfile(vals, 1.0 / (n * dx), float(xi[0]), f.x0)


def inv_fourier(F: SpectralProfile, band=None) -> Signal1D:
    """Inverse of :func:`fourier` on the time axis recorded in ``F``."""
    n = F.values.size
    if not _is_pow2(n):
        raise ConfigurationError("spectral length must be a power of two")
    dx = 1.0 / (n * F.dxi)
    xi = F.freqs
    if not np.isclose(F.xi0, -(n // 2) * F.dxi, rtol=1e-12, atol=1e-15):
        raise ConfigurationError("spectral grid is not the centered FFT grid")
    vals = np.fft.ifft(np.fft.ifftshift(F.values * np.exp(2j * np.pi * xi * F.x0))) / dx
    return Signal1D(vals, dx, F.x0, band)


# ----------------------------------------------------------------------
# R x S^1
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Signal2D:
    """A function on R x S^1 stored through its theta-Fourier modes.

    Parameters
    ----------
    modes : dict
        Map ``n -> Signal1D`` holding ``v_n`` with
        ``v(x, theta) = sum_n v_n(x) exp(i n theta)``.  Modes may live on
        different x-axes.
    radius : int
        Symmetric truncation radius; keys satisfy ``|n| <= radius``.
    truncation_error : float
        Energy discarded when the modes were computed from raw samples.
    """

    modes: dict
    radius: int = 16
    truncation_error: float = 0.0

    def __post_init__(self):
        modes = {int(n): m for n, m in sorted(self.modes.items())}
        if any(abs(n) > self.radius for n in modes):
            raise ConfigurationError("mode index exceeds the truncation radius")
        object.__setattr__(self, "modes", modes)

    def norm(self) -> float:
        """``(sum_n ||v_n||^2)^(1/2)``, the definition of the 2D norm."""
        return float(np.sqrt(sum(m.norm() ** 2 for m in self.modes.values())))

    def mode(self, n: int) -> Signal1D | None:
        return self.modes.get(int(n))

    def to_raw(self, n_theta: int) -> np.ndarray:
        """Resynthesize ``v(x_j, theta_q)``; all modes must share one axis."""
        ms = list(self.modes.values())
        if any(not ms[0].same_axis(m) for m in ms[1:]):
            raise ConfigurationError("modes live on different axes")
        theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
        raw = np.zeros((ms[0].n, n_theta), complex)
        for n, m in self.modes.items():
            raw += m.samples[:, None] * np.exp(1j * n * theta)[None, :]
        return raw


def theta_modes(raw, theta, dx: float, x0: float | None = None, radius: int | None = None) -> Signal2D:
    """Theta-Fourier coefficients ``(1/n_phi) sum_q raw(x, theta_q) exp(-i n theta_q)``.

    Parameters
    ----------
    raw : ndarray, shape (N, n_phi)
        Samples on the product of an x-axis and the uniform theta grid.
    theta : ndarray
        The theta nodes, ``theta_q = theta_0 + 2 pi q / n_phi``.
    dx, x0 : float
        x-axis of the samples.
    radius : int, optional
        Keep ``|n| <= radius``; the discarded energy is recorded.
    """
    raw = np.asarray(raw, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    n_phi = theta.size
    if raw.ndim != 2 or raw.shape[1] != n_phi:
        raise ConfigurationError("raw must have shape (N, n_phi)")
    step = 2.0 * np.pi / n_phi
    if not np.allclose(np.diff(theta), step, rtol=0, atol=1e-12):
        raise ConfigurationError("theta grid must be uniform with step 2 pi / n_phi")
    ns = np.arange(-(n_phi // 2), n_phi - n_phi // 2)
    coeff = np.fft.fft(raw, axis=1) / n_phi  # index q -> frequency q
    modes, dropped = {}, 0.0
    radius = n_phi // 2 if radius is None else int(radius)
    for n in ns:
        c = coeff[:, n % n_phi] * np.exp(-1j * n * theta[0])
        sig = Signal1D(c, dx, x0)
        if abs(n) <= radius:
            modes[int(n)] = sig
        else:
            dropped += sig.norm() ** 2
    return Signal2D(modes, radius, dropped)


# ----------------------------------------------------------------------
# band limiting and the mollifier family
# ----------------------------------------------------------------------

def bandlimit_project(f: Signal1D, omega) -> Signal1D:
    """Orthogonal projection onto signals with spectrum in ``omega = (lo, hi)``.

    Bins inside the closed interval are kept, the others zeroed, so the map
    is idempotent.

    Raises
    ------
    DomainError
        If the interval leaves the representable band ``[-1/(2dx), 1/(2dx)]``.
    """
    lo, hi = map(float, omega)
    nyq = 1.0 / (2.0 * f.dx)
    if lo > hi or lo < -nyq or hi > nyq:
        raise DomainError(f"band [{lo}, {hi}] exceeds the Nyquist band [{-nyq}, {nyq}]")
    F = fourier(f)
    xi = F.freqs
    mask = (xi >= lo) & (xi <= hi)
    out = inv_fourier(SpectralProfile(F.values * mask, F.dxi, F.xi0, F.x0))
    return Signal1D(out.samples, f.dx, f.x0, (lo, hi))


def indicator(xi, lo: float, hi: float) -> np.ndarray:
    """``chi_[lo, hi]`` with half weight at the two endpoints."""
    xi = np.asarray(xi, dtype=float)
    out = ((xi > lo) & (xi < hi)).astype(float)
    out[(xi == lo) | (xi == hi)] = 0.5
    return out


def bump(t) -> np.ndarray:
    """Unnormalized C^infinity bump ``exp(-1/(1 - t^2))`` on (-1, 1)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1
    out[m] = np.exp(-1.0 / (1.0 - t[m] ** 2))
    return out


def bump_derivative(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1
    tm = t[m]
    out[m] = np.exp(-1.0 / (1.0 - tm ** 2)) * (-2.0 * tm / (1.0 - tm ** 2) ** 2)
    return out


_GL_X, _GL_W = leggauss(200)


def _bump_cdf_raw(t) -> np.ndarray:
    """``int_{-1}^{t} bump`` by 200-point Gauss-Legendre on [-1, t]."""
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    half = (t + 1.0) / 2.0
    nodes = -1.0 + half[..., None] * (_GL_X + 1.0)
    return half * np.sum(_GL_W * bump(nodes), axis=-1)


BUMP_MASS = float(_bump_cdf_raw(np.array(1.0)))


def bump_hat(t) -> np.ndarray:
    """Unit-mass bump ``c exp(-1/(1 - t^2))``."""
    return bump(t) / BUMP_MASS


def bump_cdf(t) -> np.ndarray:
    """Cumulative integral of :func:`bump_hat`; exactly 0 below -1 and 1 above 1."""
    t = np.asarray(t, dtype=float)
    out = _bump_cdf_raw(t) / BUMP_MASS
    out = np.where(t <= -1.0, 0.0, out)
    return np.where(t >= 1.0, 1.0, out)


def bump_derivative_sup() -> float:
    """``sup |d/dt bump_hat|``, located by a dense scan and a bounded refinement."""
    from scipy.optimize import minimize_scalar

    t = np.linspace(-0.999, 0.0, 20001)
    k = int(np.argmax(np.abs(bump_derivative(t))))
    res = minimize_scalar(lambda s: -abs(float(bump_derivative(np.array(s)))),
                          bounds=(t[max(k - 1, 0)], t[min(k + 1, t.size - 1)]), method="bounded",
                          options={"xatol": 1e-12})
    return float(-res.fun) / BUMP_MASS


def mollifier(eps: float, omega: float, n: int = 8192, dxi: float | None = None) -> SpectralProfile:
    """The smoothed band indicator ``g_eps^ = h_eps^ * chi_[-omega, omega]``.

    ``h_eps^(xi) = h^(xi/eps)/eps`` with the unit-mass bump ``h^``.  The
    convolution has the closed form ``H((xi+omega)/eps) - H((xi-omega)/eps)``
    where ``H`` is the cumulative integral of ``h^``.

    Parameters
    ----------
    eps, omega : float
        ``0 < eps < omega``.
    n : int
        Number of frequency bins.
    dxi : float, optional
        Bin width; defaults to covering ``[-2 omega, 2 omega)``.
    """
    eps, omega = float(eps), float(omega)
    if not (0 < eps < omega):
        raise DomainError("mollifier needs 0 < eps < omega")
    dxi = 4.0 * omega / n if dxi is None else float(dxi)
    xi = (np.arange(n) - n // 2) * dxi
    vals = bump_cdf((xi + omega) / eps) - bump_cdf((xi - omega) / eps)
    return SpectralProfile(vals, dxi, float(xi[0]), 0.0)


# ----------------------------------------------------------------------
# canonical atoms
# ----------------------------------------------------------------------

def _axis(grid):
    """Accept a GroupGrid, a Signal1D or an explicit ``(n, dx, x0)`` triple."""
    if hasattr(grid, "b0"):
        return grid.n_b, grid.db, grid.b0
    if isinstance(grid, Signal1D):
        return grid.n, grid.dx, grid.x0
    n, dx, x0 = grid
    return int(n), float(dx), float(x0)


def sinc_kernel(omega: float, grid) -> Signal1D:
    """Samples of ``2 omega sinc(2 omega pi b)`` with ``sinc(t) = sin(t)/t``."""
    n, dx, x0 = _axis(grid)
    if not dx < 1.0 / (2.0 * omega):
        raise DomainError("grid does not resolve the band: need dx < 1/(2 omega)")
    b = x0 + dx * np.arange(n)
    return Signal1D(2.0 * omega * np.sinc(2.0 * omega * b), dx, x0)


def shannon_hat(xi) -> np.ndarray:
    """``chi_[1/4, 1/2](|xi|)`` with the value ``1/sqrt 2`` at the endpoints.

    The endpoint value makes ``|u^|^2`` take the half weight there.
    """
    ax = np.abs(np.asarray(xi, dtype=float))
    out = ((ax > 0.25) & (ax < 0.5)).astype(float)
    out[(ax == 0.25) | (ax == 0.5)] = np.sqrt(0.5)
    return out


def shannon_time(x) -> np.ndarray:
    """``sinc(pi x) - sinc(pi x / 2) / 2``, the inverse transform of :func:`shannon_hat`."""
    x = np.asarray(x, dtype=float)
    return np.sinc(x) - 0.5 * np.sinc(x / 2.0)


def shannon_wavelet(grid) -> Signal1D:
    """The real Shannon wavelet sampled on a b-axis (Nyquist must be >= 1/2)."""
    n, dx, x0 = _axis(grid)
    if 1.0 / (2.0 * dx) < 0.5:
        raise DomainError("grid Nyquist frequency must be at least 1/2")
    return Signal1D(shannon_time(x0 + dx * np.arange(n)), dx, x0)


# ----------------------------------------------------------------------
# seeded test signals
# ----------------------------------------------------------------------

def random_band_signal(rng, n: int, dx: float, x0: float | None = None, band=(0.05, 0.45),
                       packets: int = 4, spread: float = 200.0, two_sided: bool = True) -> Signal1D:
    """Random signal whose spectrum is a sum of smooth bumps inside a band.

    Each packet is ``c bump((s xi - center)/width) exp(-2 pi i xi t)`` with
    random complex ``c``, sign ``s`` (``+1`` only if not ``two_sided``),
    ``[center - width, center + width]`` inside ``band`` and delay ``|t| <=
    spread``.  The spectrum vanishes exactly outside ``+-band``.
    """
    lo, hi = map(float, band)
    x0 = -n * dx / 2 if x0 is None else x0
    xi = fft_freqs(n, dx)
    spec = np.zeros(n, complex)
    for _ in range(packets):
        sign = rng.choice([-1.0, 1.0]) if two_sided else 1.0
        width = rng.uniform(0.2, 0.5) * (hi - lo)
        center = rng.uniform(lo + width, hi - width)
        c = rng.normal() + 1j * rng.normal()
        delay = rng.uniform(-spread, spread)
        spec += c * bump((sign * xi - center) / width) * np.exp(-2j * np.pi * xi * delay)
    return inv_fourier(SpectralProfile(spec, 1.0 / (n * dx), float(xi[0]), x0))


def bessel_packet(x, width: float, order: int = 4) -> np.ndarray:
    """Inverse transform of ``(1 - (xi/width)^2)_+^order``.

    Closed form ``width Gamma(order+1) 2^(order+1) j_order(z) / z^order`` with
    ``z = 2 pi width x`` and the spherical Bessel function ``j_order``.
    """
    from scipy.special import factorial2, gamma, spherical_jn

    x = np.asarray(x, dtype=float)
    k = int(order)
    z = 2.0 * np.pi * width * x
    pref = width * gamma(k + 1) * 2.0 ** (k + 1)
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    big = spherical_jn(k, zs) / zs ** k
    ser = (1.0 - z ** 2 / (2 * (2 * k + 3)) + z ** 4 / (8 * (2 * k + 3) * (2 * k + 5))) / factorial2(2 * k + 1)
    return pref * np.where(small, ser, big)


@dataclass(frozen=True)
class PacketSignal:
    """``f(x) = sum_j c_j exp(2 pi i nu_j x) psi_w(x - t_j)`` with closed form.

    ``psi_w`` is :func:`bessel_packet`; the spectrum of ``f`` lies in
    ``[min(nu_j) - w, max(nu_j) + w]``.
    """

    coeffs: tuple
    freqs: tuple
    shifts: tuple
    width: float
    order: int = 4

    @classmethod
    def random(cls, rng, band=(-0.5, 0.5), count: int = 3, width: float = 0.1, spread: float = 100.0,
               order: int = 4) -> "PacketSignal":
        lo, hi = map(float, band)
        nus = tuple(float(v) for v in rng.uniform(lo + width, hi - width, count))
        cs = tuple(complex(c) for c in rng.normal(size=count) + 1j * rng.normal(size=count))
        ts = tuple(float(t) for t in rng.uniform(-spread, spread, count))
        return cls(cs, nus, ts, float(width), int(order))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, complex)
        for c, nu, t in zip(self.coeffs, self.freqs, self.shifts):
            out += c * np.exp(2j * np.pi * nu * x) * bessel_packet(x - t, self.width, self.order)
        return out

    def sample(self, n: int, dx: float, x0: float | None = None) -> Signal1D:
        x0 = -n * dx / 2 if x0 is None else x0
        return Signal1D(self(x0 + dx * np.arange(n)), dx, x0)

    def lp_norm(self, p: float, reach: float = 3000.0, panel: float = 0.5) -> float:
        """``||f||_{L^p(R)}`` by composite 16-point Gauss-Legendre quadrature.

        Panels of length ``panel`` cover ``[-reach, reach]``; ``|f|^p`` is
        smooth and the tail beyond ``reach`` is below double precision for
        the default order and width.  The maximum for ``p = inf`` is taken
        on the quadrature nodes.
        """
        return self.lp_norms([p], reach, panel)[0]

    def lp_norms(self, ps, reach: float = 3000.0, panel: float = 0.5) -> list:
        """:meth:`lp_norm` for several exponents from one set of samples."""
        ps = [float(p) for p in ps]
        gx, gw = np.polynomial.legendre.leggauss(16)
        n_pan = int(np.ceil(2 * reach / panel))
        totals = [0.0] * len(ps)
        peak = 0.0
        for lo in range(0, n_pan, 4096):
            left = -reach + panel * np.arange(lo, min(n_pan, lo + 4096))
            nodes = left[:, None] + 0.5 * panel * (gx + 1.0)[None, :]
            mag = np.abs(self(nodes))
            peak = max(peak, float(mag.max()))
            for k, p in enumerate(ps):
                if not np.isinf(p):
                    totals[k] += float(np.sum(mag ** p * (0.5 * panel * gw)[None, :]))
        return [peak if np.isinf(p) else t ** (1.0 / p) for p, t in zip(ps, totals)]


# ----------------------------------------------------------------------
# I/O
# ----------------------------------------------------------------------

def write_signal_csv(path, f: Signal1D) -> None:
    _io.write_csv(path, ["x", "real", "imag"],
                  ((float(x), float(s.real), float(s.imag)) for x, s in zip(f.x, f.samples)))


def read_signal_csv(path) -> Signal1D:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = data[:, 0]
    if x.size < 2:
        raise ConfigurationError("signal CSV needs at least two rows")
    dx = float(np.median(np.diff(x)))
    if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=1e-9 * abs(dx)):
        raise ConfigurationError("signal CSV x column is not uniform")
    return Signal1D(data[:, 1] + 1j * data[:, 2], dx, float(x[0]))


def write_signal_bin(path, f: Signal1D) -> None:
    """8-byte little-endian length, then interleaved little-endian complex doubles."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    inter = np.empty(2 * f.n, dtype="<f8")
    inter[0::2] = f.samples.real
    inter[1::2] = f.samples.imag
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", f.n))
        fh.write(inter.tobytes())


def read_signal_bin(path, dx: float = 1.0, x0: float | None = None) -> Signal1D:
    raw = Path(path).read_bytes()
    if len(raw) < 8:
        raise ConfigurationError("binary signal is missing its length header")
    (n,) = struct.unpack("<Q", raw[:8])
    body = np.frombuffer(raw[8:], dtype="<f8")
    if body.size != 2 * n:
        raise ConfigurationError(f"binary signal declares {n} samples but holds {body.size // 2}")
    return Signal1D(body[0::2] + 1j * body[1::2], dx, x0)
