"""Quadrature grids realizing the left Haar measure, fields and L^p norms.

The b-axis is uniform (rectangle rule), the a-axis geometric with a
log-trapezoid rule and the phi-axis uniform.  Node values are stored with
shape ``(n_b,)``, ``(n_b, n_a)`` or ``(n_b, n_a, n_phi)``: b-major, then a,
then phi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _io
from .exceptions import ConfigurationError, DomainError
from .groups import AFFINE, AFFINE_CIRCLE, LINE, ONE, GroupKind, GroupSpec, Weight, as_spec

#: default dyadic a-grid: a_k = 2^((k - 32)/8), k = 0..63
DEFAULT_PER_OCTAVE = 8
DEFAULT_N_A = 64
DEFAULT_A_MIN = 2.0 ** -4
DEFAULT_A_MAX = 2.0 ** (31 / 8)


@dataclass(frozen=True)
class GridParams:
    """Discretization parameters.

    Parameters
    ----------
    b_halfwidth : float
        The b-axis covers ``[-b_halfwidth, b_halfwidth)``.
    n_b : int
        Number of b nodes (even, at least 8).
    a_min, a_max : float
        Smallest and largest scale node.
    n_a : int
        Number of geometric scale nodes (at least 2 on the affine groups).
    n_phi : int
        Number of angle nodes on the circle factor.
    """

    b_halfwidth: float = 1024.5
    n_b: int = 4096
    a_min: float = DEFAULT_A_MIN
    a_max: float = DEFAULT_A_MAX
    n_a: int = DEFAULT_N_A
    n_phi: int = 64

    @classmethod
    def dyadic(cls, n_b=4096, db=2049 / 4096, per_octave=DEFAULT_PER_OCTAVE, n_a=DEFAULT_N_A,
               k0=None, n_phi=64):
        """Geometric grid with ``per_octave`` nodes per octave and ``a = 1`` at node ``k0``.

        The default ``k0 = n_a // 2`` keeps the grid nearly symmetric about 1.
        """
        k0 = n_a // 2 if k0 is None else k0
        a_min = 2.0 ** (-k0 / per_octave)
        a_max = 2.0 ** ((n_a - 1 - k0) / per_octave)
        return cls(b_halfwidth=n_b * db / 2, n_b=n_b, a_min=a_min, a_max=a_max,
                   n_a=n_a, n_phi=n_phi)

    def validate(self, spec: GroupSpec) -> None:
        if not self.b_halfwidth > 0:
            raise ConfigurationError("b_halfwidth must be positive")
        if int(self.n_b) != self.n_b or self.n_b < 8 or self.n_b % 2:
            raise ConfigurationError("n_b must be an even integer >= 8")
        if spec.kind is GroupKind.LINE:
            return
        if int(self.n_a) != self.n_a or self.n_a < 2:
            raise ConfigurationError("n_a must be an integer >= 2 on the affine groups")
        if not (0 < self.a_min < self.a_max):
            raise ConfigurationError("need 0 < a_min < a_max")
        if spec.kind is GroupKind.AFFINE_CIRCLE and (int(self.n_phi) != self.n_phi or self.n_phi < 2):
            raise ConfigurationError("n_phi must be an integer >= 2")


def log_trapezoid_weights(a: np.ndarray) -> np.ndarray:
    """Weights ``tau_k`` for integrals in ``t = log a`` on a geometric grid.

    Interior weights equal the log step ``h``.  The two end weights add up
    to ``h`` and are chosen so that the rule is exact for both ``1`` and
    ``e^{-t}``, i.e. ``sum tau_k / a_k = 1/a_min - 1/a_max`` exactly.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    t = np.log(a)
    h = (t[-1] - t[0]) / (n - 1)
    tau = np.full(n, h)
    target = 1.0 / a[0] - 1.0 / a[-1]
    interior = h * np.sum(1.0 / a[1:-1])
    # w0/a0 + w1/a1 = target - interior,  w0 + w1 = h
    e0, e1 = 1.0 / a[0], 1.0 / a[-1]
    w0 = (target - interior - h * e1) / (e0 - e1)
    tau[0] = w0
    tau[-1] = h - w0
    return tau


@dataclass(frozen=True, eq=False)
class GroupGrid:
    """Nodes and quadrature weights for one group.

    Attributes
    ----------
    spec : GroupSpec
    b0, db, n_b : float, float, int
        b nodes are ``b0 + k db``.
    a : ndarray or None
        Geometric scale nodes.
    a_weights : ndarray or None
        Log-trapezoid weights ``tau_k``; the Haar weight of scale ``k`` is
        ``tau_k / a_k``.
    n_phi : int
        Number of angle nodes (1 when there is no circle factor).
    """

    spec: GroupSpec
    b0: float
    db: float
    n_b: int
    a: np.ndarray | None = None
    a_weights: np.ndarray | None = None
    n_phi: int = 1

    # ------------------------------------------------------------------
    @classmethod
    def line(cls, n: int, dx: float, x0: float) -> "GroupGrid":
        return cls(LINE, float(x0), float(dx), int(n))

    @property
    def b(self) -> np.ndarray:
        return self.b0 + self.db * np.arange(self.n_b)

    @property
    def phi(self) -> np.ndarray | None:
        if self.spec.kind is not GroupKind.AFFINE_CIRCLE:
            return None
        return 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def n_a(self) -> int:
        return 0 if self.a is None else int(self.a.size)

    @property
    def log_step(self) -> float:
        return float(np.log(self.a[1] / self.a[0]))

    @property
    def shape(self) -> tuple:
        if self.spec.kind is GroupKind.LINE:
            return (self.n_b,)
        if self.spec.kind is GroupKind.AFFINE:
            return (self.n_b, self.n_a)
        return (self.n_b, self.n_a, self.n_phi)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def b_halfwidth(self) -> float:
        return self.n_b * self.db / 2

    @property
    def scale_weights(self) -> np.ndarray:
        """Haar weight per scale node, ``tau_k / a_k``."""
        return self.a_weights / self.a

    def weights(self) -> np.ndarray:
        """Quadrature weight of every node, broadcast to :attr:`shape`."""
        w = np.full(self.n_b, self.db)
        if self.spec.kind is GroupKind.LINE:
            return w
        w = w[:, None] * self.scale_weights[None, :]
        if self.spec.kind is GroupKind.AFFINE:
            return w
        return np.repeat(w[:, :, None] / self.n_phi, self.n_phi, axis=2)

    def box_mass(self) -> float:
        """Closed-form Haar mass of the grid box."""
        length = self.n_b * self.db
        if self.spec.kind is GroupKind.LINE:
            return length
        return length * (1.0 / self.a[0] - 1.0 / self.a[-1])

    def coords(self) -> tuple:
        """Coordinate arrays broadcast to the node layout."""
        if self.spec.kind is GroupKind.LINE:
            return (self.b,)
        if self.spec.kind is GroupKind.AFFINE:
            return tuple(np.meshgrid(self.b, self.a, indexing="ij"))
        return tuple(np.meshgrid(self.b, self.a, self.phi, indexing="ij"))

    def affine(self) -> "GroupGrid":
        """The (b, a) grid underlying an affine-circle grid."""
        return GroupGrid(AFFINE, self.b0, self.db, self.n_b, self.a, self.a_weights, 1)

    def lag_grid(self) -> "GroupGrid":
        """Twice as long b-axis holding every difference ``b - b'`` of two nodes.

        Only the line needs it: kernels there have closed forms that can be
        sampled on the longer axis.  Other grids are returned unchanged.
        """
        if self.spec.kind is not GroupKind.LINE:
            return self
        return GroupGrid(self.spec, 2.0 * self.b0, self.db, 2 * self.n_b)

    def with_b_axis(self, n_b: int, db: float, b0: float, spec=None) -> "GroupGrid":
        return GroupGrid(spec or self.spec, float(b0), float(db), int(n_b), self.a, self.a_weights,
                         self.n_phi)

    def with_circle(self, n_phi: int) -> "GroupGrid":
        return GroupGrid(AFFINE_CIRCLE, self.b0, self.db, self.n_b, self.a, self.a_weights, int(n_phi))

    def same_as(self, other: "GroupGrid", rtol: float = 1e-12) -> bool:
        if self.spec != other.spec or self.shape != other.shape:
            return False
        if not np.isclose(self.db, other.db, rtol=rtol, atol=0):
            return False
        if not np.isclose(self.b0, other.b0, rtol=rtol, atol=rtol * abs(self.db)):
            return False
        if self.a is not None and not np.allclose(self.a, other.a, rtol=rtol, atol=0):
            return False
        return True

    def scale_index(self, a: float, tol: float = 1e-9):
        """Fractional node position of scale ``a`` (log-linear)."""
        return (np.log(a) - np.log(self.a[0])) / self.log_step

    def __repr__(self) -> str:
        return (f"GroupGrid({self.spec.kind.value}, n_b={self.n_b}, db={self.db:g}, b0={self.b0:g}, "
                f"n_a={self.n_a}, n_phi={self.n_phi})")


def build_grid(spec, params: GridParams | None = None) -> GroupGrid:
    """Build the quadrature grid for ``spec``.

    Examples
    --------
    >>> g = build_grid(LINE, GridParams(b_halfwidth=1, n_b=8))
    >>> g.db
    0.25
    """
    spec = as_spec(spec)
    params = params or GridParams()
    params.validate(spec)
    db = 2.0 * params.b_halfwidth / params.n_b
    if spec.kind is GroupKind.LINE:
        return GroupGrid(spec, -float(params.b_halfwidth), db, int(params.n_b))
    a = params.a_min * (params.a_max / params.a_min) ** (np.arange(params.n_a) / (params.n_a - 1))
    a[0], a[-1] = params.a_min, params.a_max
    tau = log_trapezoid_weights(a)
    n_phi = int(params.n_phi) if spec.kind is GroupKind.AFFINE_CIRCLE else 1
    return GroupGrid(spec, -float(params.b_halfwidth), db, int(params.n_b), a, tau, n_phi)


@dataclass(frozen=True, eq=False)
class VoiceField:
    """Complex values sampled on a :class:`GroupGrid`."""

    grid: GroupGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ConfigurationError(f"values of shape {vals.shape} do not fit grid shape {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("field values must be finite")
        object.__setattr__(self, "values", vals)

    def with_values(self, values) -> "VoiceField":
        return VoiceField(self.grid, values)

    def conj(self) -> "VoiceField":
        return VoiceField(self.grid, np.conj(self.values))

    def __add__(self, other: "VoiceField") -> "VoiceField":
        return VoiceField(self.grid, self.values + other.values)

    def __sub__(self, other: "VoiceField") -> "VoiceField":
        return VoiceField(self.grid, self.values - other.values)

    def __mul__(self, c) -> "VoiceField":
        return VoiceField(self.grid, self.values * c)

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        """Write ``b,a,phi,real,imag`` rows in node order (absent axes omitted)."""
        write_field_csv(path, self)


def _weighted_abs(field: VoiceField, w: Weight | None) -> np.ndarray:
    vals = np.abs(field.values)
    if w is not None and w is not ONE:
        vals = vals * w(*field.grid.coords())
    return vals


def _check_p(p) -> float:
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    return p


def lp_norm(field: VoiceField, p=2.0, w: Weight | None = None) -> float:
    """Weighted L^p norm ``(sum |w f|^p quad_weight)^(1/p)``.

    Summation is numpy's pairwise reduction over a contiguous array, which
    is deterministic for a given layout.
    """
    p = _check_p(p)
    vals = _weighted_abs(field, w)
    if np.isinf(p):
        return float(vals.max()) if vals.size else 0.0
    total = np.sum(np.ascontiguousarray(vals ** p * field.grid.weights()))
    return float(total ** (1.0 / p))


def dyadic_windows(max_halfwidth: float = 1000.0, count: int = 7) -> np.ndarray:
    """Increasing halfwidths ``max_halfwidth / 2^k``, ``k = count-1 .. 0``."""
    return max_halfwidth / 2.0 ** np.arange(count - 1, -1, -1)


def window_profile(field: VoiceField, p, windows: Sequence[float], w: Weight | None = None):
    """Partial L^p norms over the windows ``|b| <= halfwidth``.

    Returns
    -------
    list of (halfwidth, partial_norm)
    """
    p = _check_p(p)
    windows = np.asarray(windows, dtype=float)
    if np.any(np.diff(windows) <= 0):
        raise DomainError("windows must be strictly increasing")
    vals = _weighted_abs(field, w)
    if np.isinf(p):
        per_b = vals.reshape(field.grid.n_b, -1).max(axis=1)
    else:
        per_b = np.sum((vals ** p * field.grid.weights()).reshape(field.grid.n_b, -1), axis=1)
    b = field.grid.b
    out = []
    for hw in windows:
        sel = per_b[np.abs(b) <= hw]
        if np.isinf(p):
            val = float(sel.max()) if sel.size else 0.0
        else:
            val = float(np.sum(sel) ** (1.0 / p))
        out.append((float(hw), val))
    return out


def cauchy_increment(profile) -> float:
    """Relative increment between the last two profile entries."""
    last, prev = profile[-1][1], profile[-2][1]
    if last == 0.0:
        return 0.0
    return (last - prev) / last


def cauchy_verdict(profile, tol: float = 1e-2) -> str:
    """``"convergent"`` if the last relative increment is below ``tol``."""
    return "convergent" if cauchy_increment(profile) < tol else "divergent"


def write_profile_csv(path, profile, p) -> None:
    _io.write_csv(path, ["halfwidth", "p", "partial_norm"],
                  [(float(hw), float(p), float(val)) for hw, val in profile])


def write_field_csv(path, field: VoiceField) -> None:
    grid = field.grid
    coords = [c.ravel() for c in grid.coords()]
    names = ["b", "a", "phi"][: len(coords)]
    vals = field.values.ravel()
    rows = (tuple(float(c[i]) for c in coords) + (float(vals[i].real), float(vals[i].imag))
            for i in range(vals.size))
    _io.write_csv(path, names + ["real", "imag"], rows)
