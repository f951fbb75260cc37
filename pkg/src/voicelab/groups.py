"""Arithmetic on the three concrete groups and weight validation.

Elements are tuples of coordinates and every function broadcasts over
numpy arrays, so a batch of elements is simply a tuple of arrays:

* ``LINE``: ``(b,)`` with ordinary addition,
* ``AFFINE``: ``(b, a)`` with ``(b, a)(b', a') = (b + a b', a a')``,
* ``AFFINE_CIRCLE``: ``(b, a, phi)``, the affine law times the circle.

The left Haar measure is ``db`` on the line, ``db da / a^2`` on the affine
group and ``db da / a^2 dphi / 2 pi`` on the product with the circle.  The
modular function is ``1 / a`` on both non-abelian groups.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .exceptions import DomainError, InvalidWeightError

TWO_PI = 2.0 * np.pi


class GroupKind(enum.Enum):
    LINE = "line"
    AFFINE = "affine"
    AFFINE_CIRCLE = "affine_circle"


@dataclass(frozen=True)
class GroupSpec:
    """One of the three concrete groups.

    Parameters
    ----------
    kind : GroupKind
        Which group law to use.
    """

    kind: GroupKind

    @property
    def ndim(self) -> int:
        return {GroupKind.LINE: 1, GroupKind.AFFINE: 2, GroupKind.AFFINE_CIRCLE: 3}[self.kind]

    @property
    def unimodular(self) -> bool:
        return self.kind is GroupKind.LINE

    def identity(self) -> tuple:
        return (0.0, 1.0, 0.0)[: self.ndim]

    def compose(self, g, h):
        return compose(self, g, h)

    def inverse(self, g):
        return inverse(self, g)

    def modular(self, g):
        return modular(self, g)


LINE = GroupSpec(GroupKind.LINE)
AFFINE = GroupSpec(GroupKind.AFFINE)
AFFINE_CIRCLE = GroupSpec(GroupKind.AFFINE_CIRCLE)


def as_spec(spec) -> GroupSpec:
    """Accept a GroupSpec, a GroupKind or its string value."""
    if isinstance(spec, GroupSpec):
        return spec
    return GroupSpec(GroupKind(spec))


def _coords(spec: GroupSpec, g) -> tuple:
    """Normalize an element to a tuple of float arrays and validate it."""
    if spec.kind is GroupKind.LINE and not isinstance(g, (tuple, list)):
        g = (g,)
    if len(g) != spec.ndim:
        raise DomainError(f"{spec.kind.value} elements have {spec.ndim} coordinates, got {len(g)}")
    out = tuple(np.asarray(c, dtype=float) for c in g)
    if spec.ndim >= 2 and np.any(~(out[1] > 0)):
        raise DomainError("the scale coordinate a must be positive")
    return out


def _unwrap(spec: GroupSpec, coords: tuple):
    """Return python floats for scalar input, arrays otherwise."""
    if all(np.ndim(c) == 0 for c in coords):
        coords = tuple(float(c) for c in coords)
    return coords


def reduce_angle(phi):
    """Reduce angles to [0, 2 pi)."""
    r = np.mod(phi, TWO_PI)
    # np.mod can return 2 pi for tiny negative inputs
    return np.where(r >= TWO_PI, 0.0, r)


def compose(spec, g, h):
    """Group product ``g h``.

    Examples
    --------
    >>> compose(AFFINE, (1.0, 2.0), (3.0, 4.0))
    (7.0, 8.0)
    """
    spec = as_spec(spec)
    g = _coords(spec, g)
    h = _coords(spec, h)
    if spec.kind is GroupKind.LINE:
        return _unwrap(spec, (g[0] + h[0],))
    b = g[0] + g[1] * h[0]
    a = g[1] * h[1]
    if spec.kind is GroupKind.AFFINE:
        return _unwrap(spec, (b, a))
    return _unwrap(spec, (b, a, reduce_angle(g[2] + h[2])))


def inverse(spec, g):
    """Group inverse; ``(b, a)^{-1} = (-b/a, 1/a)``."""
    spec = as_spec(spec)
    g = _coords(spec, g)
    if spec.kind is GroupKind.LINE:
        return _unwrap(spec, (-g[0],))
    b = -g[0] / g[1]
    a = 1.0 / g[1]
    if spec.kind is GroupKind.AFFINE:
        return _unwrap(spec, (b, a))
    return _unwrap(spec, (b, a, reduce_angle(-g[2])))


def modular(spec, g):
    """Modular function; 1 on the line and ``1/a`` otherwise."""
    spec = as_spec(spec)
    g = _coords(spec, g)
    if spec.kind is GroupKind.LINE:
        out = np.ones_like(g[0])
    else:
        out = 1.0 / g[1]
    return float(out) if np.ndim(out) == 0 else out


def haar_density(spec, g):
    """Density of the left Haar measure in the coordinates (b, a, phi).

    ``db`` gives 1, ``db da / a^2`` gives ``a^-2``; the circle factor
    ``dphi / 2 pi`` is folded into the density as ``1 / 2 pi``.
    """
    spec = as_spec(spec)
    g = _coords(spec, g)
    if spec.kind is GroupKind.LINE:
        return np.ones_like(g[0])
    dens = g[1] ** -2.0
    if spec.kind is GroupKind.AFFINE_CIRCLE:
        dens = dens / TWO_PI
    return dens


# ----------------------------------------------------------------------
# weights
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SampleSet:
    """Sample elements used as witnesses for weight certificates.

    ``x`` and ``y`` are element tuples of equal batch length; the pairs
    ``(x[i], y[i])`` test submultiplicativity and the points of ``x``
    test symmetry and the lower bounds.
    """

    x: tuple
    y: tuple

    def __len__(self) -> int:
        return int(np.size(self.x[0]))


def sample_elements(spec, n: int, b_halfwidth: float = 10.0, a_range=(0.1, 10.0),
                    rng=None) -> SampleSet:
    """Draw ``n`` random pairs covering a box of the group.

    Scales are log-uniform in ``a_range``; angles uniform.
    """
    spec = as_spec(spec)
    rng = np.random.default_rng(rng)

    def draw():
        coords = [rng.uniform(-b_halfwidth, b_halfwidth, n)]
        if spec.ndim >= 2:
            lo, hi = np.log(a_range[0]), np.log(a_range[1])
            coords.append(np.exp(rng.uniform(lo, hi, n)))
        if spec.ndim == 3:
            coords.append(rng.uniform(0.0, TWO_PI, n))
        return tuple(coords)

    return SampleSet(draw(), draw())


@dataclass(frozen=True)
class Certificate:
    holds: bool
    worst: float
    witness: SampleSet | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Weight:
    """A positive function on the group.

    Parameters
    ----------
    evaluator : callable
        Takes the coordinate arrays ``(b,)``, ``(b, a)`` or ``(b, a, phi)``
        and returns positive values of the same shape.
    name : str
        Identifier used in reports, e.g. ``"one"`` or ``"poly:2"``.
    certificates : dict
        Filled by :func:`validate_weight`; empty for an unvalidated weight.
    """

    evaluator: Callable = field(compare=False)
    name: str = "custom"
    certificates: dict = field(default_factory=dict, compare=False)

    def __call__(self, *coords):
        return np.asarray(self.evaluator(*coords), dtype=float)

    @property
    def validated(self) -> bool:
        return bool(self.certificates)


def _one(*coords):
    return np.ones(np.broadcast(*coords).shape)


ONE = Weight(_one, "one")


def poly_weight(s: float) -> Weight:
    """Preset ``(1 + |b|)^s max(a, 1/a)^s``; only ``b`` on the line."""
    s = float(s)

    def ev(b, a=None, phi=None):
        w = (1.0 + np.abs(b)) ** s
        if a is not None:
            w = w * np.maximum(a, 1.0 / a) ** s
        if phi is not None:
            w = w + 0.0 * phi
        return w

    return Weight(ev, f"poly:{s:g}")


def weight_from_name(name: str) -> Weight:
    """Resolve a preset name: ``"one"`` or ``"poly:<s>"``."""
    if name == "one":
        return ONE
    if name.startswith("poly:"):
        try:
            s = float(name.split(":", 1)[1])
        except ValueError as exc:
            raise DomainError(f"bad weight exponent in {name!r}") from exc
        if s < 0:
            raise DomainError("weight exponent must be nonnegative")
        return poly_weight(s)
    raise DomainError(f"unknown weight preset {name!r}")


def validate_weight(spec, w: Weight, sampler: SampleSet) -> Weight:
    """Check the weight axioms on samples and attach certificates.

    Parameters
    ----------
    spec : GroupSpec
    w : Weight
    sampler : SampleSet
        At least 1000 pairs.

    Returns
    -------
    Weight
        Copy of ``w`` with certificates ``submultiplicative``,
        ``symmetric``, ``bounded_below_by_one`` and ``positive_infimum``.

    Raises
    ------
    InvalidWeightError
        If the weight is not strictly positive on every sample.
    """
    spec = as_spec(spec)
    if len(sampler) < 1000:
        raise DomainError(f"need at least 1000 sample pairs, got {len(sampler)}")
    x = _coords(spec, sampler.x)
    y = _coords(spec, sampler.y)
    xy = _coords(spec, compose(spec, x, y))
    xinv = _coords(spec, inverse(spec, x))
    wx, wy, wxy, wxi = (w(*c) for c in (x, y, xy, xinv))
    for vals in (wx, wy, wxy, wxi):
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
            raise InvalidWeightError(f"weight {w.name!r} is not strictly positive on the samples")
    sub = wxy / (wx * wy)
    sym = np.abs(wx - wxi) / wx
    certs = {
        "submultiplicative": Certificate(bool(np.all(sub <= 1.0 + 1e-10)), float(sub.max()), sampler),
        "symmetric": Certificate(bool(np.all(sym <= 1e-10)), float(sym.max()), sampler),
        "bounded_below_by_one": Certificate(bool(wx.min() >= 1.0 - 1e-12), float(wx.min()), sampler),
        "positive_infimum": Certificate(bool(wx.min() >= 1e-9), float(wx.min()), sampler),
    }
    return replace(w, certificates=certs)


def left_translate_coords(spec, x, coords: Sequence):
    """Coordinates of ``x^{-1} y`` for each ``y`` in ``coords``.

    This is the argument of the left translate ``(lambda(x) f)(y) = f(x^{-1} y)``.
    """
    spec = as_spec(spec)
    return compose(spec, inverse(spec, x), tuple(coords))
