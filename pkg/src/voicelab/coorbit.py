"""Reproducing projection, coorbit norms and kernel integrability profiles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _io
from .convolution import ModeField, convolve_affine, convolve_affine_circle, convolve_line, mode_window_profile
from .exceptions import ConfigurationError, DomainError
from .grids import (GroupGrid, VoiceField, cauchy_increment, cauchy_verdict, dyadic_windows, lp_norm,
                    window_profile)
from .groups import ONE, GroupKind, Weight
from .signals import Signal1D
from .voice import Representation, RepKind, kernel, voice

#: default residual below which a field counts as a member of M^p on the grid
MEMBERSHIP_TOL = 1e-2


def _line_convolve_field(F: VoiceField, K: VoiceField) -> VoiceField:
    """``F * K`` on a line grid, cropped back to the grid of ``F``.

    ``K`` must be sampled on a grid containing the node ``b = 0``.
    """
    g = F.grid
    out = convolve_line(Signal1D(F.values, g.db, g.b0), Signal1D(K.values, K.grid.db, K.grid.b0))
    off = int(round((g.b0 - out.x0) / g.db))
    if abs(out.x0 + off * g.db - g.b0) > 1e-9 * g.db:
        raise ConfigurationError("kernel grid is not aligned with the field grid")
    return VoiceField(g, out.samples[off: off + g.n_b])


def reproducing_kernel(rep: Representation, grid: GroupGrid):
    """Kernel used for ``F * K`` on ``grid``.

    On the line the closed-form kernel is sampled on :func:`lag_grid`, so
    the convolution sees every lag of the window; on the affine groups the
    kernel lives on ``grid`` itself.
    """
    return kernel(rep, grid.lag_grid())


def convolve_fields(F, K):
    """``F * K`` for fields on the line, the affine group or mode fields."""
    if isinstance(F, ModeField):
        return convolve_affine_circle(F, K)
    if F.grid.spec.kind is GroupKind.LINE:
        return _line_convolve_field(F, K)
    return convolve_affine(F, K)


def field_norm(F, p=2.0, w: Weight | None = None) -> float:
    if isinstance(F, ModeField):
        return F.norm2() if float(p) == 2.0 and w is None else F.lp_norm(p, w=w)
    return lp_norm(F, p, w)


def relative_difference(A, B) -> float:
    """``||A - B||_2 / ||B||_2`` for fields or mode fields."""
    den = field_norm(B)
    return field_norm(A - B) / den if den > 0 else 0.0


def reproduce(F, K):
    """Right convolution with the kernel and the reproducing residual.

    Returns
    -------
    (field, residual)
        ``F * K`` and ``||F * K - F|| / ||F||`` in L^2.
    """
    FK = convolve_fields(F, K)
    return FK, relative_difference(FK, F)


@dataclass
class CoorbitReport:
    """Coorbit norm of one signal for one exponent and weight."""

    p: float
    weight: str
    coorbit_norm: float
    residual: float
    comparison_norm: float | None = None
    member: bool = True
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "weight": self.weight,
            "coorbit_norm": self.coorbit_norm,
            "residual": self.residual,
            "comparison_norm": self.comparison_norm,
            "member": self.member,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return _io.dumps_json(self.to_dict())


def _weight_note(grid: GroupGrid, w: Weight) -> str:
    if w is None or w is ONE:
        return ""
    vals = w(*grid.coords())
    if vals.max() > 1e6 * max(vals.min(), 1e-300):
        return "weight varies by more than 1e6 across the grid box; norms depend on the box"
    return ""


def coorbit_norm(v, rep: Representation, grid: GroupGrid, p=2.0, w: Weight | None = None,
                 K=None, tol: float = MEMBERSHIP_TOL, comparison: float | None = None) -> CoorbitReport:
    """``||V v||_{p,w}`` together with the membership residual of ``V v``.

    Parameters
    ----------
    v : Signal1D or Signal2D
    rep : Representation
    grid : GroupGrid
    p : float
        Exponent, at least 1.
    w : Weight, optional
        Defaults to ``w = 1``.
    K : VoiceField or ModeField, optional
        Precomputed kernel (computed from ``rep`` otherwise).
    tol : float
        Residual below which the report marks membership.
    comparison : float, optional
        Reference norm stored alongside (for translations the signal's
        own L^p norm when not given).

    Raises
    ------
    DomainError
        If ``p < 1``.
    """
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    w = w or ONE
    V = voice(v, rep, grid)
    norm = field_norm(V, p, None if w is ONE else w)
    if norm == 0.0:
        resid = 0.0
    else:
        K = K if K is not None else reproducing_kernel(rep, grid)
        resid = reproduce(V, K)[1]
    if comparison is None and rep.kind is RepKind.TRANSLATION:
        comparison = v.norm(p)
    notes = "" if isinstance(V, ModeField) else _weight_note(grid, w)
    return CoorbitReport(p, w.name, norm, resid, comparison, resid < tol, notes)


def coorbit_batch(signals, rep: Representation, grid: GroupGrid, ps, w: Weight | None = None,
                  tol: float = MEMBERSHIP_TOL, comparisons=None) -> list:
    """Coorbit reports for every signal and exponent, ordered by signal then p.

    Returns a list of rows ``(signal_id, p, coorbit_norm, residual, verdict)``
    and the reports.
    """
    K = reproducing_kernel(rep, grid)
    rows, reports = [], []
    for i, v in enumerate(signals):
        V = voice(v, rep, grid)
        resid = reproduce(V, K)[1] if field_norm(V) > 0 else 0.0
        for j, p in enumerate(ps):
            p = float(p)
            if not p >= 1.0:
                raise DomainError(f"p must be >= 1, got {p}")
            norm = field_norm(V, p, w)
            comp = None
            if comparisons is not None:
                comp = comparisons[i][j]
            elif rep.kind is RepKind.TRANSLATION:
                comp = v.norm(p)
            rep_ = CoorbitReport(p, (w or ONE).name, norm, resid, comp, resid < tol)
            reports.append(rep_)
            rows.append((i, p, norm, resid, "member" if rep_.member else "nonmember"))
    return rows, reports


def write_batch_csv(path, rows) -> None:
    _io.write_csv(path, ["signal_id", "p", "coorbit_norm", "residual", "verdict"],
                  [(int(i), float(p), float(n), float(r), v) for i, p, n, r, v in rows])


@dataclass
class IntegrabilityRow:
    p: float
    verdict: str
    final_norm: float
    increment: float
    profile: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"p": self.p, "verdict": self.verdict, "final_norm": self.final_norm,
                "increment": self.increment, "profile": [list(x) for x in self.profile]}


def integrability_profile(K, ps, w: Weight | None = None, windows=None, tol: float = 1e-2) -> list:
    """Window profiles and Cauchy verdicts of a kernel for several exponents.

    Parameters
    ----------
    K : VoiceField or ModeField
        Kernel on a line, affine or mode grid.  Mode fields use windows
        measured in each mode's own b-coordinate.
    ps : sequence of float
        Exponents in ``[1, inf)``.
    windows : sequence of float, optional
        Increasing halfwidths; defaults to 7 dyadic windows up to 1000.
    tol : float
        Relative increment between the last two windows below which the
        profile counts as convergent.

    Returns
    -------
    list of IntegrabilityRow
    """
    windows = dyadic_windows() if windows is None else np.asarray(windows, dtype=float)
    ps = [float(p) for p in ps]
    if any(not (1.0 <= p < np.inf) for p in ps):
        raise DomainError("integrability exponents must lie in [1, inf)")
    if isinstance(K, ModeField):
        if w is not None and w is not ONE:
            raise ConfigurationError("weighted profiles of mode fields are not supported")
        profiles = mode_window_profile(K, ps, windows)
    else:
        profiles = {p: window_profile(K, p, windows, w) for p in ps}
    rows = []
    for p in ps:
        prof = profiles[p]
        rows.append(IntegrabilityRow(p, cauchy_verdict(prof, tol), prof[-1][1], cauchy_increment(prof), prof))
    return rows


def write_integrability_csv(path, rows) -> None:
    _io.write_csv(path, ["p", "verdict", "final_norm", "increment"],
                  [(r.p, r.verdict, r.final_norm, r.increment) for r in rows])
