"""Command-line front end.

Usage::

    voicelab COMMAND [--config PATH] [--out DIR] [--seed N]

Commands are ``kernel``, ``admissible``, ``voice``, ``reproduce``, ``norms``,
``coorbit`` and ``selftest``.  Everything else comes from one JSON document
whose keys mirror :class:`RunConfig`; unknown keys are rejected.  Exit codes:
0 success, 1 configuration or validation error, 2 numerical acceptance
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import _io
from .acceptance import CRITERIA, run_acceptance
from .convolution import ModeField
from .coorbit import (MEMBERSHIP_TOL, coorbit_batch, integrability_profile, reproduce, reproducing_kernel,
                      write_batch_csv, write_integrability_csv)
from .exceptions import InadmissibleError, VoicelabError
from .grids import GridParams, build_grid, dyadic_windows, write_field_csv, write_profile_csv
from .groups import weight_from_name
from .signals import random_band_signal, read_signal_bin, read_signal_csv
from .voice import (BumpAtom, PaulAtom, ShannonAtom, RepKind, default_decay, kernel, kernel_symmetry_residual,
                    normalize_admissible, random_mode_signal, schrodingerlet_rep, translation_rep, voice,
                    wavelet_rep)

COMMANDS = ("kernel", "admissible", "voice", "reproduce", "norms", "coorbit", "selftest")
REPS = ("translation", "wavelet", "schrodingerlet")


class ConfigError(VoicelabError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class AtomConfig:
    """Analyzing vector: ``name`` is ``shannon``, ``paul`` or ``bump``.

    ``omega`` is the Paley-Wiener half-width, ``order``/``peak`` shape the
    Cauchy-Paul atom, ``lo``/``hi`` the bump support, ``radius`` and
    ``decay_base`` define ``a_n = decay_base^-|n|`` for ``|n| <= radius``.
    """

    name: str = "shannon"
    omega: float = 0.5
    order: int = 12
    peak: float = 0.25
    lo: float = 0.25
    hi: float = 0.5
    radius: int = 16
    decay_base: float = 2.0


@dataclass
class GridConfig:
    b_halfwidth: float = GridParams.b_halfwidth
    n_b: int = GridParams.n_b
    a_min: float = GridParams.a_min
    a_max: float = GridParams.a_max
    n_a: int = GridParams.n_a
    n_phi: int = GridParams.n_phi


@dataclass
class SignalConfig:
    """Input signal: a CSV (``x,real,imag``), a binary file, or ``random`` seeded signals."""

    csv: str | None = None
    bin: str | None = None
    dx: float = 1.0
    x0: float | None = None
    random: int = 3


@dataclass
class Tolerances:
    membership: float = MEMBERSHIP_TOL
    cauchy: float = 1e-2
    reproduce: float | None = None


@dataclass
class RunConfig:
    command: str | None = None
    rep: str = "wavelet"
    atom: AtomConfig = field(default_factory=AtomConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    signal: SignalConfig = field(default_factory=SignalConfig)
    ps: list = field(default_factory=lambda: [1.0, 2.0])
    weight: str = "one"
    windows: list | None = None
    criteria: list | None = None
    out: str = "out"
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)


_NESTED = {"atom": AtomConfig, "grid": GridConfig, "signal": SignalConfig, "tolerances": Tolerances}


def _build(cls, data, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'} must be a JSON object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key {where + '.' if where else ''}{unknown[0]}")
    kw = {}
    for k, v in data.items():
        sub = _NESTED.get(k) if cls is RunConfig else None
        kw[k] = _build(sub, v, k) if sub is not None else v
    return cls(**kw)


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def validate(cfg: RunConfig) -> RunConfig:
    """Check types and ranges; raises :class:`ConfigError` naming the field."""
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}, got {cfg.command!r}")
    if cfg.rep not in REPS:
        raise ConfigError(f"rep must be one of {', '.join(REPS)}, got {cfg.rep!r}")
    if not isinstance(cfg.ps, list) or not cfg.ps:
        raise ConfigError("ps must be a nonempty list")
    for i, p in enumerate(cfg.ps):
        p = _number(p, f"ps[{i}]")
        if math.isnan(p) or p < 1.0:
            raise ConfigError(f"ps[{i}] = {p:g}: p must be >= 1")
        cfg.ps[i] = p
    if isinstance(cfg.seed, bool) or not isinstance(cfg.seed, int) or cfg.seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {cfg.seed!r}")
    if cfg.atom.name not in ("shannon", "paul", "bump"):
        raise ConfigError(f"atom.name must be shannon, paul or bump, got {cfg.atom.name!r}")
    for name in ("omega", "peak", "decay_base"):
        if _number(getattr(cfg.atom, name), f"atom.{name}") <= 0:
            raise ConfigError(f"atom.{name} must be positive")
    if not 0 < _number(cfg.atom.lo, "atom.lo") < _number(cfg.atom.hi, "atom.hi"):
        raise ConfigError("atom.lo and atom.hi must satisfy 0 < lo < hi")
    for name in ("order", "radius"):
        v = getattr(cfg.atom, name)
        if isinstance(v, bool) or not isinstance(v, int) or v < (0 if name == "radius" else 1):
            raise ConfigError(f"atom.{name} must be a positive integer, got {v!r}")
    for f_ in fields(GridConfig):
        v = getattr(cfg.grid, f_.name)
        if f_.name in ("n_b", "n_a", "n_phi"):
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"grid.{f_.name} must be a positive integer, got {v!r}")
        elif _number(v, f"grid.{f_.name}") <= 0:
            raise ConfigError(f"grid.{f_.name} must be positive")
    for name in ("membership", "cauchy"):
        if _number(getattr(cfg.tolerances, name), f"tolerances.{name}") <= 0:
            raise ConfigError(f"tolerances.{name} must be positive")
    if cfg.tolerances.reproduce is not None and _number(cfg.tolerances.reproduce, "tolerances.reproduce") <= 0:
        raise ConfigError("tolerances.reproduce must be positive")
    if cfg.windows is not None:
        if not isinstance(cfg.windows, list) or len(cfg.windows) < 2:
            raise ConfigError("windows must be a list of at least two halfwidths")
        w = [_number(x, f"windows[{i}]") for i, x in enumerate(cfg.windows)]
        if any(b <= a for a, b in zip(w, w[1:])) or w[0] <= 0:
            raise ConfigError("windows must be positive and increasing")
    if cfg.criteria is not None:
        bad = [c for c in cfg.criteria if c not in CRITERIA]
        if bad:
            raise ConfigError(f"criteria: unknown criterion {bad[0]!r}")
    try:
        weight_from_name(cfg.weight)
    except VoicelabError as exc:
        raise ConfigError(f"weight: {exc}") from exc
    r = cfg.signal.random
    if isinstance(r, bool) or not isinstance(r, int) or (r < 1 and cfg.signal.csv is None and cfg.signal.bin is None):
        raise ConfigError("signal.random must be at least 1")
    return cfg


def load_config(path=None, command=None, out=None, seed=None) -> RunConfig:
    """Parse the JSON document at ``path`` (defaults if ``None``) and apply CLI overrides."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = _build(RunConfig, data, "")
    if command is not None:
        if cfg.command is not None and cfg.command != command:
            raise ConfigError(f"command: config says {cfg.command!r} but {command!r} was requested")
        cfg.command = command
    if out is not None:
        cfg.out = out
    if seed is not None:
        cfg.seed = seed
    return validate(cfg)


# ----------------------------------------------------------------------
# building blocks from a config
# ----------------------------------------------------------------------

def make_atom(cfg: RunConfig, positive_only: bool = False):
    a = cfg.atom
    if a.name == "shannon":
        return ShannonAtom(positive_only=positive_only)
    if a.name == "paul":
        return PaulAtom(order=a.order, peak=a.peak, positive_only=positive_only)
    return BumpAtom(lo=a.lo, hi=a.hi, positive_only=positive_only)


def make_rep(cfg: RunConfig, normalize: bool = True):
    if cfg.rep == "translation":
        return translation_rep(cfg.atom.omega)
    if cfg.rep == "wavelet":
        return wavelet_rep(make_atom(cfg), normalize=normalize)
    decay = default_decay(cfg.atom.radius, cfg.atom.decay_base)
    return schrodingerlet_rep(make_atom(cfg, True), decay=decay, normalize=normalize)


def make_grid(cfg: RunConfig):
    g = cfg.grid
    params = GridParams(float(g.b_halfwidth), g.n_b, float(g.a_min), float(g.a_max), g.n_a, g.n_phi)
    return build_grid(make_rep(cfg, normalize=False).group, params)


def make_signals(cfg: RunConfig, rep, grid) -> list:
    s = cfg.signal
    if s.csv is not None or s.bin is not None:
        if rep.kind is RepKind.SCHRODINGERLET:
            raise ConfigError("signal: file input is one-dimensional; use signal.random for schrodingerlets")
        v = read_signal_csv(s.csv) if s.csv is not None else read_signal_bin(s.bin, s.dx, s.x0)
        return [v]
    rng = np.random.default_rng(cfg.seed)
    if rep.kind is RepKind.SCHRODINGERLET:
        return [random_mode_signal(rng, rep, grid) for _ in range(s.random)]
    band = (0.02, 0.98 * cfg.atom.omega) if rep.kind is RepKind.TRANSLATION else (0.05, 0.45)
    return [random_band_signal(rng, grid.n_b, grid.db, grid.b0, band=band) for _ in range(s.random)]


def _write_field(path, F) -> None:
    """CSV of a field; mode fields write mode 0 on its own axis."""
    if isinstance(F, ModeField):
        F = F.mode(0)
        if F is None:
            return
    if F.grid.n_phi > 1:
        return
    write_field_csv(path, F)


def _field_summary(F) -> dict:
    if isinstance(F, ModeField):
        return {"modes": sorted(F.modes), "norm2": F.norm2()}
    return {"shape": list(F.grid.shape), "norm2": float(np.sqrt(np.sum(np.abs(F.values) ** 2 * F.grid.weights())))}


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_kernel(cfg, out: Path) -> int:
    rep, grid = make_rep(cfg), make_grid(cfg)
    K = kernel(rep, grid)
    info = {"rep": cfg.rep, "atom": cfg.atom.name, "symmetry_residual": kernel_symmetry_residual(K)}
    info.update(_field_summary(K))
    _io.write_json(out / "kernel.json", info)
    _write_field(out / "kernel.csv", K)
    print(f"kernel symmetry residual {_io.fmt(info['symmetry_residual'])}")
    return 0


def cmd_admissible(cfg, out: Path) -> int:
    rep = make_rep(cfg, normalize=False)
    report = normalize_admissible(rep)[1]
    _io.write_json(out / "admissible.json", report.to_dict())
    print(f"admissible {report.admissible}, normalization factor {_io.fmt(report.normalization_factor)}")
    return 0 if report.admissible else 2


def cmd_voice(cfg, out: Path) -> int:
    rep, grid = make_rep(cfg), make_grid(cfg)
    v = make_signals(cfg, rep, grid)[0]
    V = voice(v, rep, grid)
    _io.write_json(out / "voice.json", _field_summary(V))
    _write_field(out / "voice.csv", V)
    return 0


def cmd_reproduce(cfg, out: Path) -> int:
    rep, grid = make_rep(cfg), make_grid(cfg)
    K = reproducing_kernel(rep, grid)
    rows = []
    for i, v in enumerate(make_signals(cfg, rep, grid)):
        rows.append({"signal_id": i, "residual": reproduce(voice(v, rep, grid), K)[1]})
    worst = max(r["residual"] for r in rows)
    tol = cfg.tolerances.reproduce
    _io.write_json(out / "reproduce.json", {"rep": cfg.rep, "atom": cfg.atom.name, "residuals": rows,
                                            "max_residual": worst, "tolerance": tol})
    print(f"max reproducing residual {_io.fmt(worst)}")
    return 2 if tol is not None and not worst < tol else 0


def cmd_norms(cfg, out: Path) -> int:
    rep, grid = make_rep(cfg), make_grid(cfg)
    K = kernel(rep, grid)
    w = weight_from_name(cfg.weight)
    windows = dyadic_windows() if cfg.windows is None else cfg.windows
    rows = integrability_profile(K, cfg.ps, w=None if w.name == "one" else w, windows=windows,
                                 tol=cfg.tolerances.cauchy)
    write_integrability_csv(out / "norms.csv", rows)
    for r in rows:
        write_profile_csv(out / f"profile_p{_io.fmt(r.p)}.csv", r.profile, r.p)
        print(f"p={_io.fmt(r.p)} {r.verdict} (increment {_io.fmt(r.increment)})")
    return 0


def cmd_coorbit(cfg, out: Path) -> int:
    rep, grid = make_rep(cfg), make_grid(cfg)
    w = weight_from_name(cfg.weight)
    signals = make_signals(cfg, rep, grid)
    rows, reports = coorbit_batch(signals, rep, grid, cfg.ps, None if w.name == "one" else w,
                                  tol=cfg.tolerances.membership)
    write_batch_csv(out / "coorbit.csv", rows)
    _io.write_json(out / "coorbit.json", [r.to_dict() for r in reports])
    return 0


def cmd_selftest(cfg, out: Path) -> int:
    results = run_acceptance(cfg.seed, out, only=cfg.criteria, log=print)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failing: {', '.join(map(str, failed))}" if failed else ""))
    return 2 if failed else 0


HANDLERS = {"kernel": cmd_kernel, "admissible": cmd_admissible, "voice": cmd_voice, "reproduce": cmd_reproduce,
            "norms": cmd_norms, "coorbit": cmd_coorbit, "selftest": cmd_selftest}


def run(cfg: RunConfig) -> int:
    """Execute a validated configuration and return the exit code."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return HANDLERS[cfg.command](cfg, out)


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="voicelab", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="what to run (or set 'command' in the config)")
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="random seed (overrides the config)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.command, args.out, args.seed)
        return run(cfg)
    except InadmissibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VoicelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
