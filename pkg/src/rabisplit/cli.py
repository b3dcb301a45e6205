"""Experiment front end: YAML configs, named presets, CSV/JSON export.

Everything the library computes is reachable from here as files.  A run
is described by an ExperimentConfig (environment parameters, evaluation
mode, scan grid, which artifacts to emit); `load_config` builds a list
of them from a YAML file or from one of the compiled-in preset ids
(fig2 .. fig5b, table1) that cover the standard demonstration set:
spectral-density overview curves, cavity-only doublets with and without
the co-rotating terms at two quality factors, the coupling-regime scans
for the low-frequency and Ohmic intrinsic baths, and the twelve-cell
classification table.

Output contract, per config label:

    {label}.spectrum.csv   omega_ghz, power, r_shift_ghz, gamma_ghz, mode
    {label}.peaks.json     peak table + classification per mode
    {label}.dynamics.csv   t_ns, chi_real, chi_imag, population
    {label}.oracle.csv     t_ns, amp_real, amp_imag, population
    {label}.densities.csv  omega_ghz, j_intrinsic_ghz, j_cavity_ghz
    {label}.manifest.json  resolved parameters, eta values, version, wall time

CSV floats carry 17 significant digits and JSON keys are sorted, so a
repeated run reproduces every artifact byte for byte (the manifest is
the one exception: it records wall time).  Files are written atomically
(temp + rename) and only after every artifact for the config has been
computed, so a numerical failure never leaves partial results behind.
Frequencies in configs accept explicit GHz/MHz suffixes; everything is
GHz internally.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .dynamics import survival_amplitude
from .errors import ConfigurationError, NumericalFailure
from .oracle import default_mode_range, discretize, evolve
from .renormalization import solve_environment
from .response import ResponseKernel
from .spectral_density import (Environment, LorentzianCavityBath,
                               LowFrequencyBath, OhmicBath, eval_density)
from .spectrum import emission_spectrum, find_peaks

__all__ = ["ExperimentConfig", "PRESET_IDS", "load_config",
           "run_experiment", "main"]

_MODES = ("full", "rwa", "both")
_INTRINSIC_KINDS = ("ohmic", "lowfreq")
_OUTPUT_KINDS = ("spectrum", "peaks", "dynamics", "oracle", "densities")

# default corner frequencies, in units of delta
_OHMIC_CORNER = 10.0
_LOWFREQ_CORNER = 0.02

_FREQ_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(GHz|MHz)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class ExperimentConfig:
    """One fully describable run: environment, mode, grid, artifacts.

    Frequencies are GHz.  `corner` is the intrinsic bath's
    characteristic frequency (cutoff for ohmic, rolloff for lowfreq);
    None means the kind-specific default relative to `delta`.  Exactly
    one of `q_factor` and `linewidth` must be set; the other is derived
    through Q = omega_cav / linewidth.
    """

    label: str
    delta: float = 10.0
    intrinsic_kind: str = "ohmic"
    alpha: float = 1e-4
    corner: float | None = None
    g: float = 0.2
    omega_cav: float | None = None
    q_factor: float | None = None
    linewidth: float | None = None
    mode: str = "full"
    span: float | None = None
    points: int | None = None
    outputs: tuple[str, ...] = ("spectrum", "peaks")
    oracle_modes: int = 2000
    oracle_t_max: float = 200.0
    oracle_dt: float | None = None

    def resolve(self) -> "ExperimentConfig":
        """Validate and return a copy with every default filled in."""
        where = f"config '{self.label}'"
        if self.mode not in _MODES:
            raise ConfigurationError(
                f"{where}: mode must be one of {_MODES}, got {self.mode!r}")
        if self.intrinsic_kind not in _INTRINSIC_KINDS:
            raise ConfigurationError(
                f"{where}: intrinsic.kind must be one of "
                f"{_INTRINSIC_KINDS}, got {self.intrinsic_kind!r}")
        if not self.delta > 0.0:
            raise ConfigurationError(
                f"{where}: delta must be positive, got {self.delta}")
        if not self.g >= 0.0:
            raise ConfigurationError(
                f"{where}: cavity.g must be >= 0, got {self.g}")
        if self.alpha < 0.0:
            raise ConfigurationError(
                f"{where}: intrinsic.alpha must be >= 0, got {self.alpha}")
        if self.q_factor is None and self.linewidth is None:
            raise ConfigurationError(
                f"{where}: cavity needs exactly one of q / linewidth")
        bad = [k for k in self.outputs if k not in _OUTPUT_KINDS]
        if bad:
            raise ConfigurationError(
                f"{where}: unknown outputs {bad}; valid: {_OUTPUT_KINDS}")
        if self.points is not None and self.points < 3:
            raise ConfigurationError(
                f"{where}: scan.points must be >= 3, got {self.points}")
        if self.span is not None and self.span <= 0.0:
            raise ConfigurationError(
                f"{where}: scan.span must be positive, got {self.span}")
        if self.oracle_modes < 2:
            raise ConfigurationError(
                f"{where}: oracle.modes must be >= 2, got {self.oracle_modes}")
        if self.oracle_t_max <= 0.0:
            raise ConfigurationError(
                f"{where}: oracle.t_max must be positive")

        corner = self.corner
        if corner is None:
            scale = _OHMIC_CORNER if self.intrinsic_kind == "ohmic" \
                else _LOWFREQ_CORNER
            corner = scale * self.delta
        if corner <= 0.0:
            raise ConfigurationError(
                f"{where}: intrinsic.corner must be positive, got {corner}")
        if self.intrinsic_kind == "lowfreq" and corner >= self.delta:
            raise ConfigurationError(
                f"{where}: intrinsic.corner = {corner} GHz must stay below "
                f"delta = {self.delta} GHz for a lowfreq bath")
        omega_cav = self.delta if self.omega_cav is None else self.omega_cav
        if omega_cav <= 0.0:
            raise ConfigurationError(
                f"{where}: cavity.omega_cav must be positive")
        if self.q_factor is not None and self.linewidth is not None:
            # both present only on an already-resolved config; they must
            # agree (the YAML loader rejects both keys at the boundary)
            if not math.isclose(self.q_factor * self.linewidth, omega_cav,
                                rel_tol=1e-9):
                raise ConfigurationError(
                    f"{where}: q and linewidth are mutually exclusive")
        if self.q_factor is not None:
            if self.q_factor <= 0.0:
                raise ConfigurationError(
                    f"{where}: cavity.q must be positive, got {self.q_factor}")
            linewidth = omega_cav / self.q_factor
            q_factor = self.q_factor
        else:
            if self.linewidth <= 0.0:
                raise ConfigurationError(
                    f"{where}: cavity.linewidth must be positive")
            linewidth = self.linewidth
            q_factor = omega_cav / self.linewidth
        return dataclasses.replace(
            self, corner=corner, omega_cav=omega_cav,
            q_factor=q_factor, linewidth=linewidth,
            outputs=tuple(self.outputs))

    def environment(self) -> Environment:
        cfg = self if self.linewidth is not None else self.resolve()
        if cfg.intrinsic_kind == "ohmic":
            intrinsic = OhmicBath(alpha=cfg.alpha, omega_c=cfg.corner)
        else:
            intrinsic = LowFrequencyBath(alpha=cfg.alpha, omega_low=cfg.corner)
        cavity = LorentzianCavityBath(g=cfg.g, linewidth=cfg.linewidth,
                                      omega_cav=cfg.omega_cav)
        return Environment(delta=cfg.delta, intrinsic=intrinsic,
                           cavity=cavity)


# --------------------------------------------------------------------
# YAML config files
# --------------------------------------------------------------------

def _freq(value, where: str) -> float:
    """Parse a frequency: bare numbers are GHz, strings need a suffix."""
    if isinstance(value, bool):
        raise ConfigurationError(f"{where}: expected a frequency, got bool")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _FREQ_RE.match(value)
        if m:
            scale = 1.0 if m.group(2).lower() == "ghz" else 1e-3
            return float(m.group(1)) * scale
    raise ConfigurationError(
        f"{where}: expected a number (GHz) or a 'GHz'/'MHz' suffixed "
        f"string, got {value!r}")


def _number(value, where: str) -> float:
    # YAML 1.1 reads "1.0e4" (no exponent sign) as a string; accept it
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise ConfigurationError(
                f"{where}: expected a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(
            f"{where}: expected an integer, got {value!r}")
    return value


def _mapping(value, where: str, allowed: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        raise ConfigurationError(f"{where}: expected a mapping")
    unknown = sorted(set(value) - set(allowed))
    if unknown:
        raise ConfigurationError(
            f"{where}.{unknown[0]}: unknown key (allowed: {allowed})")
    return value


def _parse_entry(entry, where: str, index: int) -> ExperimentConfig:
    top = _mapping(entry, where, ("label", "delta", "mode", "intrinsic",
                                  "cavity", "scan", "outputs", "oracle"))
    kwargs: dict = {}
    label = top.get("label", f"run{index:02d}")
    if not isinstance(label, str) or not label \
            or not re.fullmatch(r"[A-Za-z0-9._-]+", label):
        raise ConfigurationError(
            f"{where}.label: need a filename-safe string, got {label!r}")
    kwargs["label"] = label
    if "delta" in top:
        kwargs["delta"] = _freq(top["delta"], f"{where}.delta")
    if "mode" in top:
        kwargs["mode"] = top["mode"]

    if "intrinsic" in top:
        blk = _mapping(top["intrinsic"], f"{where}.intrinsic",
                       ("kind", "alpha", "corner"))
        if "kind" in blk:
            kwargs["intrinsic_kind"] = blk["kind"]
        if "alpha" in blk:
            kwargs["alpha"] = _number(blk["alpha"],
                                      f"{where}.intrinsic.alpha")
        if "corner" in blk:
            kwargs["corner"] = _freq(blk["corner"],
                                     f"{where}.intrinsic.corner")

    blk = _mapping(top.get("cavity", {}), f"{where}.cavity",
                   ("g", "omega_cav", "q", "linewidth"))
    if "g" in blk:
        kwargs["g"] = _freq(blk["g"], f"{where}.cavity.g")
    if "omega_cav" in blk:
        kwargs["omega_cav"] = _freq(blk["omega_cav"],
                                    f"{where}.cavity.omega_cav")
    if "q" in blk and "linewidth" in blk:
        raise ConfigurationError(
            f"{where}.cavity: q and linewidth are mutually exclusive")
    if "q" in blk:
        kwargs["q_factor"] = _number(blk["q"], f"{where}.cavity.q")
    if "linewidth" in blk:
        kwargs["linewidth"] = _freq(blk["linewidth"],
                                    f"{where}.cavity.linewidth")

    if "scan" in top:
        blk = _mapping(top["scan"], f"{where}.scan", ("span", "points"))
        if "span" in blk:
            kwargs["span"] = _freq(blk["span"], f"{where}.scan.span")
        if "points" in blk:
            kwargs["points"] = _integer(blk["points"],
                                        f"{where}.scan.points")

    if "outputs" in top:
        kinds = top["outputs"]
        if not isinstance(kinds, list) \
                or not all(isinstance(k, str) for k in kinds):
            raise ConfigurationError(
                f"{where}.outputs: expected a list of strings")
        kwargs["outputs"] = tuple(kinds)

    if "oracle" in top:
        blk = _mapping(top["oracle"], f"{where}.oracle",
                       ("modes", "t_max", "dt"))
        if "modes" in blk:
            kwargs["oracle_modes"] = _integer(blk["modes"],
                                              f"{where}.oracle.modes")
        if "t_max" in blk:
            kwargs["oracle_t_max"] = _number(blk["t_max"],
                                             f"{where}.oracle.t_max")
        if blk.get("dt") is not None:
            kwargs["oracle_dt"] = _number(blk["dt"], f"{where}.oracle.dt")

    return ExperimentConfig(**kwargs).resolve()


def load_config(source: str | Path) -> list[ExperimentConfig]:
    """Expand a preset id, or load and validate a YAML config file.

    The file layout is a top-level mapping with one key, ``configs``,
    holding a list of run entries; see the README for the field-by-field
    schema.  Every violation is reported with the offending field path.
    Physically inconsistent inputs (a lowfreq corner at or above the
    qubit splitting, both q and linewidth given, ...) are rejected here,
    not at run time.
    """
    key = str(source)
    if key in PRESETS:
        return [cfg.resolve() for cfg in PRESETS[key]()]
    path = Path(source)
    if not path.is_file():
        raise ConfigurationError(
            f"{source!r} is neither a preset id {sorted(PRESETS)} "
            f"nor a config file")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: not valid YAML: {exc}") from exc
    if doc is None:
        return []
    top = _mapping(doc, str(path), ("configs",))
    entries = top.get("configs", [])
    if not isinstance(entries, list):
        raise ConfigurationError(f"{path}.configs: expected a list")
    configs = [_parse_entry(e, f"{path}.configs[{i}]", i)
               for i, e in enumerate(entries)]
    labels = [c.label for c in configs]
    if len(set(labels)) != len(labels):
        dup = sorted({x for x in labels if labels.count(x) > 1})
        raise ConfigurationError(
            f"{path}: duplicate labels {dup} would overwrite each other")
    return configs


# --------------------------------------------------------------------
# Presets
# --------------------------------------------------------------------

# coupling regimes, GHz: weak 0.1 MHz, strong 200 MHz, ultra 1 GHz
_REGIME_G = (("weak", 1e-4), ("strong", 0.2), ("ultra", 1.0))


def _cavity_only(tag: str, q: float, mode: str) -> list[ExperimentConfig]:
    return [ExperimentConfig(label=f"{tag}_g{int(1000 * g)}mhz",
                             intrinsic_kind="ohmic", alpha=0.0,
                             g=g, q_factor=q, mode=mode)
            for g in (0.1, 1.0, 2.0)]


def _regime_scan(tag: str, kind: str, q: float) -> list[ExperimentConfig]:
    return [ExperimentConfig(label=f"{tag}_{name}", intrinsic_kind=kind,
                             alpha=1e-4, g=g, q_factor=q)
            for name, g in _REGIME_G]


def _fig2() -> list[ExperimentConfig]:
    shared = dict(alpha=1e-4, g=0.2, q_factor=1e4, outputs=("densities",))
    return [ExperimentConfig(label="fig2a", intrinsic_kind="lowfreq",
                             **shared),
            ExperimentConfig(label="fig2b", intrinsic_kind="ohmic",
                             **shared)]


def _table1() -> list[ExperimentConfig]:
    configs = []
    for kind in ("lowfreq", "ohmic"):
        for q, qtag in ((1e4, "q1e4"), (1e3, "q1e3")):
            for name, g in _REGIME_G:
                configs.append(ExperimentConfig(
                    label=f"table1_{kind}_{name}_{qtag}",
                    intrinsic_kind=kind, alpha=1e-4, g=g, q_factor=q))
    return configs


PRESETS = {
    "fig2": _fig2,
    "fig3a": lambda: _cavity_only("fig3a", 1e2, "full"),
    "fig3b": lambda: _cavity_only("fig3b", 1e2, "rwa"),
    "fig3c": lambda: _cavity_only("fig3c", 1e3, "full"),
    "fig3d": lambda: _cavity_only("fig3d", 1e3, "rwa"),
    "fig4a": lambda: _regime_scan("fig4a", "lowfreq", 1e4),
    "fig4b": lambda: _regime_scan("fig4b", "ohmic", 1e4),
    "fig5a": lambda: _regime_scan("fig5a", "lowfreq", 1e3),
    "fig5b": lambda: _regime_scan("fig5b", "ohmic", 1e3),
    "table1": _table1,
}
PRESET_IDS = tuple(sorted(PRESETS))


# --------------------------------------------------------------------
# Artifact rendering
# --------------------------------------------------------------------

def _fmt(x: float) -> str:
    return "%.17g" % x


def _csv(header: list[str], columns: list[np.ndarray],
         tags: list[str] | None = None) -> str:
    """Numeric columns at 17 significant digits, optional string tail."""
    lines = [",".join(header)]
    n = len(columns[0])
    for i in range(n):
        row = [_fmt(col[i]) for col in columns]
        if tags is not None:
            row.append(tags[i])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _clean(x):
    """JSON-safe scalar: None for missing values and NaN."""
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(f"{path.name}.tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _spectrum_artifact(series_by_mode: dict) -> str:
    omega, power, r_shift, gam, tags = [], [], [], [], []
    for mode, series in series_by_mode.items():
        omega.append(series.omega)
        power.append(series.power)
        r_shift.append(series.r_shift)
        gam.append(series.gamma)
        tags.extend([mode] * series.omega.size)
    return _csv(["omega_ghz", "power", "r_shift_ghz", "gamma_ghz", "mode"],
                [np.concatenate(omega), np.concatenate(power),
                 np.concatenate(r_shift), np.concatenate(gam)], tags)


def _peaks_artifact(label: str, reports: dict) -> str:
    blocks = {}
    for mode, report in reports.items():
        blocks[mode] = {
            "delta_ghz": _clean(report.delta),
            "classification": report.classification,
            "shift_ghz": _clean(report.shift),
            "splitting_ghz": _clean(report.splitting),
            "position_asymmetry": _clean(report.position_asymmetry),
            "height_ratio": _clean(report.height_ratio),
            "peaks": [{"position_ghz": _clean(p.position),
                       "height": _clean(p.height),
                       "fwhm_ghz": _clean(p.fwhm)} for p in report.peaks],
        }
    return _json({"schema": "rabisplit.peaks/1", "label": label,
                  "reports": blocks})


def _dynamics_artifact(trace) -> str:
    # the trace's negative-time half is the causality diagnostic, not
    # part of the emitted dynamics
    keep = trace.time >= 0.0
    return _csv(["t_ns", "chi_real", "chi_imag", "population"],
                [trace.time[keep], trace.amplitude.real[keep],
                 trace.amplitude.imag[keep], trace.population[keep]])


def _oracle_artifact(trace) -> str:
    return _csv(["t_ns", "amp_real", "amp_imag", "population"],
                [trace.time, trace.amplitude.real, trace.amplitude.imag,
                 np.abs(trace.amplitude) ** 2])


def _densities_artifact(env: Environment) -> str:
    om = np.linspace(0.0, 2.0 * env.delta, 2001)
    return _csv(["omega_ghz", "j_intrinsic_ghz", "j_cavity_ghz"],
                [om, eval_density(env.intrinsic, om, env.delta),
                 eval_density(env.cavity, om, env.delta)])


# --------------------------------------------------------------------
# Running
# --------------------------------------------------------------------

def _run_one(config: ExperimentConfig, out_dir: str) -> dict:
    """Compute every artifact for one config, then write them together.

    Returns the manifest dict (also written to disk) plus an in-memory
    summary block the callers use for console output and the table
    aggregate.
    """
    t0 = time.perf_counter()
    cfg = config.resolve()
    env = cfg.environment()
    modes = ("full", "rwa") if cfg.mode == "both" else (cfg.mode,)
    try:
        artifacts: dict[str, str] = {}
        eta_block: dict[str, dict] = {}
        summary: dict[str, dict] = {}
        extras: dict = {}

        series_by_mode = {}
        reports = {}
        need_spectrum = {"spectrum", "peaks"} & set(cfg.outputs)
        for mode in modes:
            if need_spectrum:
                grid = None
                if cfg.span is not None or cfg.points is not None:
                    span = cfg.span if cfg.span is not None else 4.0
                    points = cfg.points if cfg.points is not None else 4001
                    # the spectrum lives on omega > 0; clip wide scans
                    lo = max(env.delta - 0.5 * span, 1e-9 * env.delta)
                    grid = np.linspace(lo, env.delta + 0.5 * span, points)
                series = emission_spectrum(env, mode, grid=grid)
                series_by_mode[mode] = series
                reports[mode] = find_peaks(series)
                dressing = series.dressing
            else:
                dressing = ResponseKernel(env, mode=mode).dressing
            eta_block[mode] = {
                "eta": float(dressing.eta),
                "eta_intrinsic": float(dressing.intrinsic.eta),
                "eta_cavity": float(dressing.cavity.eta),
                "residual_intrinsic": float(dressing.intrinsic.residual),
                "residual_cavity": float(dressing.cavity.residual),
            }
        if "spectrum" in cfg.outputs:
            artifacts[f"{cfg.label}.spectrum.csv"] = \
                _spectrum_artifact(series_by_mode)
        if "peaks" in cfg.outputs:
            artifacts[f"{cfg.label}.peaks.json"] = \
                _peaks_artifact(cfg.label, reports)
            summary = {m: {"classification": r.classification,
                           "shift_ghz": _clean(r.shift),
                           "splitting_ghz": _clean(r.splitting),
                           "height_ratio": _clean(r.height_ratio),
                           "position_asymmetry":
                               _clean(r.position_asymmetry)}
                       for m, r in reports.items()}

        if "dynamics" in cfg.outputs:
            for mode in modes:
                trace = survival_amplitude(env, mode=mode)
                name = f"{cfg.label}.dynamics.csv" if len(modes) == 1 \
                    else f"{cfg.label}.{mode}.dynamics.csv"
                artifacts[name] = _dynamics_artifact(trace)
                extras.setdefault("causality_residual", {})[mode] = \
                    float(trace.causality_residual)

        if "oracle" in cfg.outputs:
            ren = solve_environment(env)
            baths = []
            for bath, eta_i in ((env.intrinsic, ren.intrinsic.eta),
                                (env.cavity, ren.cavity.eta)):
                rng = default_mode_range(bath, env.delta,
                                         count=cfg.oracle_modes,
                                         t_horizon=cfg.oracle_t_max)
                baths.append(discretize(bath, eta_i, env.delta,
                                        cfg.oracle_modes, rng))
            trace = evolve(baths, ren.eta, env.delta, cfg.oracle_t_max,
                           cfg.oracle_dt)
            artifacts[f"{cfg.label}.oracle.csv"] = _oracle_artifact(trace)
            extras["oracle_norm_drift"] = float(trace.norm_drift)

        if "densities" in cfg.outputs:
            artifacts[f"{cfg.label}.densities.csv"] = \
                _densities_artifact(env)
    except NumericalFailure as exc:
        raise NumericalFailure(
            f"config '{cfg.label}' (mode={cfg.mode}, g={cfg.g} GHz, "
            f"Q={cfg.q_factor:g}, intrinsic={cfg.intrinsic_kind} "
            f"alpha={cfg.alpha}): {exc}") from exc

    manifest = {
        "schema": "rabisplit.manifest/1",
        "tool_version": __version__,
        "label": cfg.label,
        "config": dataclasses.asdict(cfg),
        "eta": eta_block,
        "files": sorted(artifacts),
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }
    manifest.update(extras)
    out = Path(out_dir)
    for name, text in artifacts.items():
        _write_atomic(out / name, text)
    _write_atomic(out / f"{cfg.label}.manifest.json", _json(manifest))
    manifest["summary"] = summary
    return manifest


def run_experiment(configs: list[ExperimentConfig],
                   out_dir: str | Path = "runs",
                   workers: int | None = None) -> list[dict]:
    """Run configs (concurrently when more than one) and write results.

    Returns the per-config manifests in input order.  An empty list is
    a no-op: nothing is written and the caller decides how to report
    it.  Any numerical failure aborts the batch; configs that already
    finished keep their files (each config's own artifact set is always
    complete or absent, never partial).
    """
    if not configs:
        return []
    resolved = [cfg.resolve() for cfg in configs]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if workers is None:
        workers = min(len(resolved), os.cpu_count() or 1)
    if workers <= 1 or len(resolved) == 1:
        return [_run_one(cfg, str(out)) for cfg in resolved]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, resolved,
                             [str(out)] * len(resolved)))


_REGIME_BY_G = {g: name for name, g in _REGIME_G}


def _table_artifact(results: list[dict]) -> str:
    cells = []
    for res in results:
        cfg = res["config"]
        block = res["summary"].get(cfg["mode"], {})
        cells.append({
            "label": res["label"],
            "intrinsic": cfg["intrinsic_kind"],
            "regime": _REGIME_BY_G.get(cfg["g"], "custom"),
            "q_factor": cfg["q_factor"],
            "g_ghz": cfg["g"],
            **block,
        })
    return _json({"schema": "rabisplit.table1/1",
                  "tool_version": __version__, "cells": cells})


# --------------------------------------------------------------------
# Command line
# --------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", "-o", default="runs",
                     help="output directory (default: runs)")
    sub.add_argument("--mode", choices=_MODES,
                     help="override the evaluation mode of every config")
    sub.add_argument("--span", type=float,
                     help="override the scan span, GHz")
    sub.add_argument("--points", type=int,
                     help="override the scan point count")
    sub.add_argument("--workers", type=int,
                     help="max concurrent configs (default: cpu count)")


def _apply_overrides(configs, args, force: set[str]):
    updated = []
    for cfg in configs:
        kw = {}
        if args.mode:
            kw["mode"] = args.mode
        if args.span is not None:
            kw["span"] = args.span
        if args.points is not None:
            kw["points"] = args.points
        if force:
            kw["outputs"] = tuple(dict.fromkeys(cfg.outputs)
                                  | dict.fromkeys(sorted(force)))
        updated.append(dataclasses.replace(cfg, **kw) if kw else cfg)
    return updated


def _report(results: list[dict]) -> None:
    for res in results:
        parts = []
        for mode, blk in sorted(res.get("summary", {}).items()):
            parts.append(f"{mode}: {blk['classification']}")
        tail = f"  [{'; '.join(parts)}]" if parts else ""
        print(f"{res['label']}: {len(res['files'])} file(s), "
              f"{res['wall_time_s']}s{tail}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rabisplit",
        description="Spontaneous-emission spectra of a qubit coupled to "
                    "a lossy cavity beyond the rotating-wave "
                    "approximation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, extra in (("spectrum", "emission spectrum + peak table"),
                        ("dynamics", "adds the time-domain amplitude"),
                        ("oracle", "adds the discretized-bath cross-check")):
        p = sub.add_parser(verb, help=extra)
        p.add_argument("config", help="YAML config file or preset id")
        _add_common(p)

    p = sub.add_parser("preset", help="run a named preset unchanged")
    p.add_argument("id", choices=PRESET_IDS)
    _add_common(p)

    p = sub.add_parser("table1",
                       help="run the 12-cell classification battery")
    _add_common(p)

    args = parser.parse_args(argv)
    force = {"spectrum": {"spectrum", "peaks"},
             "dynamics": {"spectrum", "peaks", "dynamics"},
             "oracle": {"spectrum", "peaks", "oracle"}}.get(args.verb, set())
    try:
        if args.verb == "table1":
            configs = load_config("table1")
        elif args.verb == "preset":
            configs = load_config(args.id)
        else:
            configs = load_config(args.config)
        configs = _apply_overrides(configs, args, force)
        if not configs:
            print("no configs to run", file=sys.stderr)
            return 2
        results = run_experiment(configs, args.out, args.workers)
        _report(results)
        if args.verb == "table1":
            path = Path(args.out) / "table1.json"
            _write_atomic(path, _table_artifact(results))
            print(f"table written to {path}")
        return 0
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
