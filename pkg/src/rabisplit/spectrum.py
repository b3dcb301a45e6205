"""Emission spectrum of the dressed qubit and its peak anatomy.

The spontaneous-emission power spectrum has the closed Lorentzian-like
form

    P(w) = 1 / [ (w - eta*delta - R(w))^2 + Gamma(w)^2 ],

unnormalized (heights carry meaning only as ratios).  Scanning it on a
refined grid, locating maxima and measuring their positions, heights
and widths reduces each run to a small report that can be classified
with the compact doublet shorthand used in the output tables:

    single  one emission peak
    S       doublet with symmetric heights
    AS      doublet, upper-frequency peak brighter
    AS*     doublet, lower-frequency peak brighter (inverted asymmetry)
    VAS     doublet with strong height AND position asymmetry

Threshold constants below were frozen by scripts/calibrate_thresholds.py
so that each operating regime lands safely inside its band.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalFailure
from .renormalization import EnvironmentRenormalization
from .response import ResponseKernel, gamma, real_shift
from .spectral_density import Environment

__all__ = [
    "SpectrumSeries",
    "Peak",
    "PeakReport",
    "emission_spectrum",
    "find_peaks",
    "classify",
    "LABEL_SINGLE",
    "LABEL_SYMMETRIC",
    "LABEL_BRIGHT_UPPER",
    "LABEL_BRIGHT_LOWER",
    "LABEL_VERY_ASYMMETRIC",
]

LABEL_SINGLE = "single"
LABEL_SYMMETRIC = "S"
LABEL_BRIGHT_UPPER = "AS"
LABEL_BRIGHT_LOWER = "AS*"
LABEL_VERY_ASYMMETRIC = "VAS"

#: |height_ratio - 1| at or below this counts as a symmetric doublet
EPS_SYMMETRIC = 0.01
#: very-asymmetric needs |height_ratio - 1| above this ...
VAS_HEIGHT_BOUND = 0.5
#: ... and |position_asymmetry| above this fraction of the splitting
VAS_POSITION_BOUND = 0.01

#: peaks below this fraction of the global maximum are noise
PEAK_FLOOR = 1e-3
_MIN_SAMPLES = 16
_GRID_POINTS = 4001


@dataclass(frozen=True, eq=False)
class SpectrumSeries:
    """One spectrum scan: power plus the R, Gamma diagnostics per point."""

    mode: str
    omega: np.ndarray
    power: np.ndarray
    r_shift: np.ndarray
    gamma: np.ndarray
    env: Environment
    dressing: EnvironmentRenormalization


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    fwhm: float  # nan when a half-height crossing leaves the grid


@dataclass(frozen=True)
class PeakReport:
    """Peak metrics of one spectrum.

    shift applies to single-peak spectra (position minus the bare
    splitting); splitting, position_asymmetry and height_ratio apply to
    doublets, measured between the two tallest peaks with "left" and
    "right" ordered by frequency.
    """

    peaks: tuple[Peak, ...]
    delta: float
    shift: float | None
    splitting: float | None
    position_asymmetry: float | None
    height_ratio: float | None
    classification: str

    @property
    def peak_count(self) -> int:
        return len(self.peaks)


def emission_spectrum(env: Environment, mode: str = "full",
                      grid=None,
                      dressing: EnvironmentRenormalization | None = None,
                      ) -> SpectrumSeries:
    """Scan P(omega) for an environment.

    With grid=None a default two-pass scan is used: 4001 uniform points
    on a window around the bare splitting wide enough for the doublet
    (or the single line), then 10x densification within +-5 cavity
    linewidths of each provisional maximum.  An explicit grid skips the
    refinement pass.
    """
    kernel = ResponseKernel(env, dressing=dressing, mode=mode)
    if grid is not None:
        om = np.asarray(grid, dtype=float)
        if om.ndim != 1 or om.size < 2 or np.any(np.diff(om) <= 0.0):
            raise ValueError("grid must be strictly increasing, 1-d")
        if om[0] <= 0.0:
            raise ValueError("grid must be positive")
        return _evaluate(kernel, om)
    base = _default_grid(kernel)
    provisional = _evaluate(kernel, base)
    segments = [base]
    dx = base[1] - base[0]
    reach = max(5.0 * env.cavity.linewidth, 20.0 * dx)
    for i in _maxima_indices(provisional.power):
        center = base[i]
        n = max(int(round(20.0 * reach / dx)), 11)
        seg = np.linspace(center - reach, center + reach, n)
        segments.append(seg[(seg > base[0]) & (seg < base[-1])])
    merged = np.unique(np.concatenate(segments))
    return _evaluate(kernel, merged)


def _default_grid(kernel: ResponseKernel) -> np.ndarray:
    # window sizing: the doublet sits within +-(g + a few widths); peak
    # widths are set by the cavity linewidth and the intrinsic bath's
    # rate, NOT by the huge on-resonance cavity damping g^2/linewidth
    env = kernel.env
    center = kernel.dressed_splitting
    intrinsic_rate = np.pi * float(
        kernel.tabulations[0].density(np.array([center]))[0])
    half = 3.0 * max(env.cavity.g, 10.0 * env.cavity.linewidth) \
        + 30.0 * intrinsic_rate
    lo = max(env.delta - half, 1e-6 * env.delta)
    return np.linspace(lo, env.delta + half, _GRID_POINTS)


def _evaluate(kernel: ResponseKernel, om: np.ndarray) -> SpectrumSeries:
    r = real_shift(kernel, om)
    g = gamma(kernel, om)
    with np.errstate(divide="ignore"):
        power = 1.0 / ((om - kernel.dressed_splitting - r) ** 2 + g**2)
    return SpectrumSeries(mode=kernel.mode, omega=om, power=power,
                          r_shift=r, gamma=g, env=kernel.env,
                          dressing=kernel.dressing)


def find_peaks(series: SpectrumSeries) -> PeakReport:
    """Locate spectral maxima and derive the doublet metrics.

    Maxima come from three-point comparison, refined through a local
    quadratic fit; anything below PEAK_FLOOR of the global maximum is
    discarded.  Widths are half-height crossings interpolated on the
    same local quadratics.
    """
    om, p = series.omega, series.power
    if om.size < _MIN_SAMPLES:
        raise ValueError("spectrum series too short for peak analysis")
    raw = _maxima_indices(p)
    if not raw:
        raise NumericalFailure("no interior spectral maximum on the grid")
    peaks = []
    for i in raw:
        pos, height = _quadratic_vertex(om, p, i)
        peaks.append((pos, height, i))
    tallest = max(h for _, h, _ in peaks)
    peaks = [(x, h, i) for x, h, i in peaks if h >= PEAK_FLOOR * tallest]
    resolved = tuple(
        Peak(position=x, height=h, fwhm=_fwhm(om, p, i, h))
        for x, h, i in peaks)

    delta = series.env.delta
    report = PeakReport(peaks=resolved, delta=delta, shift=None,
                        splitting=None, position_asymmetry=None,
                        height_ratio=None, classification="")
    if len(resolved) == 1:
        report = replace(report, shift=resolved[0].position - delta)
    else:
        left, right = sorted(sorted(resolved, key=lambda q: q.height)[-2:],
                             key=lambda q: q.position)
        report = replace(
            report,
            splitting=right.position - left.position,
            position_asymmetry=(right.position - delta)
            - (delta - left.position),
            height_ratio=right.height / left.height)
    return replace(report, classification=classify(report))


def classify(report: PeakReport) -> str:
    """Doublet label from the numeric peak metrics (see module header)."""
    if report.peak_count == 1:
        return LABEL_SINGLE
    ratio = report.height_ratio
    if abs(ratio - 1.0) <= EPS_SYMMETRIC:
        return LABEL_SYMMETRIC
    if (abs(ratio - 1.0) > VAS_HEIGHT_BOUND
            and abs(report.position_asymmetry)
            > VAS_POSITION_BOUND * report.splitting):
        return LABEL_VERY_ASYMMETRIC
    return LABEL_BRIGHT_UPPER if ratio > 1.0 else LABEL_BRIGHT_LOWER


def _maxima_indices(p: np.ndarray) -> list[int]:
    mids = np.nonzero((p[1:-1] > p[:-2]) & (p[1:-1] > p[2:]))[0] + 1
    return [int(i) for i in mids]


def _quadratic_vertex(om: np.ndarray, p: np.ndarray,
                      i: int) -> tuple[float, float]:
    x0, x1, x2 = om[i - 1], om[i], om[i + 1]
    y0, y1, y2 = p[i - 1], p[i], p[i + 1]
    d1 = (y1 - y0) / (x1 - x0)
    d2 = (y2 - y1) / (x2 - x1)
    curv = (d2 - d1) / (x2 - x0)
    if curv >= 0.0:
        return float(x1), float(y1)
    xv = 0.5 * (x0 + x1) - d1 / (2.0 * curv)
    yv = y0 + d1 * (xv - x0) + curv * (xv - x0) * (xv - x1)
    return float(xv), float(yv)


def _fwhm(om: np.ndarray, p: np.ndarray, i: int, height: float) -> float:
    half = 0.5 * height
    left = _half_crossing(om, p, i, half, -1)
    right = _half_crossing(om, p, i, half, +1)
    return right - left


def _half_crossing(om: np.ndarray, p: np.ndarray, start: int,
                   half: float, step: int) -> float:
    """Frequency where p crosses `half` walking from a peak; nan when the
    grid ends first."""
    j = start
    while True:
        j += step
        if j < 0 or j >= p.size:
            return np.nan
        if p[j] < half:
            break
    inner = j - step  # last sample still above half
    xs = om[[inner - abs(step), inner, j]] if step > 0 \
        else om[[j, inner, inner + 1]]
    ys = p[[inner - abs(step), inner, j]] if step > 0 \
        else p[[j, inner, inner + 1]]
    root = _quadratic_root(xs, ys, half, om[min(inner, j)], om[max(inner, j)])
    if root is not None:
        return root
    # linear fallback across the bracketing pair
    x_in, y_in, x_out, y_out = om[inner], p[inner], om[j], p[j]
    return float(x_in + (half - y_in) * (x_out - x_in) / (y_out - y_in))


def _quadratic_root(xs, ys, level: float, lo: float,
                    hi: float) -> float | None:
    x0, x1, x2 = xs
    y0, y1, y2 = ys
    d1 = (y1 - y0) / (x1 - x0)
    curv = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0)
    a = curv
    b = d1 - curv * (x0 + x1)
    c = y0 - d1 * x0 + curv * x0 * x1 - level
    if a == 0.0:
        if b == 0.0:
            return None
        root = -c / b
        return float(root) if lo <= root <= hi else None
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
    for root in (q / a, c / q if q != 0.0 else np.nan):
        if lo <= root <= hi:
            return float(root)
    return None
