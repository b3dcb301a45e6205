"""Bath spectral densities and their bookkeeping.

Three bath families couple to the qubit:

* ``OhmicBath``         J(w) = 2*alpha*w / (1 + (w/omega_c)^2)
* ``LowFrequencyBath``  J(w) = 2*alpha*w*delta^2 / (w^2 + omega_low^2)
* ``LorentzianCavityBath``
                        J(w) = g^2*linewidth/pi / ((w - omega_cav)^2 + linewidth^2)

All densities are taken to be zero for w < 0: every integral the solver
needs runs over [0, inf), so negative-frequency weight never enters.
The Lorentzian consequently loses a small (computable) tail below zero.

Units: angular frequency in GHz throughout (hbar = 1); rates given in
MHz are converted at the configuration boundary, never here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import geometric_ladder, panel_rule

__all__ = [
    "OhmicBath",
    "LowFrequencyBath",
    "LorentzianCavityBath",
    "BathSpec",
    "Environment",
    "eval_density",
    "quality_factor",
    "integrable_cutoff",
    "panel_breakpoints",
]


@dataclass(frozen=True)
class OhmicBath:
    """Ohmic bath with an algebraic rolloff above the cutoff omega_c.

    The density peaks at omega_c with value alpha*omega_c.
    """

    alpha: float
    omega_c: float

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")


@dataclass(frozen=True)
class LowFrequencyBath:
    """1/f-like bath: J ~ 1/w above the knee omega_low, weighted by the
    square of the qubit splitting (supplied by the owning Environment)."""

    alpha: float
    omega_low: float

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.omega_low <= 0:
            raise ValueError("omega_low must be positive")


@dataclass(frozen=True)
class LorentzianCavityBath:
    """Lossy cavity mode seen as a Lorentzian density of width `linewidth`
    centred at omega_cav; g is the qubit-cavity coupling rate."""

    g: float
    linewidth: float
    omega_cav: float

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.linewidth <= 0:
            raise ValueError("linewidth must be positive")
        if self.omega_cav <= 0:
            raise ValueError("omega_cav must be positive")


BathSpec = OhmicBath | LowFrequencyBath | LorentzianCavityBath


@dataclass(frozen=True)
class Environment:
    """Qubit splitting plus one intrinsic bath and one cavity bath."""

    delta: float
    intrinsic: OhmicBath | LowFrequencyBath
    cavity: LorentzianCavityBath

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not isinstance(self.intrinsic, (OhmicBath, LowFrequencyBath)):
            raise TypeError("intrinsic bath must be Ohmic or LowFrequency")
        if not isinstance(self.cavity, LorentzianCavityBath):
            raise TypeError("cavity bath must be a LorentzianCavityBath")
        if isinstance(self.intrinsic, LowFrequencyBath) \
                and self.intrinsic.omega_low >= self.delta:
            raise ValueError("omega_low must lie below the qubit splitting")

    @property
    def baths(self) -> tuple[BathSpec, BathSpec]:
        return (self.intrinsic, self.cavity)


def eval_density(bath: BathSpec, omega, delta: float | None = None):
    """Spectral density J(omega) in GHz; zero for omega < 0.

    `delta` (the qubit splitting) is required for LowFrequencyBath,
    whose density carries the splitting as its overall frequency scale.
    Accepts scalars or arrays.
    """
    om = np.asarray(omega, dtype=float)
    out = np.zeros_like(om)
    mask = om >= 0
    w = om[mask]
    if isinstance(bath, OhmicBath):
        out[mask] = 2.0 * bath.alpha * w / (1.0 + (w / bath.omega_c) ** 2)
    elif isinstance(bath, LowFrequencyBath):
        if delta is None:
            raise ValueError("LowFrequencyBath density needs the qubit splitting")
        out[mask] = 2.0 * bath.alpha * w * delta**2 / (w**2 + bath.omega_low**2)
    elif isinstance(bath, LorentzianCavityBath):
        out[mask] = (bath.g**2 * bath.linewidth / np.pi
                     / ((w - bath.omega_cav) ** 2 + bath.linewidth**2))
    else:
        raise TypeError(f"unknown bath kind: {type(bath).__name__}")
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return float(out)
    return out


def quality_factor(bath: LorentzianCavityBath) -> float:
    """omega_cav / linewidth for a cavity bath."""
    if not isinstance(bath, LorentzianCavityBath):
        raise TypeError("quality factor is defined for the cavity bath only")
    return bath.omega_cav / bath.linewidth


def _characteristic_span(bath: BathSpec, delta: float) -> float:
    # generous window that holds the bulk of 2J/(w+delta)^2
    if isinstance(bath, OhmicBath):
        return 10.0 * max(bath.omega_c, delta)
    if isinstance(bath, LowFrequencyBath):
        return 10.0 * max(delta, bath.omega_low)
    return max(2.0 * bath.omega_cav, bath.omega_cav + 40.0 * bath.linewidth) + delta


def integrable_cutoff(bath: BathSpec, tail_tolerance: float, delta: float) -> float:
    """Upper limit Omega such that the weight of 2J/(w+delta)^2 beyond
    Omega stays below tail_tolerance times the weight inside [0, Omega].

    The tail bound comes from the analytic large-w form of each density
    (1/w^3 integrand for Ohmic and low-frequency, 1/w^4 for the
    Lorentzian); the head is integrated numerically once on a coarse
    feature-aware panel set.
    """
    if not 0 < tail_tolerance < 1:
        raise ValueError("tail_tolerance must lie in (0, 1)")
    base = _characteristic_span(bath, delta)
    rule = panel_rule(panel_breakpoints(bath, base, delta))
    j = eval_density(bath, rule.nodes, delta)
    head = rule.integrate(2.0 * j / (rule.nodes + delta) ** 2)
    if head <= 0.0:
        return base
    budget = tail_tolerance * head
    if isinstance(bath, OhmicBath):
        tail_cut = np.sqrt(2.0 * bath.alpha * bath.omega_c**2 / budget)
    elif isinstance(bath, LowFrequencyBath):
        tail_cut = np.sqrt(2.0 * bath.alpha * delta**2 / budget)
    else:
        tail_cut = np.cbrt(2.0 * bath.g**2 * bath.linewidth / (3.0 * np.pi * budget))
    return float(max(base, tail_cut))


def panel_breakpoints(bath: BathSpec, cutoff: float,
                      delta: float | None = None) -> np.ndarray:
    """Panel boundaries on [0, cutoff] tracking the density's features.

    Panels grow geometrically away from the structured region so that a
    fixed-order Gauss rule per panel resolves the narrow Lorentzian line
    (width `linewidth`) as well as the smooth algebraic densities.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    if isinstance(bath, OhmicBath):
        scale = min(bath.omega_c, cutoff) / 8.0
        return geometric_ladder(0.0, cutoff, scale, ratio=1.5)
    if isinstance(bath, LowFrequencyBath):
        scale = min(bath.omega_low, cutoff) / 8.0
        return geometric_ladder(0.0, cutoff, scale, ratio=1.5)
    lam = bath.linewidth
    lo = max(bath.omega_cav - 20.0 * lam, 0.0)
    hi = bath.omega_cav + 20.0 * lam
    if cutoff <= hi:
        raise ValueError("cutoff must clear the cavity line")
    cluster = np.linspace(lo, hi, 81)  # panels of width lambda/2
    right = geometric_ladder(hi, cutoff, 2.0 * lam, ratio=1.4)
    pieces = [cluster, right[1:]]
    if lo > 0.0:
        # descend from the cluster edge to zero with growing panels
        down = geometric_ladder(0.0, lo, 2.0 * lam, ratio=1.4)
        # ladder built from the far side: mirror distances about [0, lo]
        left = lo - down[::-1]
        pieces.insert(0, left[:-1])
    return np.concatenate(pieces)
