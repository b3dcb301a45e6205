"""Damping rate and principal-value level shift of the dressed qubit.

Both quantities are built from the dressed per-bath densities
f_i(w) = phi_i(w)^2 * J_i(w):

    Gamma(w) = pi * sum_i f_i(w)                        (zero for w < 0)
    R(w)     = sum_i PV int_0^inf f_i(w') / (w - w') dw'

The principal value is evaluated for whole probe batches at once.
Subtracting the probe value from the numerator leaves a quotient that
is regular across the pole and integrable on the same feature-aware
Gauss panels used everywhere else; the subtracted singular piece has
the closed form

    PV int_0^W dw' / (w - w') = log(w / (W - w)),    0 < w < W,

and the remaining [W, inf) tail uses an inverse-variable rule with the
exact density.  "rwa" mode switches the dressing off (eta = 1, phi = 1)
so Gamma and R reduce to the bare golden-rule pair.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure
from .quadrature import inverse_tail_rule, panel_rule
from .renormalization import (
    BathRenormalization,
    EnvironmentRenormalization,
    TAIL_TOLERANCE,
    coupling_renorm_factor,
    solve_environment,
)
from .spectral_density import (
    BathSpec,
    Environment,
    eval_density,
    integrable_cutoff,
    panel_breakpoints,
)

__all__ = ["ResponseKernel", "gamma", "real_shift"]

_MODES = ("full", "rwa")
_CHUNK = 2048  # probes per matvec block


class _BathTabulation:
    """Quadrature nodes and dressed-density samples for one bath."""

    def __init__(self, bath: BathSpec, eta: float, delta: float,
                 dressed: bool) -> None:
        self.bath = bath
        self.eta = eta
        self.delta = delta
        self.dressed = dressed
        self.cutoff = integrable_cutoff(bath, TAIL_TOLERANCE, delta)
        body = panel_rule(panel_breakpoints(bath, self.cutoff, delta))
        tail = inverse_tail_rule(self.cutoff)
        self.body_nodes = body.nodes
        self.body_weights = body.weights
        self.tail_nodes = tail.nodes
        self.tail_weights = tail.weights
        self.f_body = self.density(body.nodes)
        self.f_tail = self.density(tail.nodes)

    def density(self, omega: np.ndarray) -> np.ndarray:
        """f(w) = phi^2 J (or bare J in rwa mode), zero for w < 0."""
        f = eval_density(self.bath, omega, self.delta)
        if self.dressed:
            mask = omega >= 0
            phi = coupling_renorm_factor(omega[mask], self.eta, self.delta)
            f[mask] *= phi**2
        return f


class ResponseKernel:
    """Precomputed machinery for gamma() and real_shift() on one
    environment.

    Building the kernel solves the dressing equations (unless a solved
    EnvironmentRenormalization is passed in) and tabulates the dressed
    density of each bath on its panels, so repeated probe batches cost
    only matrix-vector products.
    """

    def __init__(self, env: Environment,
                 dressing: EnvironmentRenormalization | None = None,
                 mode: str = "full") -> None:
        if mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        self.env = env
        self.mode = mode
        if mode == "rwa":
            unit = BathRenormalization(eta=1.0, iterations=0, residual=0.0)
            self.dressing = EnvironmentRenormalization(intrinsic=unit,
                                                       cavity=unit)
        else:
            self.dressing = dressing if dressing is not None \
                else solve_environment(env)
        dressed = mode == "full"
        self.tabulations = (
            _BathTabulation(env.intrinsic, self.dressing.intrinsic.eta,
                            env.delta, dressed),
            _BathTabulation(env.cavity, self.dressing.cavity.eta,
                            env.delta, dressed),
        )

    @property
    def eta(self) -> float:
        return self.dressing.eta

    @property
    def dressed_splitting(self) -> float:
        return self.dressing.eta * self.env.delta


def gamma(kernel: ResponseKernel, omega):
    """Total damping rate Gamma(omega) in GHz, zero below zero frequency."""
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros_like(om)
    for tab in kernel.tabulations:
        out += np.pi * tab.density(om)
    if np.ndim(omega) == 0:
        return float(out[0])
    return out


def real_shift(kernel: ResponseKernel, omega):
    """Principal-value level shift R(omega) in GHz.

    Probes may lie anywhere below each bath's support cutoff, including
    at or below zero where the density vanishes and the integral is an
    ordinary one.
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros_like(om)
    for tab in kernel.tabulations:
        if np.max(om) >= tab.cutoff * (1.0 - 1e-9):
            raise NumericalFailure(
                "shift probe beyond the bath support cutoff")
        out += _pv_transform(tab, om)
    if np.ndim(omega) == 0:
        return float(out[0])
    return out


def _pv_transform(tab: _BathTabulation, probes: np.ndarray) -> np.ndarray:
    f_probe = tab.density(probes)
    inside = (probes > 0.0) & (probes < tab.cutoff)
    log_term = np.where(
        inside,
        np.log(np.where(inside, probes / (tab.cutoff - probes), 1.0)),
        0.0)
    out = np.empty_like(probes)
    for start in range(0, probes.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        p = probes[sl, None]
        d = p - tab.body_nodes[None, :]
        # exact probe-node collision: numerator is exactly zero there
        d = np.where(d == 0.0, 1.0, d)
        body = np.sum(tab.body_weights * (tab.f_body - f_probe[sl, None]) / d,
                      axis=1)
        tail = np.sum(tab.tail_weights * tab.f_tail
                      / (p - tab.tail_nodes[None, :]), axis=1)
        out[sl] = body + tail
    return out + f_probe * log_term
