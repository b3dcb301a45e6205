"""Self-consistent dressing of the qubit splitting by its baths.

Each bath drags the bare splitting down by a factor eta solving

    log(eta) + integral_0^inf  2 J(w) / (w + eta*delta)^2  dw  =  0,

found here by a damped fixed-point iteration eta <- exp(-I(eta)).  The
same factor enters the frequency-dependent coupling weight

    phi(w) = 2*eta*delta / (w + eta*delta),

which tilts every downstream rate integral toward low frequencies.
With several independent baths the factors multiply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure
from .quadrature import inverse_tail_rule, panel_rule
from .spectral_density import (
    BathSpec,
    Environment,
    eval_density,
    integrable_cutoff,
    panel_breakpoints,
)

__all__ = [
    "BathRenormalization",
    "EnvironmentRenormalization",
    "coupling_renorm_factor",
    "solve_eta",
    "solve_environment",
]

#: relative weight allowed beyond the numerical frequency cutoff
TAIL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class BathRenormalization:
    """Converged dressing factor for a single bath."""

    eta: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class EnvironmentRenormalization:
    """Per-bath factors plus their product for the full environment."""

    intrinsic: BathRenormalization
    cavity: BathRenormalization

    @property
    def eta(self) -> float:
        return self.intrinsic.eta * self.cavity.eta


def coupling_renorm_factor(omega, eta: float, delta: float):
    """phi(omega) = 2*eta*delta / (omega + eta*delta).

    Equals one at omega = eta*delta, approaches two toward zero
    frequency and falls off as 1/omega far above the dressed splitting.
    Vectorized over omega; only meaningful for omega >= 0.
    """
    if eta <= 0 or delta <= 0:
        raise ValueError("eta and delta must be positive")
    return 2.0 * eta * delta / (np.asarray(omega, dtype=float) + eta * delta)


def solve_eta(bath: BathSpec, delta: float, *,
              tol: float = 1e-12, max_iter: int = 200) -> BathRenormalization:
    """Solve the single-bath dressing equation.

    Returns eta together with the iteration count and the residual
    |log(eta) + I(eta)| of the converged value.  A decoupled bath
    returns eta = 1 exactly without iterating.

    Raises NumericalFailure when the very first iterate drops below
    0.5: past that point the fixed-point map is no longer a reliable
    route to the physical root and the weak-dressing treatment has left
    its regime anyway.
    """
    cutoff = integrable_cutoff(bath, TAIL_TOLERANCE, delta)
    body = panel_rule(panel_breakpoints(bath, cutoff, delta))
    tail = inverse_tail_rule(cutoff)
    nodes = np.concatenate([body.nodes, tail.nodes])
    weights = np.concatenate([body.weights, tail.weights])
    j = eval_density(bath, nodes, delta)
    if not np.any(j > 0.0):
        return BathRenormalization(eta=1.0, iterations=0, residual=0.0)

    def integral(eta: float) -> float:
        return float(np.sum(weights * 2.0 * j / (nodes + eta * delta) ** 2))

    eta = 1.0
    prev_step = 0.0
    for it in range(1, max_iter + 1):
        proposal = float(np.exp(-integral(eta)))
        if it == 1 and proposal < 0.5:
            raise NumericalFailure(
                "bath dressing too strong: first iterate "
                f"{proposal:.4f} < 0.5")
        step = proposal - eta
        if prev_step * step < 0.0:
            proposal = eta + 0.5 * step  # damp the oscillation
            step = proposal - eta
        eta, prev_step = proposal, step
        if abs(step) <= tol:
            return BathRenormalization(
                eta=eta, iterations=it,
                residual=abs(np.log(eta) + integral(eta)))
    raise NumericalFailure(
        f"dressing iteration did not converge in {max_iter} steps "
        f"(last step {prev_step:.3e})")


def solve_environment(env: Environment, *,
                      tol: float = 1e-12,
                      max_iter: int = 200) -> EnvironmentRenormalization:
    """Dressing factors for both baths of an environment."""
    return EnvironmentRenormalization(
        intrinsic=solve_eta(env.intrinsic, env.delta,
                            tol=tol, max_iter=max_iter),
        cavity=solve_eta(env.cavity, env.delta,
                         tol=tol, max_iter=max_iter),
    )
