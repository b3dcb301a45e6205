"""Deterministic Gauss-Legendre panel quadrature.

Fixed node sets (no adaptive subdivision) so that repeated runs are
bit-for-bit reproducible.  Panels are laid out by the callers to follow
the features of the integrand; the helpers here only map reference
Gauss-Legendre rules onto panels and onto an inverted-variable tail.

All frequencies are angular frequencies in GHz (hbar = 1, time in ns).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class PanelRule:
    """Quadrature nodes and weights for sum(w * f(x)) ~ integral of f."""

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=None)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_rule(breakpoints: np.ndarray, order: int = 16) -> PanelRule:
    """Composite Gauss-Legendre rule over consecutive [b_i, b_i+1] panels.

    `breakpoints` must be strictly increasing with at least two entries.
    """
    b = np.asarray(breakpoints, dtype=float)
    if b.ndim != 1 or b.size < 2:
        raise ValueError("need at least two breakpoints")
    if np.any(np.diff(b) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    x, w = _reference_rule(order)
    lo = b[:-1][:, None]
    hi = b[1:][:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return PanelRule(nodes, weights)


def inverse_tail_rule(cutoff: float, order: int = 32) -> PanelRule:
    """Rule for integral over (cutoff, infinity) via the u = 1/omega map.

    Nodes are returned in the original variable; weights absorb the
    1/u^2 Jacobian, so sum(w * f(x)) ~ integral_cutoff^inf f.  The
    integrand must fall off faster than 1/omega for this to converge.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    u, w = _reference_rule(order)
    half = 0.5 / cutoff
    u_nodes = half + half * u
    nodes = 1.0 / u_nodes
    weights = (half * w) / u_nodes**2
    return PanelRule(nodes, weights)


def geometric_ladder(start: float, stop: float, first_width: float,
                     ratio: float = 1.4) -> np.ndarray:
    """Ascending breakpoints from start to stop with geometrically
    growing panel widths.  The last panel is stretched to end exactly
    at stop."""
    if stop <= start:
        raise ValueError("stop must exceed start")
    if first_width <= 0 or ratio <= 1:
        raise ValueError("need first_width > 0 and ratio > 1")
    points = [start]
    width = first_width
    while points[-1] + width < stop:
        points.append(points[-1] + width)
        width *= ratio
    # merge a short final panel into its neighbour instead of keeping a sliver
    if len(points) > 1 and (stop - points[-1]) < 0.2 * (points[-1] - points[-2]):
        points[-1] = stop
    else:
        points.append(stop)
    return np.array(points)
