"""Entanglement of |Psi_l> from its two nonorthogonal branches.

With real branch overlap kappa on each mode, the concurrence is

    C = 2|l| (1 - kappa^2) / (1 + l^2 + 2 l kappa^2)

and the entropy of entanglement (base 2) is the binary entropy of the larger
Schmidt weight (1 + sqrt(1 - C^2)) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import states
from .states import ProbeParams


@dataclass(frozen=True)
class EntanglementResult:
    C: float
    E: float
    kappa: float


def concurrence_arr(alpha, r, theta, l):
    one_minus = states.one_minus_kappa_sq(alpha, r, theta)
    den = states.probe_denominator(alpha, r, theta, l)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(den > states.DEGENERACY_FLOOR, 2.0 * np.abs(l) * one_minus / den, np.nan)
    return np.minimum(c, 1.0)


def entropy_from_concurrence(c):
    """Binary entropy of the Schmidt weights, accurate at both ends."""
    c = np.asarray(c, dtype=float)
    s = np.sqrt((1.0 - c) * (1.0 + c))
    p_small = c * c / (2.0 * (1.0 + s))
    p_large = 1.0 - p_small
    with np.errstate(divide="ignore", invalid="ignore"):
        e = -(p_small * np.log2(p_small) + p_large * np.log2(p_large))
    return np.where(p_small > 0.0, e, 0.0)


def entropy_arr(alpha, r, theta, l):
    return entropy_from_concurrence(concurrence_arr(alpha, r, theta, l))


def concurrence(p: ProbeParams) -> float:
    states.normalization(p)  # raises DegenerateProbe
    c = p.component
    return float(concurrence_arr(c.alpha, c.r, c.theta, p.l))


def entanglement_entropy(p: ProbeParams) -> EntanglementResult:
    C = concurrence(p)
    return EntanglementResult(C=C, E=float(entropy_from_concurrence(C)), kappa=p.kappa)
