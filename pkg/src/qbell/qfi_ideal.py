"""QFI of |Psi_l> under the ideal phase rotation exp(-i phi a_A^dag a_A)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import states
from .states import ComponentParams, ProbeParams


@dataclass(frozen=True)
class QfiReport:
    H: float
    n_in_A: float
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    # generator moments, filled in by the disturbed evaluations
    mean: Optional[float] = None
    second_moment: Optional[float] = None


def gamma1_arr(alpha, r, theta):
    """<alpha, xi| (a^dag a)^2 |alpha, xi>; identical for -alpha."""
    return (
        alpha**4
        - alpha**2 * (1.0 + np.sinh(2 * r) * np.cos(theta))
        + 0.5 * (4.0 * alpha**2 - 1.0) * np.cosh(2 * r)
        + 0.375 * np.cosh(4 * r)
        + 0.125
    )


def gamma2_arr(alpha, r, theta):
    """2 Re <-alpha, xi| (a^dag a)^2 |alpha, xi>, including its kappa factor."""
    a2 = alpha**2
    c, s = np.cosh, np.sinh
    ct = np.cos(theta)
    bracket = (
        2.0 * a2 * (
            a2 * (1.0 + 2.0 * s(4 * r) ** 2 * np.cos(2 * theta) + 3.0 * c(8 * r))
            - 2.0 * (s(2 * r) + 3.0 * s(6 * r)) * ct
            - 6.0 * c(6 * r)
        )
        + 4.0 * c(2 * r) * (4.0 * a2 * (2.0 * a2 * c(4 * r) + 1.0) * s(2 * r) * ct - a2 - 1.0)
        + (8.0 * a2 + 3.0) * c(4 * r)
        + 1.0
    )
    return 0.25 * states.kappa(alpha, r, theta) * bracket


def qfi_ideal_arr(alpha, r, theta, l):
    """H = 4 {N^2 [(1 + l^2) g1 + l kappa g2] - n_in^2}; nan on degenerate probes."""
    kap = states.kappa(alpha, r, theta)
    den = states.probe_denominator(alpha, r, theta, l)
    second = ((1.0 + l**2) * gamma1_arr(alpha, r, theta) + l * kap * gamma2_arr(alpha, r, theta))
    with np.errstate(divide="ignore", invalid="ignore"):
        second = np.where(den > states.DEGENERACY_FLOOR, second / den, np.nan)
    mean = states.n_in(alpha, r, theta, l)
    return 4.0 * (second - mean**2)


def qfi_ideal_l0_arr(alpha, r, theta):
    return (
        4.0 * alpha**2 * (np.cosh(2 * r) - np.sinh(2 * r) * np.cos(theta))
        + np.cosh(4 * r)
        - 1.0
    )


def gamma1(c: ComponentParams) -> float:
    return float(gamma1_arr(c.alpha, c.r, c.theta))


def gamma2(c: ComponentParams) -> float:
    return float(gamma2_arr(c.alpha, c.r, c.theta))


def qfi_ideal(p: ProbeParams) -> QfiReport:
    c = p.component
    energy = states.input_photon_number(p)  # raises DegenerateProbe
    g1 = gamma1(c)
    g2 = gamma2(c)
    second = energy.norm_sq * ((1.0 + p.l**2) * g1 + p.l * energy.kappa * g2)
    H = 4.0 * (second - energy.n_in_A**2)
    return QfiReport(
        H=max(H, 0.0),
        n_in_A=energy.n_in_A,
        gamma1=g1,
        gamma2=g2,
        mean=energy.n_in_A,
        second_moment=second,
    )


def qfi_ideal_l0(c: ComponentParams) -> float:
    """Single-mode squeezed coherent state result; regression reference at l = 0."""
    return float(qfi_ideal_l0_arr(c.alpha, c.r, c.theta))
