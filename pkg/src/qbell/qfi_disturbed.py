"""QFI and output energy under exp{-i(phi G_A + eta Q_A)}, Q = a + a^dag.

For pure states the QFI is four times the variance of the average generator

    Gbar = G + (eta/phi^2)(phi Q + 2 eta)(1 - sin(phi)/phi)
             + (eta/phi^2) P (cos(phi) - 1),       P = -i(a - a^dag).

Expanding 1 - sin(phi)/phi = phi^2/6 + O(phi^4) and cos(phi) - 1 =
-phi^2/2 + O(phi^4) gives the small-phase limit

    Gbar -> G - (eta/2) P + eta^2/3,

whose moments are evaluated exactly with the ladder engine.  The Q term is
O(phi), so for a generic probe the finite-phi QFI approaches the limit
linearly in phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ladder, states
from .errors import OutOfRange
from .qfi_ideal import QfiReport
from .states import ComponentParams, ProbeParams

# truncation tail for the finite-phi oracle; at 1e-10 the P edge terms leave
# a ~1e-7 floor that swamps the phi -> 0 approach
FINITE_PHI_TAIL = 1e-12


@dataclass(frozen=True)
class DisturbanceParams:
    """phi = 0 stands for the small-phase limit, never a literal 0/0."""

    phi: float
    eta: float

    def __post_init__(self):
        if not (self.eta >= 0.0 and math.isfinite(self.eta)):
            raise OutOfRange(f"eta must be finite and >= 0, got {self.eta}")
        if not math.isfinite(self.phi):
            raise OutOfRange(f"phi must be finite, got {self.phi}")


@dataclass(frozen=True)
class OutputEnergyReport:
    n_out_A: float
    gamma3: float


def generator_coefficients(phi: float, eta: float) -> tuple[float, float, float]:
    """Coefficients (c_Q, c_P, c_0) with Gbar = G + c_Q Q + c_P P + c_0.

    Small |phi| uses Taylor series so the phi -> 0 cancellations stay exact.
    """
    if phi == 0.0:
        return 0.0, -0.5 * eta, eta**2 / 3.0
    x2 = phi * phi
    if abs(phi) < 0.1:
        # (1 - sin(phi)/phi) / phi^2 and (cos(phi) - 1) / phi^2
        s = 1 / 6 - x2 / 120 + x2**2 / 5040 - x2**3 / 362880 + x2**4 / 39916800
        c = -0.5 + x2 / 24 - x2**2 / 720 + x2**3 / 40320 - x2**4 / 3628800
    else:
        s = (1.0 - math.sin(phi) / phi) / x2
        c = -2.0 * math.sin(0.5 * phi) ** 2 / x2
    return eta * phi * s, eta * c, 2.0 * eta**2 * s


def generator_operator(phi: float, eta: float) -> ladder.Operator:
    cq, cp, c0 = generator_coefficients(phi, eta)
    return ladder.add(
        ladder.NUMBER,
        ladder.scale(ladder.Q, cq),
        ladder.scale(ladder.P, cp),
        ladder.scale(ladder.IDENTITY, c0),
    )


def disturbed_moments_arr(alpha, r, theta, l, eta, phi=0.0):
    """(<Gbar>, <Gbar^2>) on |Psi_l>, exact; nan on degenerate probes."""
    gen = generator_operator(phi, eta)
    kap = states.kappa(alpha, r, theta)
    den = states.probe_denominator(alpha, r, theta, l)
    with np.errstate(divide="ignore", invalid="ignore"):
        norm_sq = np.where(den > states.DEGENERACY_FLOOR, 1.0 / den, np.nan)
    mean, second = ladder.probe_moments(gen, alpha, r, theta, l, kap, norm_sq)
    return mean.real, second.real


def qfi_disturbed_phi0_arr(alpha, r, theta, l, eta):
    mean, second = disturbed_moments_arr(alpha, r, theta, l, eta)
    return 4.0 * (second - mean**2)


def effective_generator_moments_phi0(p: ProbeParams, eta: float) -> tuple[float, float]:
    """Mean and second moment of G - (eta/2) P + eta^2/3 on the probe."""
    if eta < 0.0:
        raise OutOfRange(f"eta must be >= 0, got {eta}")
    states.normalization(p)  # raises DegenerateProbe
    c = p.component
    mean, second = disturbed_moments_arr(c.alpha, c.r, c.theta, p.l, eta)
    return float(mean), float(second)


def qfi_disturbed_phi0(p: ProbeParams, eta: float) -> QfiReport:
    mean, second = effective_generator_moments_phi0(p, eta)
    n_in = states.input_photon_number(p).n_in_A
    H = 4.0 * (second - mean * mean)
    return QfiReport(H=max(H, 0.0), n_in_A=n_in, mean=mean, second_moment=second)


def qfi_disturbed_finite_phi(
    p: ProbeParams, d: DisturbanceParams, dim: int | None = None, tail_tol: float | None = None
) -> QfiReport:
    """Finite-phi QFI as 4 Var(Gbar) in the truncated Fock space."""
    from . import fock

    if d.phi == 0.0:
        raise OutOfRange("finite-phi evaluation needs phi != 0; use qfi_disturbed_phi0")
    state = fock.build_probe(p, dim, tail_tol=FINITE_PHI_TAIL if tail_tol is None else tail_tol)
    ws = fock.workspace(state.dim)
    gen = ws.average_generator(d.phi, d.eta)
    mean, second = fock.generator_moments(state, gen)
    n_in = states.input_photon_number(p).n_in_A
    H = 4.0 * (second - mean * mean)
    return QfiReport(H=max(H, 0.0), n_in_A=n_in, mean=mean, second_moment=second)


def gamma3_arr(alpha, r, theta, eta):
    """2 Re <-alpha, xi| U^dag n U |alpha, xi> in the phi -> 0 limit."""
    kap = states.kappa(alpha, r, theta)
    return 2.0 * kap * (
        eta**2
        + np.sinh(r) ** 2
        - alpha**2 * (np.sinh(4 * r) * np.cos(theta) + np.cosh(4 * r))
    )


def gamma3(c: ComponentParams, eta: float) -> float:
    return float(gamma3_arr(c.alpha, c.r, c.theta, eta))


def n_out_arr(alpha, r, theta, l, eta):
    kap = states.kappa(alpha, r, theta)
    den = states.probe_denominator(alpha, r, theta, l)
    num = (alpha**2 + np.sinh(r) ** 2 + eta**2) * (1.0 + l**2) + l * kap * gamma3_arr(
        alpha, r, theta, eta
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > states.DEGENERACY_FLOOR, num / den, np.nan)


def output_photon_number_phi0(p: ProbeParams, eta: float) -> OutputEnergyReport:
    if eta < 0.0:
        raise OutOfRange(f"eta must be >= 0, got {eta}")
    ns = states.normalization(p) ** 2
    c = p.component
    g3 = gamma3(c, eta)
    n0 = c.alpha**2 + math.sinh(c.r) ** 2
    value = ns * ((n0 + eta**2) * (1.0 + p.l**2) + p.l * states.overlap_kappa(c) * g3)
    return OutputEnergyReport(n_out_A=max(value, 0.0), gamma3=g3)
