"""Squeezed coherent components and the quasi-Bell probe built from them.

The probe is

    |Psi_l> = N (|alpha, xi>_A |-alpha, xi>_B + l |-alpha, xi>_A |alpha, xi>_B)

with xi = r exp(i theta) and |alpha, xi> = D(alpha) S(xi) |0>.  Everything
here is closed form; the array helpers (``kappa``, ``n_in`` ...) broadcast
over numpy arrays so the optimizer can evaluate whole grids at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateProbe, NoRoot, OutOfRange

TWO_PI = 2.0 * math.pi
R_MAX = 20.0
# 1 + l(l + 2 kappa^2) at or below this is treated as a vanishing state
DEGENERACY_FLOOR = 1e-12
N0_MAX = 1e3
SCAN_POINTS = 64
BISECTION_STEPS = 200


@dataclass(frozen=True)
class ComponentParams:
    """Squeezed coherent state |alpha, r e^{i theta}> with real alpha >= 0."""

    alpha: float
    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise OutOfRange(f"alpha must be finite and >= 0, got {self.alpha}")
        if not (self.r >= 0.0):
            raise OutOfRange(f"r must be >= 0, got {self.r}")
        if self.r > R_MAX:
            raise OutOfRange(f"r = {self.r} exceeds the overflow guard {R_MAX}")
        if not math.isfinite(self.theta):
            raise OutOfRange(f"theta must be finite, got {self.theta}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)


@dataclass(frozen=True)
class ProbeParams:
    component: ComponentParams
    l: float

    def __post_init__(self):
        if not (-1.0 <= self.l <= 1.0):
            raise OutOfRange(f"l must lie in [-1, 1], got {self.l}")
        object.__setattr__(self, "l", float(self.l))

    @classmethod
    def make(cls, alpha: float, r: float, theta: float, l: float) -> "ProbeParams":
        return cls(ComponentParams(alpha, r, theta), l)

    @property
    def kappa(self) -> float:
        return overlap_kappa(self.component)

    @property
    def norm_sq(self) -> float:
        return normalization(self) ** 2

    @property
    def energy(self) -> "EnergyParams":
        return component_energy(self.component)


@dataclass(frozen=True)
class EnergyParams:
    """Component energy n0 = alpha^2 + sinh^2 r and squeezing fraction beta."""

    n0: float
    beta: float
    # set by invert_energy when the energy map crossed the target more than once
    multiple_roots: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class EnergyReport:
    n_in_A: float
    gamma: float
    kappa: float
    norm_sq: float


# -- array-level closed forms -------------------------------------------------


def kappa_exponent(alpha, r, theta):
    """-log kappa = 2 alpha^2 (cosh 2r + sinh 2r cos theta)."""
    return 2.0 * alpha**2 * (np.cosh(2 * r) + np.sinh(2 * r) * np.cos(theta))


def kappa(alpha, r, theta):
    """Overlap <alpha, xi | -alpha, xi>."""
    return np.exp(-kappa_exponent(alpha, r, theta))


def one_minus_kappa_sq(alpha, r, theta):
    return -np.expm1(-2.0 * kappa_exponent(alpha, r, theta))


def probe_denominator(alpha, r, theta, l):
    """1 / N^2 = 1 + l (l + 2 kappa^2), written as (1 + l)^2 - 2 l (1 - kappa^2).

    The second form keeps full relative accuracy near l = -1, alpha -> 0,
    where the state vanishes.
    """
    return (1.0 + l) ** 2 - 2.0 * l * one_minus_kappa_sq(alpha, r, theta)


def gamma_cross(alpha, r, theta):
    """2 Re <-alpha, xi| a^dag a |alpha, xi>, the kappa-bearing energy cross term."""
    kap = kappa(alpha, r, theta)
    return 2.0 * kap * (
        np.sinh(r) ** 2
        - alpha**2 * (np.sinh(4 * r) * np.cos(theta) + np.cosh(4 * r))
    )


def n_in(alpha, r, theta, l):
    """Mean photon number of mode A; nan where the probe is degenerate."""
    kap = kappa(alpha, r, theta)
    den = probe_denominator(alpha, r, theta, l)
    n0 = alpha**2 + np.sinh(r) ** 2
    num = (1.0 + l**2) * n0 + l * kap * gamma_cross(alpha, r, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > DEGENERACY_FLOOR, num / den, np.nan)


def alpha_r_from_energy(n0, beta):
    n0 = np.asarray(n0, dtype=float)
    beta = np.asarray(beta, dtype=float)
    alpha = np.sqrt(np.maximum((1.0 - beta) * n0, 0.0))
    r = np.arcsinh(np.sqrt(np.maximum(beta * n0, 0.0)))
    return alpha, r


# -- operations on the typed parameters ---------------------------------------


def overlap_kappa(c: ComponentParams) -> float:
    return float(kappa(c.alpha, c.r, c.theta))


def normalization(p: ProbeParams) -> float:
    c = p.component
    den = float(probe_denominator(c.alpha, c.r, c.theta, p.l))
    if den <= DEGENERACY_FLOOR:
        raise DegenerateProbe(
            f"1 + l(l + 2 kappa^2) = {den:.3e} for l = {p.l}, alpha = {p.component.alpha}"
        )
    return 1.0 / math.sqrt(den)


def component_energy(c: ComponentParams) -> EnergyParams:
    squeeze = math.sinh(c.r) ** 2
    n0 = c.alpha**2 + squeeze
    beta = squeeze / n0 if n0 > 0.0 else 0.0
    return EnergyParams(n0=n0, beta=beta)


def from_energy(e: EnergyParams, theta: float) -> ComponentParams:
    if e.n0 < 0.0 or not (0.0 <= e.beta <= 1.0):
        raise OutOfRange(f"need n0 >= 0 and beta in [0, 1], got {e}")
    alpha, r = alpha_r_from_energy(e.n0, e.beta)
    return ComponentParams(float(alpha), float(r), theta)


def input_photon_number(p: ProbeParams) -> EnergyReport:
    c = p.component
    norm = normalization(p)
    kap = overlap_kappa(c)
    gam = float(gamma_cross(c.alpha, c.r, c.theta))
    n0 = c.alpha**2 + math.sinh(c.r) ** 2
    ns = norm * norm
    value = ns * ((1.0 + p.l**2) * n0 + p.l * kap * gam)
    return EnergyReport(n_in_A=max(value, 0.0), gamma=gam, kappa=kap, norm_sq=ns)


# -- numerical inversion n_in -> n0 -------------------------------------------


def _n_in_from_energy(n0, beta, theta, l):
    alpha, r = alpha_r_from_energy(n0, beta)
    return n_in(alpha, r, theta, l)


def invert_energy_grid(n_in_target, beta, theta, l, n0_max=N0_MAX):
    """Vectorised inversion of the input energy over arrays of (beta, theta).

    Returns ``(n0, multiple)``: n0 is nan where no root exists in
    (0, n0_max]; ``multiple`` flags points whose 64-point scan saw more than
    one crossing (the smallest root is returned there).
    """
    beta, theta = np.broadcast_arrays(
        np.asarray(beta, dtype=float), np.asarray(theta, dtype=float)
    )
    shape = beta.shape
    beta = beta.ravel()
    theta = theta.ravel()
    if l == 0.0:
        n0 = np.full(beta.shape, float(n_in_target))
        return n0.reshape(shape), np.zeros(shape, dtype=bool)

    # grow the bracket until the energy overshoots the target
    hi = np.full(beta.shape, 2.0 * n_in_target)
    while True:
        f_hi = _n_in_from_energy(hi, beta, theta, l) - n_in_target
        grow = ~(f_hi > 0) & (hi < n0_max)
        if not grow.any():
            break
        hi = np.where(grow, np.minimum(2.0 * hi, n0_max), hi)

    k = np.arange(SCAN_POINTS + 1) / SCAN_POINTS
    nodes = hi[:, None] * k[None, :]
    f = _n_in_from_energy(nodes, beta[:, None], theta[:, None], l) - n_in_target
    sign = np.sign(f)
    valid = np.isfinite(f)
    pair_ok = valid[:, :-1] & valid[:, 1:]
    crossing = pair_ok & (sign[:, :-1] * sign[:, 1:] <= 0) & (sign[:, :-1] != 0)
    n_cross = crossing.sum(axis=1)
    found = n_cross > 0
    first = np.argmax(crossing, axis=1)

    rows = np.arange(beta.size)
    lo = nodes[rows, first]
    up = nodes[rows, first + 1]
    f_lo = f[rows, first]
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + up)
        if np.all((mid == lo) | (mid == up) | ~found):
            break
        f_mid = _n_in_from_energy(mid, beta, theta, l) - n_in_target
        same = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, f_mid, f_lo)
        up = np.where(same, up, mid)
    f_up = _n_in_from_energy(up, beta, theta, l) - n_in_target
    n0 = np.where(np.abs(f_up) < np.abs(f_lo), up, lo)
    n0 = np.where(found, n0, np.nan)
    return n0.reshape(shape), (n_cross > 1).reshape(shape)


def _scan(n_in_target, beta, theta, l, n0_max):
    """Bracket the smallest root of n_in(n0) - target for one (beta, theta)."""
    def f(n0):
        return _n_in_from_energy(n0, beta, theta, l) - n_in_target

    hi = 2.0 * n_in_target
    while not (f(hi) > 0) and hi < n0_max:
        hi = min(2.0 * hi, n0_max)
    nodes = hi * np.arange(SCAN_POINTS + 1) / SCAN_POINTS
    vals = f(nodes)
    sign = np.sign(vals)
    ok = np.isfinite(vals[:-1]) & np.isfinite(vals[1:])
    crossing = ok & (sign[:-1] * sign[1:] <= 0) & (sign[:-1] != 0)
    idx = np.flatnonzero(crossing)
    if idx.size == 0:
        return None
    k = idx[0]
    return nodes[k], nodes[k + 1], idx.size > 1, f


def solve_energy(n_in_target, beta, theta, l, n0_max=N0_MAX):
    """Scalar inversion: returns (n0, multiple_roots) or (nan, False)."""
    if l == 0.0:
        return float(n_in_target), False
    found = _scan(n_in_target, beta, theta, l, n0_max)
    if found is None:
        return math.nan, False
    lo, hi, multiple, f = found
    if f(hi) == 0.0:
        return float(hi), multiple
    root = brentq(lambda x: float(f(x)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(root), multiple


def invert_energy(
    n_in_target: float, beta: float, theta: float, l: float, n0_max: float = N0_MAX
) -> EnergyParams:
    """Find the component energy n0 giving mode A the target photon number."""
    if not n_in_target > 0.0:
        raise OutOfRange(f"target energy must be > 0, got {n_in_target}")
    if not (0.0 <= beta <= 1.0):
        raise OutOfRange(f"beta must lie in [0, 1], got {beta}")
    n0, multiple = solve_energy(n_in_target, beta, theta, l, n0_max)
    if math.isnan(n0):
        raise NoRoot(
            f"no n0 in (0, {n0_max}] gives n_in = {n_in_target} "
            f"(beta = {beta}, theta = {theta}, l = {l})"
        )
    return EnergyParams(n0=n0, beta=float(beta), multiple_roots=bool(multiple))


def probe_from_energy(n0: float, beta: float, theta: float, l: float) -> ProbeParams:
    return ProbeParams(from_energy(EnergyParams(n0, beta), theta), l)
