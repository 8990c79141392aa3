"""Brute-force truncated Fock-space oracle.

States are built by exponentiating the displacement and squeeze generators on
dense matrices (scipy's scaling-and-squaring Pade expm) and applying them to
the vacuum, with the ordering |alpha, xi> = D(alpha) S(xi) |0>.  Nothing here
uses the closed forms it is meant to check.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateProbe, TruncationNotConverged
from .states import ComponentParams, ProbeParams

DEFAULT_DIM = 64
DIM_MAX = 256
TAIL_TOL = 1e-10
TAIL_FRACTION = 0.1


class FockWorkspace:
    """Single-mode ladder operators truncated to ``dim`` levels."""

    def __init__(self, dim: int):
        if dim < 8:
            raise ValueError(f"dim must be >= 8, got {dim}")
        self.dim = dim
        a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
        self.a = a
        self.ad = a.conj().T
        self.number = np.diag(np.arange(dim, dtype=float)).astype(complex)
        self.Q = a + self.ad
        self.P = -1j * (a - self.ad)
        self.identity = np.eye(dim, dtype=complex)
        for m in (self.a, self.ad, self.number, self.Q, self.P):
            m.setflags(write=False)

    def vacuum(self):
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def displace(self, beta: complex):
        return expm(beta * self.ad - np.conj(beta) * self.a)

    def squeeze(self, r: float, theta: float):
        xi = r * np.exp(1j * theta)
        return expm(0.5 * (np.conj(xi) * self.a @ self.a - xi * self.ad @ self.ad))

    def average_generator(self, phi: float, eta: float):
        """Gbar(phi, eta) as a dim x dim matrix."""
        from .qfi_disturbed import generator_coefficients

        cq, cp, c0 = generator_coefficients(phi, eta)
        return self.number + cq * self.Q + cp * self.P + c0 * self.identity

    def evolution(self, phi: float, eta: float):
        return expm(-1j * (phi * self.number + eta * self.Q))


@functools.lru_cache(maxsize=8)
def workspace(dim: int) -> FockWorkspace:
    return FockWorkspace(dim)


def tail_of_distribution(prob) -> float:
    """Probability in the top 10% of levels."""
    dim = prob.shape[-1]
    cut = dim - max(1, int(math.ceil(TAIL_FRACTION * dim)))
    return float(np.sum(prob[cut:]))


def tail_mass_1d(v) -> float:
    return tail_of_distribution(np.abs(v) ** 2)


@dataclass(frozen=True)
class TwoModeState:
    """Normalised two-mode amplitudes, mode-A-major (index m_A * dim + m_B)."""

    amplitudes: np.ndarray
    dim: int
    tail_mass: float
    raw_norm_sq: float

    @property
    def matrix(self):
        return self.amplitudes.reshape(self.dim, self.dim)


def _component_vector(alpha: float, r: float, theta: float, ws: FockWorkspace):
    return ws.displace(alpha) @ (ws.squeeze(r, theta) @ ws.vacuum())


def _dims(dim):
    if dim is not None:
        return [dim]
    out, d = [], DEFAULT_DIM
    while d <= DIM_MAX:
        out.append(d)
        d *= 2
    return out


def build_component(
    c: ComponentParams, dim: int | None = None, sign: int = 1, tail_tol: float = TAIL_TOL
):
    """State vector of |sign*alpha, xi>; escalates dim up to 256 if needed."""
    for d in _dims(dim):
        v = _component_vector(sign * c.alpha, c.r, c.theta, workspace(d))
        if tail_mass_1d(v) < tail_tol:
            return v
    raise TruncationNotConverged(
        f"tail mass {tail_mass_1d(v):.2e} at dim {d} for {c}"
    )


def build_probe(
    p: ProbeParams, dim: int | None = None, tail_tol: float = TAIL_TOL
) -> TwoModeState:
    """Normalised |Psi_l>; with ``dim=None`` escalates 64 -> 128 -> 256."""
    c = p.component
    last = None
    for d in _dims(dim):
        ws = workspace(d)
        plus = _component_vector(c.alpha, c.r, c.theta, ws)
        minus = _component_vector(-c.alpha, c.r, c.theta, ws)
        psi = np.kron(plus, minus) + p.l * np.kron(minus, plus)
        raw = float(np.vdot(psi, psi).real)
        if raw <= 1e-12:
            raise DegenerateProbe(f"probe norm^2 = {raw:.3e} for {p}")
        psi = psi / math.sqrt(raw)
        m = psi.reshape(d, d)
        prob = np.abs(m) ** 2
        tail = max(tail_of_distribution(prob.sum(axis=1)), tail_of_distribution(prob.sum(axis=0)))
        last = TwoModeState(psi, d, tail, raw)
        if tail < tail_tol:
            return last
    raise TruncationNotConverged(f"tail mass {last.tail_mass:.2e} at dim {last.dim} for {p}")


def _check_hermitian(op, tol=1e-12):
    if np.max(np.abs(op - op.conj().T)) > tol:
        raise ValueError("generator is not Hermitian")


def generator_moments(state: TwoModeState, op) -> tuple[float, float]:
    """(<op>, <op^2>) for a Hermitian mode-A operator."""
    _check_hermitian(op)
    m = state.matrix
    gm = op @ m
    mean = float(np.vdot(m, gm).real)
    second = float(np.vdot(gm, gm).real)
    return mean, second


def expectation(state: TwoModeState, op) -> complex:
    m = state.matrix
    return complex(np.vdot(m, op @ m))


def oracle_qfi(state: TwoModeState, generator) -> float:
    mean, second = generator_moments(state, generator)
    return 4.0 * (second - mean * mean)


def reduced_state(state: TwoModeState):
    m = state.matrix
    return m @ m.conj().T


def oracle_entropy(state: TwoModeState) -> float:
    """Base-2 von Neumann entropy of the mode-A reduced state."""
    # squared singular values are the Schmidt weights, eigenvalues of rho_A
    w = np.linalg.svd(state.matrix, compute_uv=False) ** 2
    w = w[w > 1e-300]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def oracle_cross_element(
    c: ComponentParams, op, dim: int | None = None, tail_tol: float = TAIL_TOL
) -> complex:
    """<-alpha, xi| op |alpha, xi> evaluated numerically."""
    plus = build_component(c, dim, tail_tol=tail_tol)
    minus = build_component(c, plus.shape[0], sign=-1, tail_tol=tail_tol)
    return complex(np.vdot(minus, op_for_dim(op, plus.shape[0]) @ plus))


def oracle_diag_element(
    c: ComponentParams, op, dim: int | None = None, tail_tol: float = TAIL_TOL
) -> complex:
    v = build_component(c, dim, tail_tol=tail_tol)
    return complex(np.vdot(v, op_for_dim(op, v.shape[0]) @ v))


def op_for_dim(op, dim):
    """``op`` may be a matrix or a callable taking a FockWorkspace."""
    if callable(op):
        return op(workspace(dim))
    return op


def oracle_output_photon_number(state: TwoModeState, phi: float, eta: float) -> float:
    """<U^dag n_A U> with U = exp{-i(phi G + eta Q)} on mode A."""
    ws = workspace(state.dim)
    u = ws.evolution(phi, eta)
    out = u @ state.matrix
    return float(np.vdot(out, ws.number @ out).real)
