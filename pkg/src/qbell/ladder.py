"""Exact matrix elements of ladder-operator polynomials between squeezed
coherent states.

An operator is a dict mapping a word to a complex coefficient.  A word is a
string over ``"a"`` (annihilation) and ``"d"`` (creation, a-dagger), read
left to right as an operator product, so ``"da"`` is a^dag a.

For components |s alpha, xi> = D(s alpha) S(xi) |0> with s = +1 or -1,

    <s2 alpha, xi| w |s1 alpha, xi> = <0| w' D(B) |0>,

where w' is w with a -> a cosh r - e^{i theta} a^dag sinh r + s2 alpha and
B = (s1 - s2) alpha (cosh r + e^{i theta} sinh r).  <0| w' is a vector
supported on the first len(w) + 1 Fock levels, so the result is exact: a
finite sum against the coherent amplitudes of |B>.  All inputs broadcast.
"""

from __future__ import annotations

import math

import numpy as np

Operator = dict  # word -> complex coefficient

IDENTITY: Operator = {"": 1.0}
A: Operator = {"a": 1.0}
AD: Operator = {"d": 1.0}
NUMBER: Operator = {"da": 1.0}
Q: Operator = {"a": 1.0, "d": 1.0}
P: Operator = {"a": -1j, "d": 1j}


def add(*ops: Operator) -> Operator:
    out: Operator = {}
    for op in ops:
        for w, c in op.items():
            out[w] = out.get(w, 0.0) + c
    return {w: c for w, c in out.items() if c != 0}


def scale(op: Operator, s) -> Operator:
    return {w: s * c for w, c in op.items()}


def mul(x: Operator, y: Operator) -> Operator:
    out: Operator = {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            w = wx + wy
            out[w] = out.get(w, 0.0) + cx * cy
    return {w: c for w, c in out.items() if c != 0}


def _lower(v):
    out = np.zeros_like(v)
    k = v.shape[-1]
    out[..., :-1] = v[..., 1:] * np.sqrt(np.arange(1, k))
    return out


def _raise(v):
    out = np.zeros_like(v)
    k = v.shape[-1]
    out[..., 1:] = v[..., :-1] * np.sqrt(np.arange(1, k))
    return out


def _degree(op: Operator) -> int:
    return max((len(w) for w in op), default=0)


class _Frame:
    """Broadcast squeeze data shared by every element of one evaluation."""

    def __init__(self, alpha, r, theta):
        alpha, r, theta = np.broadcast_arrays(
            np.asarray(alpha, dtype=float), np.asarray(r, dtype=float),
            np.asarray(theta, dtype=float),
        )
        self.alpha = alpha
        self.mu = np.cosh(r)
        self.nu = np.exp(1j * theta) * np.sinh(r)
        self.mu_ = self.mu[..., None]
        self.nu_ = self.nu[..., None]

    def vacuum(self, size: int):
        v = np.zeros(self.alpha.shape + (size,), dtype=complex)
        v[..., 0] = 1.0
        return v

    def apply_adjoint(self, op: Operator, v, bra_sign: int):
        """(op')^dag v, with op' the transformed operator for this bra."""
        shift = (bra_sign * self.alpha)[..., None]
        out = np.zeros_like(v)
        for word, c in op.items():
            w = v
            for letter in word:
                if letter == "a":
                    # (a')^dag = mu a^dag - conj(nu) a + shift
                    w = self.mu_ * _raise(w) - np.conj(self.nu_) * _lower(w) + shift * w
                elif letter == "d":
                    # (a'^dag)^dag = a' = mu a - nu a^dag + shift
                    w = self.mu_ * _lower(w) - self.nu_ * _raise(w) + shift * w
                else:
                    raise ValueError(f"unknown ladder letter {letter!r}")
            out = out + np.conj(c) * w
        return out

    def contract(self, v, bra_sign: int, ket_sign: int):
        """<v| D(B) |0> = sum_m conj(v_m) <m|B>."""
        size = v.shape[-1]
        b = (ket_sign - bra_sign) * self.alpha * (self.mu + self.nu)
        m = np.arange(size)
        fact = np.sqrt([float(math.factorial(k)) for k in m])
        coherent = np.exp(-0.5 * np.abs(b) ** 2)[..., None] * b[..., None] ** m / fact
        return np.sum(np.conj(v) * coherent, axis=-1)


def element(op: Operator, alpha, r, theta, bra_sign: int, ket_sign: int):
    """<bra_sign*alpha, xi| op |ket_sign*alpha, xi> for real alpha."""
    frame = _Frame(alpha, r, theta)
    v = frame.apply_adjoint(op, frame.vacuum(_degree(op) + 1), bra_sign)
    return frame.contract(v, bra_sign, ket_sign)


def word_element(word: str, alpha, r, theta, bra_sign: int, ket_sign: int):
    return element({word: 1.0}, alpha, r, theta, bra_sign, ket_sign)


def probe_moments(op: Operator, alpha, r, theta, l, kap, norm_sq, max_power: int = 2):
    """[<Psi_l| op_A^k |Psi_l> for k = 1..max_power].

    Mode B contributes <alpha|alpha> = 1 on the diagonal branches and the
    real overlap kappa on the cross branches.
    """
    frame = _Frame(alpha, r, theta)
    size = max_power * _degree(op) + 1
    out = [0.0] * max_power
    for bra in (+1, -1):
        v = frame.vacuum(size)
        for k in range(max_power):
            v = frame.apply_adjoint(op, v, bra)
            diag = frame.contract(v, bra, bra)
            cross = frame.contract(v, bra, -bra)
            weight = 1.0 if bra == 1 else l**2
            out[k] = out[k] + weight * diag + l * kap * cross
    return [norm_sq * x for x in out]


def probe_expectation(op: Operator, alpha, r, theta, l, kap, norm_sq):
    """<Psi_l| op_A |Psi_l>."""
    return probe_moments(op, alpha, r, theta, l, kap, norm_sq, max_power=1)[0]
