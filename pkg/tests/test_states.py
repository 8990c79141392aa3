import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbell import fock, states
from qbell.errors import DegenerateProbe, NoRoot, OutOfRange
from qbell.states import ComponentParams, EnergyParams, ProbeParams

alphas = st.floats(0.0, 2.0)
rs = st.floats(0.0, 1.5)
thetas = st.floats(0.0, 2 * math.pi)
ls = st.floats(-1.0, 1.0)


def test_kappa_examples():
    assert states.overlap_kappa(ComponentParams(0.0, 0.7, 1.1)) == 1.0
    assert states.overlap_kappa(ComponentParams(1.0, 0.5, 0.0)) == pytest.approx(
        math.exp(-2 * math.e), rel=1e-14)
    assert states.overlap_kappa(ComponentParams(1.0, 0.0, 0.0)) == pytest.approx(
        math.exp(-2), rel=1e-14)


def test_kappa_matches_oracle_overlap():
    c = ComponentParams(1.0, 0.5, 0.0)
    ref = fock.oracle_cross_element(c, lambda ws: ws.identity, tail_tol=1e-12)
    assert abs(ref - states.overlap_kappa(c)) < 1e-10


def test_normalization_examples():
    assert states.normalization(ProbeParams.make(0.3, 0.2, 1.0, 0.0)) == 1.0
    n = states.normalization(ProbeParams.make(1.0, 0.0, 0.0, -1.0))
    assert n == pytest.approx(1 / math.sqrt(2 - 2 * math.exp(-4)), rel=1e-14)
    assert n == pytest.approx(0.7137, abs=1e-4)
    with pytest.raises(DegenerateProbe):
        states.normalization(ProbeParams.make(0.0, 0.4, 0.0, -1.0))


def test_parameter_validation():
    with pytest.raises(OutOfRange):
        ComponentParams(-0.1, 0.0, 0.0)
    with pytest.raises(OutOfRange):
        ComponentParams(0.1, -0.2, 0.0)
    with pytest.raises(OutOfRange):
        ProbeParams.make(0.1, 0.2, 0.0, 1.5)
    assert ComponentParams(0.1, 0.2, 2 * math.pi + 0.5).theta == pytest.approx(0.5)


def test_component_energy_examples():
    e = states.component_energy(ComponentParams(1.0, 0.0, 0.0))
    assert (e.n0, e.beta) == (1.0, 0.0)
    e = states.component_energy(ComponentParams(0.0, math.asinh(1.0), 0.0))
    assert e.n0 == pytest.approx(1.0) and e.beta == 1.0
    e = states.component_energy(ComponentParams(math.sqrt(0.5), math.asinh(math.sqrt(0.5)), math.pi))
    assert e.n0 == pytest.approx(1.0) and e.beta == pytest.approx(0.5)


def test_from_energy_examples():
    c = states.from_energy(EnergyParams(1.0, 0.0), 0.0)
    assert (c.alpha, c.r) == (1.0, 0.0)
    c = states.from_energy(EnergyParams(1.0, 1.0), 0.0)
    assert c.alpha == 0.0 and c.r == pytest.approx(0.881374, abs=1e-6)
    c = states.from_energy(EnergyParams(2.0, 0.5), math.pi)
    assert c.alpha == pytest.approx(1.0) and c.r == pytest.approx(math.asinh(1.0))


@pytest.mark.parametrize("p", [
    ProbeParams.make(0.0, math.asinh(1.0), 0.0, 1.0),
    ProbeParams.make(0.8, 0.4, math.pi, -0.5),
])
def test_input_photon_number_against_oracle(p):
    s = fock.build_probe(p, tail_tol=1e-12)
    ref = fock.expectation(s, fock.workspace(s.dim).number).real
    assert abs(states.input_photon_number(p).n_in_A - ref) < 1e-8


def test_input_photon_number_l0_is_n0():
    p = states.probe_from_energy(1.0, 0.3, 2.1, 0.0)
    assert states.input_photon_number(p).n_in_A == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("beta,theta,l", [(0.3, 1.0, 0.0), (1.0, 0.0, 1.0), (0.5, math.pi, -1.0)])
def test_invert_energy_round_trip(beta, theta, l):
    e = states.invert_energy(1.0, beta, theta, l)
    n = states.input_photon_number(states.probe_from_energy(e.n0, beta, theta, l)).n_in_A
    assert abs(n - 1.0) < 1e-10
    if l == 0.0:
        assert e.n0 == pytest.approx(1.0, abs=1e-12)


def test_invert_energy_round_trip_oracle():
    e = states.invert_energy(1.0, 0.5, math.pi, -1.0)
    p = states.probe_from_energy(e.n0, 0.5, math.pi, -1.0)
    s = fock.build_probe(p, tail_tol=1e-12)
    assert abs(fock.expectation(s, fock.workspace(s.dim).number).real - 1.0) < 1e-8


def test_invert_energy_infeasible():
    with pytest.raises(NoRoot):
        states.invert_energy(0.2, 0.5, 0.0, -1.0)
    with pytest.raises(OutOfRange):
        states.invert_energy(-1.0, 0.5, 0.0, 0.0)


def test_grid_inversion_matches_scalar():
    betas = np.linspace(0.05, 0.95, 7)
    n0, _ = states.invert_energy_grid(1.4, betas, 0.7, 0.6)
    for b, x in zip(betas, n0):
        y, _ = states.solve_energy(1.4, b, 0.7, 0.6)
        assert x == pytest.approx(y, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(alphas, rs, thetas, ls)
def test_theta_reflection_symmetry(alpha, r, theta, l):
    a = states.n_in(alpha, r, theta, l)
    b = states.n_in(alpha, r, 2 * math.pi - theta, l)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)


@settings(max_examples=60, deadline=None)
@given(alphas, rs, thetas, ls)
def test_normalization_identity(alpha, r, theta, l):
    den = states.probe_denominator(alpha, r, theta, l)
    kap = states.kappa(alpha, r, theta)
    assert den == pytest.approx(1 + l * (l + 2 * kap**2), abs=1e-14)
    assert 0.0 < kap <= 1.0


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 10.0), st.floats(0.0, 1.0), thetas)
def test_energy_round_trip(n0, beta, theta):
    c = states.from_energy(EnergyParams(n0, beta), theta)
    e = states.component_energy(c)
    assert e.n0 == pytest.approx(n0, rel=1e-12)
    assert e.beta == pytest.approx(beta, rel=1e-10, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0), rs, thetas)
def test_kappa_decreases_with_alpha(a1, a2, r, theta):
    lo, hi = sorted((a1, a2))
    assert states.kappa(hi, r, theta) <= states.kappa(lo, r, theta)


@settings(max_examples=40, deadline=None)
@given(alphas, rs, thetas, ls)
def test_n_in_nonnegative(alpha, r, theta, l):
    v = states.n_in(alpha, r, theta, l)
    assert np.isnan(v) or v >= 0.0
