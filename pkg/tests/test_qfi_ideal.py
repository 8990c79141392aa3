import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbell import fock, ladder
from qbell.qfi_ideal import gamma1, gamma2, qfi_ideal, qfi_ideal_arr, qfi_ideal_l0
from qbell.states import ComponentParams, ProbeParams


def oracle_g2(c, cross):
    op = lambda ws: ws.number @ ws.number
    if cross:
        return 2.0 * fock.oracle_cross_element(c, op, tail_tol=1e-12).real
    return fock.oracle_diag_element(c, op, tail_tol=1e-12).real


def test_gamma1_examples():
    assert gamma1(ComponentParams(0.0, 0.0, 0.0)) == pytest.approx(0.0, abs=1e-15)
    assert gamma1(ComponentParams(1.0, 0.0, 0.0)) == pytest.approx(2.0, abs=1e-14)
    c = ComponentParams(0.6, 0.4, math.pi / 3)
    assert abs(gamma1(c) - oracle_g2(c, cross=False)) < 1e-8


def test_gamma2_examples():
    assert gamma2(ComponentParams(0.0, 0.0, 0.0)) == pytest.approx(0.0, abs=1e-15)
    c = ComponentParams(0.0, 0.5, 0.7)
    assert gamma2(c) == pytest.approx(2.0 * gamma1(c), rel=1e-14)
    c = ComponentParams(0.8, 0.3, math.pi)
    assert abs(gamma2(c) - oracle_g2(c, cross=True)) < 1e-8


def test_qfi_ideal_examples():
    assert qfi_ideal(ProbeParams.make(1.0, 0.0, 0.0, 0.0)).H == pytest.approx(4.0, abs=1e-13)
    H = qfi_ideal(ProbeParams.make(0.0, 0.5, 1.3, 0.0)).H
    assert H == pytest.approx(math.cosh(2.0) - 1.0, abs=1e-13)
    assert H == pytest.approx(2.76220, abs=1e-5)
    p = ProbeParams.make(0.7, 0.4, math.pi, 1.0)
    s = fock.build_probe(p, tail_tol=1e-12)
    assert abs(qfi_ideal(p).H - fock.oracle_qfi(s, fock.workspace(s.dim).number)) < 1e-8


def test_qfi_ideal_l0_examples():
    assert qfi_ideal_l0(ComponentParams(1.0, 0.0, 0.0)) == pytest.approx(4.0)
    assert qfi_ideal_l0(ComponentParams(0.0, 0.0, 0.0)) == 0.0
    c = ComponentParams(1.0, 0.5, math.pi)
    expected = 4.0 * math.e + math.cosh(2.0) - 1.0
    assert qfi_ideal_l0(c) == pytest.approx(expected, abs=1e-12)
    assert qfi_ideal_l0(c) == pytest.approx(13.6353, abs=1e-4)
    assert qfi_ideal(ProbeParams(c, 0.0)).H == pytest.approx(expected, abs=1e-12)


def test_ladder_engine_reproduces_gammas():
    op = ladder.mul(ladder.NUMBER, ladder.NUMBER)
    for c in (ComponentParams(0.6, 0.4, 1.0), ComponentParams(1.1, 0.7, 2.5)):
        diag = ladder.element(op, c.alpha, c.r, c.theta, 1, 1).real
        cross = ladder.element(op, c.alpha, c.r, c.theta, -1, 1).real
        assert diag == pytest.approx(gamma1(c), abs=1e-11)
        assert 2 * cross == pytest.approx(gamma2(c), abs=1e-11)


@settings(max_examples=80, deadline=None)
@given(st.floats(0, 2), st.floats(0, 1.5), st.floats(0, 2 * math.pi), st.floats(-1, 1))
def test_qfi_nonnegative_and_theta_symmetric(alpha, r, theta, l):
    H = qfi_ideal_arr(alpha, r, theta, l)
    H2 = qfi_ideal_arr(alpha, r, 2 * math.pi - theta, l)
    if np.isnan(H):
        return
    assert H >= -1e-9 * max(1.0, abs(H))
    assert H2 == pytest.approx(H, rel=1e-9, abs=1e-9)
