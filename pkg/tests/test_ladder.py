import math

import numpy as np
import pytest

from qbell import fock, ladder
from qbell.states import ComponentParams


@pytest.mark.parametrize("word", ["", "a", "d", "da", "ad", "aa", "dd", "dada", "adda"])
def test_words_against_oracle(word):
    c = ComponentParams(0.7, 0.35, 1.3)

    def op(ws):
        m = ws.identity
        for letter in word:
            m = m @ (ws.a if letter == "a" else ws.ad)
        return m

    for bra in (1, -1):
        got = ladder.word_element(word, c.alpha, c.r, c.theta, bra, 1)
        if bra == 1:
            ref = fock.oracle_diag_element(c, op, tail_tol=1e-12)
        else:
            ref = fock.oracle_cross_element(c, op, tail_tol=1e-12)
        assert got == pytest.approx(ref, abs=1e-10)


def test_operator_algebra():
    qq = ladder.mul(ladder.Q, ladder.Q)
    assert qq == {"aa": 1.0, "ad": 1.0, "da": 1.0, "dd": 1.0}
    zero = ladder.add(ladder.Q, ladder.scale(ladder.Q, -1))
    assert zero == {}


def test_broadcasting():
    alphas = np.array([0.0, 0.5, 1.0])
    out = ladder.element(ladder.NUMBER, alphas, 0.0, 0.0, 1, 1)
    assert np.allclose(out, alphas**2)
