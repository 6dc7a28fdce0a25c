"""Iterated Eisenstein integral checks."""

import mpmath as mp
import pytest

from ellipsum.eisenstein import eis_Gbb
from ellipsum.eisint import (
    b30_reference,
    cocycle_S,
    eichler_E,
    gamma,
    gammaL0,
    gamma_inf,
)
from ellipsum.emzv import B_depth1
from ellipsum.numkernel import PrecisionCtx, bernoulli_number
from ellipsum.qseries import eval_at

CTX = PrecisionCtx(digits=30)
N = 30


def test_gamma_zero_word():
    g = gamma((0,), N)
    assert sorted(g.coeffs) == [(1, 0)]
    assert abs(g.coeff(1, 0) - 2j * mp.pi) < mp.mpf("1e-14")


def test_gamma_derivative_rule():
    # d/dtau Gamma(n1, rest) = -Gbb_{n1} * Gamma(rest)
    with CTX.workprec():
        for nvec in [(4,), (0, 4), (4, 0), (4, 6)]:
            lhs = gamma(nvec, N).dtau()
            tail = gamma(nvec[1:], N) if len(nvec) > 1 else None
            rhs = eis_Gbb(nvec[0], N)
            if tail is not None:
                rhs = rhs.mul(tail)
            resid = lhs.add(rhs).truncate(N - 1).max_abs_coeff()
            scale = max(mp.mpf(1), lhs.max_abs_coeff())
            assert resid < mp.mpf("1e-20") * scale


def test_gamma_splits_into_left_aligned_and_cusp():
    with CTX.workprec():
        for n, k in [(4, 1), (4, 2), (6, 3)]:
            word = (0,) * (k - 1) + (n,)
            lhs = gamma(word, N)
            rhs = gammaL0(n, k, N).add(gamma_inf(word, N))
            assert lhs.sub(rhs).max_abs_coeff() < mp.mpf("1e-18")


def test_gamma_shuffle_numeric():
    with CTX.workprec():
        tau = mp.mpc(0, "1.3")
        for a, b in [((0,), (4,)), ((4,), (4,)), ((0,), (0,))]:
            lhs = eval_at(gamma(a, N), tau, CTX) * eval_at(gamma(b, N), tau, CTX)
            if a == b:
                rhs = 2 * eval_at(gamma(a + b, N), tau, CTX)
            else:
                rhs = eval_at(gamma(a + b, N), tau, CTX) + eval_at(
                    gamma(b + a, N), tau, CTX
                )
            assert abs(lhs - rhs) < mp.mpf("1e-18")


def test_gammaL0_structure():
    with CTX.workprec():
        # odd weights vanish identically
        assert gammaL0(5, 2, N).max_abs_coeff() == 0
        # first q-coefficient is -2/(n-1)! at k = 1
        for n in (4, 6, 8):
            assert abs(gammaL0(n, 1, N).coeff(0, 1)
                       + 2 / mp.factorial(n - 1)) < mp.mpf("1e-20")
    with pytest.raises(ValueError):
        gammaL0(4, 4, N)


def test_eichler_constant_and_guard():
    with CTX.workprec():
        assert abs(eichler_E(4, N).coeff(0, 0) - mp.zeta(3) / 2) < mp.mpf("1e-25")
    with pytest.raises(ValueError):
        eichler_E(3, N)


def test_cocycle_weight4():
    with CTX.workprec():
        c = cocycle_S(4)
        half = mp.factorial(2) / 2
        assert abs(c[(0, 2)] - half * mp.zeta(3)) < mp.mpf("1e-25")
        assert abs(c[(2, 0)] + half * mp.zeta(3)) < mp.mpf("1e-25")
        # the XY coefficient is -(2 pi i)^3 B_2 B_2 / (2! 2!) * (2!/2)
        b2 = bernoulli_number(2)
        ref = -half * (2j * mp.pi) ** 3 * (
            mp.mpf(b2.numerator) / b2.denominator
        ) ** 2 / 4
        assert abs(c[(1, 1)] - ref) < mp.mpf("1e-22")
        # antisymmetry under (X, Y) -> (Y, -X) for even weight 4
        x, y = mp.mpc("0.3", "0.1"), mp.mpc("-0.2", "0.7")
        assert abs(c(x, y) + c(y, -x)) < mp.mpf("1e-20")


def test_b30_reference_matches_series():
    with CTX.workprec():
        tau = mp.mpc("0.2", "1.1")
        assert abs(b30_reference(tau, CTX)
                   - B_depth1(3, 2, tau, CTX)) < mp.mpf("1e-20")
