"""Truncated q/tau series ring and regularized primitive checks."""

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipsum.numkernel import PrecisionCtx
from ellipsum.qseries import (
    GuardError,
    QTauSeries,
    as_tau,
    auto_q_order,
    eval_at,
    eval_with_bound,
    reg_primitive,
)

CTX = PrecisionCtx(digits=30)


def _q(m, c=1, q_order=20):
    return QTauSeries(q_order, {(0, m): mp.mpc(c)})


def test_tau_guard():
    with pytest.raises(GuardError):
        as_tau(mp.mpc(1, -0.5))
    with pytest.raises(GuardError):
        as_tau(mp.mpf(2))
    assert as_tau(mp.mpc(0, 1)).value == mp.mpc(0, 1)


def test_ring_example():
    one_plus_q = QTauSeries(10, {(0, 0): mp.mpc(1), (0, 1): mp.mpc(1)})
    one_minus_q = QTauSeries(10, {(0, 0): mp.mpc(1), (0, 1): mp.mpc(-1)})
    prod = one_plus_q * one_minus_q
    assert abs(prod.coeff(0, 0) - 1) < mp.mpf("1e-25")
    assert abs(prod.coeff(0, 1)) < mp.mpf("1e-25")
    assert abs(prod.coeff(0, 2) + 1) < mp.mpf("1e-25")


def test_mul_truncates_to_min_order():
    f = QTauSeries(5, {(0, 3): mp.mpc(1)})
    g = QTauSeries(10, {(0, 4): mp.mpc(1)})
    prod = f * g
    assert prod.q_order == 5
    assert prod.coeff(0, 7) == 0


def test_dtau_rules():
    # d/dtau tau^2 = 2 tau ; d/dtau q^m = 2 pi i m q^m
    f = QTauSeries.tau_power(2, 10)
    assert abs(f.dtau().coeff(1, 0) - 2) < mp.mpf("1e-25")
    g = _q(3)
    assert abs(g.dtau().coeff(0, 3) - 6j * mp.pi) < mp.mpf("1e-24")


def test_reg_primitive_examples():
    two_pi_i = 2j * mp.pi
    # constant c integrates to -c tau
    f = QTauSeries.constant(mp.mpc(2, 1), 10)
    F = reg_primitive(f)
    assert abs(F.coeff(1, 0) + mp.mpc(2, 1)) < mp.mpf("1e-25")
    assert F.coeff(0, 0) == 0
    # q^m integrates to -q^m/(2 pi i m)
    F = reg_primitive(_q(4))
    assert abs(F.coeff(0, 4) + 1 / (4 * two_pi_i)) < mp.mpf("1e-25")
    # tau q^m picks up the extra 1/(2 pi i m)^2 correction
    f = QTauSeries(10, {(1, 2): mp.mpc(1)})
    F = reg_primitive(f)
    assert abs(F.coeff(1, 2) + 1 / (2 * two_pi_i)) < mp.mpf("1e-25")
    assert abs(F.coeff(0, 2) - 1 / (2 * two_pi_i) ** 2) < mp.mpf("1e-25")


def test_reg_primitive_linear():
    f, g = _q(2, mp.mpc(1, 3)), QTauSeries.tau_power(1, 20, mp.mpc(-2))
    lhs = reg_primitive(f.add(g.scale(3)))
    rhs = reg_primitive(f).add(reg_primitive(g).scale(3))
    assert lhs.sub(rhs).max_abs_coeff() < mp.mpf("1e-24")


def test_eval_respects_arithmetic():
    with CTX.workprec():
        tau = mp.mpc("0.3", "1.4")
        f = QTauSeries(25, {(0, 1): mp.mpc(2), (1, 0): mp.mpc(0, 1)})
        g = QTauSeries(25, {(0, 2): mp.mpc(-1), (0, 0): mp.mpc(3)})
        lhs = eval_at(f * g, tau, CTX)
        rhs = eval_at(f, tau, CTX) * eval_at(g, tau, CTX)
        # product truncation only drops terms beyond the shared order
        assert abs(lhs - rhs) < mp.mpf("1e-20")


def test_eval_with_bound():
    with CTX.workprec():
        tau = mp.mpc(0, 2)
        f = QTauSeries(15, {(0, j): mp.mpc(1) for j in range(16)})
        val, bound = eval_with_bound(f, tau, CTX)
        assert bound > 0
        exact = 1 / (1 - mp.exp(2j * mp.pi * tau))
        assert abs(val - exact) <= bound * 10


def test_auto_q_order_scales_with_height():
    assert auto_q_order(as_tau(mp.mpc(0, 1)), CTX) > auto_q_order(
        as_tau(mp.mpc(0, 4)), CTX
    )


def test_json_roundtrip():
    f = QTauSeries(8, {(1, 2): mp.mpc("0.25", "-3"), (0, 0): mp.mpc(7)})
    g = QTauSeries.from_json(f.to_json())
    assert g.q_order == f.q_order
    assert f.sub(g).max_abs_coeff() < mp.mpf("1e-20")


@st.composite
def _series(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    coeffs = {}
    for _ in range(n):
        i = draw(st.integers(min_value=0, max_value=3))
        j = draw(st.integers(min_value=0, max_value=10))
        re = draw(st.floats(min_value=-4, max_value=4, allow_nan=False))
        im = draw(st.floats(min_value=-4, max_value=4, allow_nan=False))
        coeffs[(i, j)] = mp.mpc(re, im)
    return QTauSeries(12, coeffs)


@settings(max_examples=40, deadline=None)
@given(_series())
def test_primitive_inverts_dtau(f):
    with CTX.workprec():
        resid = reg_primitive(f).dtau().add(f).max_abs_coeff()
        assert resid < mp.mpf("1e-18") * (1 + f.max_abs_coeff())


@settings(max_examples=25, deadline=None)
@given(_series(), _series())
def test_addition_commutes_with_eval(f, g):
    with CTX.workprec():
        tau = mp.mpc("0.1", "1.2")
        lhs = eval_at(f.add(g), tau, CTX)
        rhs = eval_at(f, tau, CTX) + eval_at(g, tau, CTX)
        assert abs(lhs - rhs) < mp.mpf("1e-15")
