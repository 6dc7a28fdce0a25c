"""A-cycle and B-cycle elliptic multiple zeta value checks."""

import mpmath as mp
import pytest

from ellipsum.emzv import (
    A_depth1,
    A_depth1_general,
    A_inf_depth1,
    A_len1,
    A_len2,
    B_depth1,
    B_inf_depth1,
    appendixB_matrices,
    appendixB_vectors,
    hatA,
    quadrature_oracle,
    vector_weight,
)
from ellipsum.numkernel import PrecisionCtx

CTX = PrecisionCtx(digits=30)
TAU = mp.mpc("0.2", "1.1")


def test_depth_one_length_one_constants():
    with CTX.workprec():
        for n in (0, 2, 3, 4, 6):
            assert abs(A_depth1(n, 1, TAU, CTX) - A_len1(n)) < mp.mpf("1e-25")


def test_length_two_shuffle():
    # A(n) A(m) = A(n,m) + A(m,n)
    with CTX.workprec():
        for n, m in [(2, 2), (2, 4)]:
            lhs = A_len1(n) * A_len1(m)
            rhs = A_len2(n, m, TAU, CTX) + A_len2(m, n, TAU, CTX)
            assert abs(lhs - rhs) < mp.mpf("1e-24")
        # the (2,2) case collapses to -pi^2/72
        val = A_len2(2, 2, TAU, CTX)
        assert abs(val + mp.pi**2 / 72) < mp.mpf("1e-24")


def test_even_length_two_is_constant():
    with CTX.workprec():
        a = A_len2(2, 4, TAU, CTX)
        b = A_len2(2, 4, mp.mpc(0, 1), CTX)
        assert abs(a - b) < mp.mpf("1e-24")


def test_reversal_symmetry():
    # A(0^s, n, 0^r) = (-1)^n A(0^r, n, 0^s)
    with CTX.workprec():
        for s, n, r in [(1, 2, 0), (2, 3, 1), (0, 4, 2)]:
            lhs = A_depth1_general(s, n, r, TAU, CTX)
            rhs = (-1) ** n * A_depth1_general(r, n, s, TAU, CTX)
            assert abs(lhs - rhs) < mp.mpf("1e-22")


def test_hatA_normalization_and_forms():
    with CTX.workprec():
        assert abs(hatA(2, TAU, CTX)) < mp.mpf("1e-25")
        direct = hatA(4, TAU, CTX, form="direct")
        eichler = hatA(4, TAU, CTX, form="eichler")
        assert abs(direct - eichler) < mp.mpf("1e-20")
    with pytest.raises(ValueError):
        hatA(1, TAU, CTX)


def test_cusp_constants_match_series_limit():
    # at large Im tau the depth-one series approaches its cusp constant
    with CTX.workprec():
        high = mp.mpc(0, 40)
        for n, r in [(2, 2), (3, 2), (0, 3)]:
            assert abs(A_depth1(n, r, high, CTX)
                       - A_inf_depth1(n, r)) < mp.mpf("1e-25")


def test_B_inf_small_golden():
    with CTX.workprec():
        P = 2j * mp.pi
        poly = B_inf_depth1(3, 1)
        assert poly.exponents == [-1, 0, 3]
        assert abs(poly.coeff(3) + P**2 / 720) < mp.mpf("1e-24")
        assert abs(poly.coeff(0) + mp.zeta(3) / P) < mp.mpf("1e-24")
        assert abs(poly.coeff(-1) + 6 * mp.zeta(4) / P**2) < mp.mpf("1e-24")


def test_B_inf_guards():
    with pytest.raises(ValueError):
        B_inf_depth1(1, 2)
    with pytest.raises(ValueError):
        B_inf_depth1(4, -1)


def test_B_depth1_approaches_laurent_at_cusp():
    with CTX.workprec():
        high = mp.mpc(0, 25)
        for n, r in [(3, 2), (2, 3)]:
            assert abs(B_depth1(n, r, high, CTX)
                       - B_inf_depth1(n, r - 1)(high)) < mp.mpf("1e-20")


def test_quadrature_oracle_depth_one():
    ctx = PrecisionCtx(digits=15)
    with ctx.workprec():
        tau = mp.mpc(0, "1.3")
        assert abs(quadrature_oracle((2, 0), tau, ctx)
                   - A_depth1(2, 2, tau, ctx)) < mp.mpf("1e-10")


def test_appendixB_matrix_consistency():
    # S^2 acts as (-1)^k on weight-k vectors: M_S(at S tau) composed with
    # itself must square to the identity up to sign; verify numerically
    ctx = PrecisionCtx(digits=30)
    tau = mp.mpc("0.13", "1.07")
    with ctx.workprec():
        for which in ("V32", "V23", "V14"):
            w = vector_weight(which)
            v = appendixB_vectors(which, tau, ctx)
            m = appendixB_matrices(which, "T")
            v_shift = appendixB_vectors(which, tau + 1, ctx)
            for i in range(6):
                rhs = sum(
                    mp.mpf(m[i][j].numerator) / m[i][j].denominator * v[j]
                    for j in range(6)
                )
                assert abs(v_shift[i] - rhs) < mp.mpf("1e-22")
            assert w in (-1, -2, -3)
    with pytest.raises(ValueError):
        appendixB_matrices("V32", "R")
