"""Jacobi theta / Kronecker kernel / Eisenstein series checks."""

import mpmath as mp
import pytest

from ellipsum.eisenstein import (
    d_ab_average,
    e_ab,
    eis_E,
    eis_G,
    eis_Gbb,
    eis_nonholo,
    eta,
    eta_multiplier,
    f_n,
    green1,
    kronecker_F,
    omega_n,
    theta,
    theta_prime0,
)
from ellipsum.numkernel import PrecisionCtx
from ellipsum.qseries import GuardError

CTX = PrecisionCtx(digits=30)
TAU = mp.mpc("0.2", "1.3")
XI = mp.mpc("0.31", "0.22")


def test_theta_basics():
    with CTX.workprec():
        assert abs(theta(0, TAU, CTX)) < mp.mpf("1e-25")
        t = theta(XI, TAU, CTX)
        assert abs(theta(XI + 1, TAU, CTX) + t) < mp.mpf("1e-24")
        assert abs(theta(-XI, TAU, CTX) + t) < mp.mpf("1e-24")


def test_theta_product_vs_sum():
    with CTX.workprec():
        for k in range(10):
            xi = mp.mpc("0.1", "0.05") * (k + 1) / 3 + mp.mpf("0.07") * k
            a = theta(xi, TAU, CTX, mode="product")
            b = theta(xi, TAU, CTX, mode="sum")
            assert abs(a - b) < mp.mpf("1e-24")


def test_theta_prime0_matches_derivative():
    with CTX.workprec():
        h = mp.mpf("1e-8")
        fd = (theta(h, TAU, CTX) - theta(-h, TAU, CTX)) / (2 * h)
        assert abs(fd - theta_prime0(TAU, CTX)) < mp.mpf("1e-14")


def test_eta_transformations():
    with CTX.workprec():
        e = eta(TAU, CTX)
        assert abs(eta(TAU + 1, CTX) - mp.exp(1j * mp.pi / 12) * e) < mp.mpf("1e-24")
        assert abs(eta(-1 / TAU, CTX) - mp.sqrt(-1j * TAU) * e) < mp.mpf("1e-24")


def test_eta_multiplier_generators():
    with CTX.workprec():
        mult_T = eta_multiplier([[1, 1], [0, 1]])
        assert abs(mult_T - mp.exp(1j * mp.pi / 12)) < mp.mpf("1e-24")
        # gamma = [[2,1],[1,1]]: check against a direct evaluation
        a, b, c, d = 2, 1, 1, 1
        gtau = (a * TAU + b) / (c * TAU + d)
        mult = eta_multiplier([[a, b], [c, d]])
        ref = eta(gtau, CTX) / (mp.sqrt(c * TAU + d) * eta(TAU, CTX))
        assert abs(mult - ref) < mp.mpf("1e-22")


def test_kronecker_F_symmetry_and_pole():
    with CTX.workprec():
        al = mp.mpc("0.17", "0.11")
        assert abs(kronecker_F(XI, al, TAU, CTX)
                   - kronecker_F(al, XI, TAU, CTX)) < mp.mpf("1e-24")
        # simple pole 1/alpha at alpha -> 0
        small = mp.mpf("1e-8")
        assert abs(small * kronecker_F(XI, small, TAU, CTX) - 1) < mp.mpf("1e-6")


def test_f_expansion_of_kernel():
    # F(xi, alpha) = sum_n f_n(xi) (2 pi i alpha)^(n-1), checked at small alpha
    with CTX.workprec():
        al = mp.mpf("0.01")
        partial = sum(
            f_n(n, XI, TAU, CTX) * (2j * mp.pi * al) ** (n - 1) for n in range(12)
        )
        assert abs(partial - kronecker_F(XI, al, TAU, CTX)) < mp.mpf("1e-20")


def test_f_small_weights():
    with CTX.workprec():
        assert abs(f_n(0, XI, TAU, CTX) - 2j * mp.pi) < mp.mpf("1e-25")
        assert abs(f_n(1, mp.mpf("0.5"), TAU, CTX)) < mp.mpf("1e-24")


def test_f_band_guard():
    with pytest.raises(GuardError):
        f_n(1, mp.mpc(0, "1.4"), TAU, CTX)


def test_eisenstein_series_constants():
    with CTX.workprec():
        assert eis_G(5, 10).max_abs_coeff() == 0
        assert abs(eis_G(4, 10).coeff(0, 0) - 2 * mp.zeta(4)) < mp.mpf("1e-24")
        assert abs(eis_E(4, 10).coeff(0, 0) - mp.mpf(1) / 1440) < mp.mpf("1e-25")
        # normalized variants agree up to the stated prefactor
        g = eis_G(4, 10)
        gbb = eis_Gbb(4, 10)
        resid = gbb.sub(g.scale((2j * mp.pi) ** (-3))).max_abs_coeff()
        assert resid < mp.mpf("1e-24")


def test_nonholo_cusp_vs_lattice():
    with CTX.workprec():
        for s in (2, 3):
            a = eis_nonholo(s, mp.mpc(0, 1), CTX, mode="cusp")
            b = eis_nonholo(s, mp.mpc(0, 1), CTX, mode="lattice", M=100)
            assert abs(a - b) < mp.mpf("1e-3")


def test_green1_theta_vs_fourier():
    with CTX.workprec():
        xi, tau = mp.mpc("0.3", "0.4"), mp.mpc(0, 1)
        a = green1(xi, tau, CTX, mode="theta")
        b = green1(xi, tau, CTX, mode="fourier")
        assert abs(a - b) < mp.mpf("1e-20")


def test_e11_is_four_times_green():
    with CTX.workprec():
        assert abs(e_ab(1, 1, XI, TAU, CTX) - 4 * green1(XI, TAU, CTX)) < mp.mpf(
            "1e-20"
        )


def test_e_ab_low_weight_guard():
    with pytest.raises(GuardError):
        e_ab(1, 0, XI, TAU, CTX)


def test_e22_lattice_vs_fourier_average():
    with CTX.workprec():
        a = e_ab(2, 2, XI, TAU, CTX)
        b = d_ab_average(2, 2, XI, TAU, CTX)
        assert abs(a - b) < mp.mpf("1e-6")


def test_omega_reductions():
    with CTX.workprec():
        # cell reduction: arbitrary shifts by the lattice leave omega fixed
        w = omega_n(3, XI, TAU, CTX)
        assert abs(omega_n(3, XI + 2 + 3 * TAU, TAU, CTX) - w) < mp.mpf("1e-20")
        assert abs(omega_n(3, -XI, TAU, CTX) + w) < mp.mpf("1e-20")
