"""Modular graph function checks: lattice sums, constrained sums, Laurent
polynomials."""

import math

import mpmath as mp
import pytest

from ellipsum.eisenstein import eis_nonholo
from ellipsum.mgf import (
    D_lattice,
    MultiGraph,
    R_direct,
    R_structured,
    S_direct,
    S_zagier,
    d2pt,
    d3pt,
    identity_suite,
    laplace_fd,
)
from ellipsum.numkernel import PrecisionCtx

CTX = PrecisionCtx(digits=30)


def test_multigraph_builders():
    c3 = MultiGraph.cycle(3)
    assert c3.weight == 3 and c3.is_connected() and not c3.has_bridge()
    b4 = MultiGraph.banana(4)
    assert b4.weight == 4 and b4.depth == 3
    g = MultiGraph.from_json(c3.to_json())
    assert g.edge_list == c3.edge_list


def test_bridge_graph_vanishes():
    # a graph with a bridge has a factor averaging to zero
    g = MultiGraph.from_edges(4, [(0, 1, 1), (1, 2, 2), (2, 3, 1)])
    assert g.has_bridge()
    assert D_lattice(g, mp.mpc(0, 1), 40) == 0.0


def test_cycle_equals_nonholo_eisenstein():
    with CTX.workprec():
        tau = mp.mpc("0.3", "1.7")
        for n in (2, 3):
            d = D_lattice(MultiGraph.cycle(n), tau, 120, CTX, with_bound=True)
            e = eis_nonholo(n, tau, CTX, mode="cusp")
            val, bound = d
            assert abs(val - float(e)) < max(float(abs(e)) * bound, 1e-4)


def test_modular_invariance_of_lattice_sum():
    g = MultiGraph.cycle(3)
    tau = mp.mpc("0.37", "1.21")
    a = D_lattice(g, tau, 80)
    b = D_lattice(g, -1 / tau, 80)
    c = D_lattice(g, tau + 1, 80)
    # the square momentum cutoff is not exactly lattice-symmetric, so both
    # transforms agree only up to the truncation error
    assert abs(a - b) < 1e-4
    assert abs(a - c) < 1e-4


def test_block_factorization():
    # two triple-edge blocks joined at a vertex factorize into a product
    tau = mp.mpc("0.1", "1.3")
    g = MultiGraph.from_edges(3, [(0, 1, 3), (1, 2, 3)])
    banana = D_lattice(MultiGraph.banana(3), tau, 30)
    assert abs(D_lattice(g, tau, 30) - banana**2) < 1e-12 * (1 + banana**2)


def test_depth3_guard():
    with pytest.raises(ValueError):
        D_lattice(MultiGraph.banana(4), mp.mpc(0, 1), 40)


def test_S_direct_guards_and_monotone_tail():
    with pytest.raises(ValueError):
        S_direct(5, 0, 100)
    vals = [S_direct(2, 1, c) for c in (500, 1000, 2000)]
    assert vals[0] < vals[1] < vals[2]


def test_S_zagier_matches_direct():
    with CTX.workprec():
        for m, n in [(2, 1), (3, 2)]:
            closed = float(S_zagier(m, n, CTX))
            direct = S_direct(m, n, 4000)
            assert abs(closed - direct) < 1e-6


def test_R_oracle_values():
    with CTX.workprec():
        # R(1,1,1; a, b) = 2^(1-a-b) zeta(3+a+b)
        for a, b in [(1, 1), (2, 0)]:
            ref = float(2 ** (1 - a - b) * mp.zeta(3 + a + b))
            assert abs(R_structured(1, 1, 1, a, b, cutoff=800) - ref) < 1e-6
            assert abs(R_direct(1, 1, 1, a, b, 400) - ref) < 1e-3


def test_d2pt_weight_two():
    with CTX.workprec():
        poly = d2pt(2, CTX)
        y = mp.mpf("1.7")
        ref = (y**2 / 45 + mp.zeta(3) / y) / 16
        assert abs(poly(y) - ref) < mp.mpf("1e-22")


def test_d3pt_permutation_symmetry():
    ctx = PrecisionCtx(digits=20)
    with ctx.workprec():
        a = d3pt(1, 1, 2, ctx=ctx, cutoff=50)
        b = d3pt(2, 1, 1, ctx=ctx, cutoff=50)
        for e in set(a.exponents) | set(b.exponents):
            assert abs(a.coeff(e) - b.coeff(e)) < mp.mpf("1e-16")


def test_d3pt_guard():
    with pytest.raises(ValueError):
        d3pt(0, 1, 1)


def test_laplace_fd_power_law():
    # the hyperbolic Laplacian acts on y^s with eigenvalue s(s-1)
    with CTX.workprec():
        lap = laplace_fd(lambda t: mp.im(t) ** 3, mp.mpc(0, 1), mp.mpf("1e-4"), CTX)
        assert abs(lap - 6) < mp.mpf("1e-5")


def test_identity_suite_keys_and_residuals():
    suite = identity_suite(mp.mpc(0, 1), 60, CTX)
    assert set(suite) == {"D2=E2/16", "D111=E3/64", "D3=(E3+z3)/64",
                          "D1111=E4/256"}
    for _, (_, _, resid) in suite.items():
        assert resid < 5e-3
