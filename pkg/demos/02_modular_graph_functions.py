"""Tour of the modular graph function machinery.

Run with ``python3 demos/02_modular_graph_functions.py``.  Lattice sums are
float64 oracles; the Laurent polynomials are computed at high precision from
constrained multiple sums.  Runtime is under a minute.
"""

import mpmath as mp

from ellipsum.eisenstein import eis_nonholo
from ellipsum.mgf import (
    D_lattice,
    MultiGraph,
    S_direct,
    S_zagier,
    d2pt,
    d3pt,
    identity_suite,
)
from ellipsum.numkernel import PrecisionCtx

ctx = PrecisionCtx(digits=30)
tau = mp.mpc(0, 1)

print("== small graphs reduce to non-holomorphic Eisenstein series ==")
for name, (lhs, rhs, resid) in identity_suite(tau, 100, ctx).items():
    print(f"  {name:<14} lhs={lhs:.10f} rhs={rhs:.10f} resid={resid:.2e}")

print("\n== the lattice sum is modular invariant (up to truncation) ==")
g = MultiGraph.cycle(3)
t = mp.mpc("0.37", "1.21")
print(f"  D(tau)      = {D_lattice(g, t, 80):.12f}")
print(f"  D(-1/tau)   = {D_lattice(g, -1 / t, 80):.12f}")
print(f"  D(tau + 1)  = {D_lattice(g, t + 1, 80):.12f}")

print("\n== constrained double sums have closed forms ==")
with ctx.workprec():
    for m, n in [(2, 1), (3, 2)]:
        direct = S_direct(m, n, 20000)
        closed = float(S_zagier(m, n, ctx))
        print(f"  S({m},{n}): direct={direct:.12f} closed={closed:.12f}")

print("\n== two-point Laurent polynomial at weight 3 ==")
with ctx.workprec():
    poly = d2pt(3, ctx)
    for e in reversed(poly.exponents):
        print(f"  y^{e:>2}: {mp.nstr(poly.coeff(e), 12)}")
    print("  (leading coefficient is 2/945 / 4^3 =",
          mp.nstr(mp.mpf(2) / 945 / 64, 12), ")")

print("\n== three-point Laurent polynomial d_{1,1,1} ==")
with ctx.workprec():
    poly = d3pt(1, 1, 1, ctx=ctx, cutoff=400)
    for e in reversed(poly.exponents):
        print(f"  y^{e:>2}: {mp.nstr(poly.coeff(e), 12)}")
    print("  (reference: 2/945 y^3 + 3 zeta(5)/(4 y^2))")
